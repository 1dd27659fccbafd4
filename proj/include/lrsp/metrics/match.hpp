#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lrsp/metrics/sql.hpp"
#include "lrsp/util/io.hpp"
#include "lrsp/util/text.hpp"

namespace lrsp::metrics {

/// Whitespace-normalized string equality.
inline bool exact_match(std::string_view pred, std::string_view gold) {
    return text::normalize_ws(pred) == text::normalize_ws(gold);
}

/// Every clause kind holds the same set of sub-components, order ignored.
inline bool set_match(std::string_view pred, std::string_view gold) {
    const auto p = parse_sql(pred);
    const auto g = parse_sql(gold);
    for (Clause c : kClauses) {
        if (p.set(c) != g.set(c)) return false;
    }
    return true;
}

struct ComponentF1 {
    std::map<Clause, double> per_clause;  // 0..100
    double macro = 0;                     // mean over the five clause kinds
};

/// F1 between two sub-component sets; two empty sets agree perfectly.
inline double set_f1(const std::set<std::string>& pred, const std::set<std::string>& gold) {
    if (pred.empty() && gold.empty()) return 1.0;
    if (pred.empty() || gold.empty()) return 0.0;
    double hit = 0;
    for (const auto& s : pred) hit += gold.count(s) ? 1.0 : 0.0;
    if (hit == 0) return 0.0;
    const double p = hit / static_cast<double>(pred.size());
    const double r = hit / static_cast<double>(gold.size());
    return 2 * p * r / (p + r);
}

/// Per-clause F1 averaged over the corpus, scaled to 0..100. A pair where
/// either side fails to parse scores 0 on every clause.
inline ComponentF1 component_f1(const std::vector<std::string>& preds, const std::vector<std::string>& golds) {
    if (preds.size() != golds.size()) throw Error(Errc::InvalidArgument, "prediction and gold counts differ");
    if (preds.empty()) throw Error(Errc::EmptyCorpus, "component F1 of an empty corpus");
    ComponentF1 out;
    for (Clause c : kClauses) out.per_clause[c] = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        SqlClauses p, g;
        try {
            p = parse_sql(preds[i]);
            g = parse_sql(golds[i]);
        } catch (const Error& e) {
            if (e.code() != Errc::SqlParseError) throw;
            continue;
        }
        for (Clause c : kClauses) out.per_clause[c] += set_f1(p.set(c), g.set(c));
    }
    for (Clause c : kClauses) {
        out.per_clause[c] *= 100.0 / static_cast<double>(preds.size());
        out.macro += out.per_clause[c] / static_cast<double>(kClauses.size());
    }
    return out;
}

/// JSON-lines {id, pred}.
inline std::map<std::string, std::string> load_predictions(const std::filesystem::path& path) {
    std::map<std::string, std::string> out;
    for (const auto& row : io::read_jsonl(path)) {
        try {
            out[row.at("id").get<std::string>()] = row.at("pred").get<std::string>();
        } catch (const io::Json::exception& e) {
            throw Error(Errc::Io, path.string() + ": bad prediction row: " + e.what());
        }
    }
    return out;
}

}  // namespace lrsp::metrics
