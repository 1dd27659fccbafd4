#pragma once

#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lrsp/error.hpp"
#include "lrsp/metrics/match.hpp"
#include "lrsp/util/io.hpp"

namespace lrsp::harness {

enum class MatchMode { Exact, Set };

struct ParaphraseRow {
    std::string id;
    std::string utterance;
    std::string gold;  // the query the paraphrase must still map to
    std::size_t round = 1;
};

/// JSON-lines {id, utterance, gold | lf, round?}.
inline std::vector<ParaphraseRow> load_paraphrases(const std::filesystem::path& path) {
    std::vector<ParaphraseRow> out;
    for (const auto& row : io::read_jsonl(path)) {
        try {
            ParaphraseRow r;
            r.id = row.at("id").get<std::string>();
            r.utterance = row.value("utterance", std::string{});
            r.gold = row.contains("gold") ? row["gold"].get<std::string>() : row.at("lf").get<std::string>();
            if (row.contains("round")) {
                const auto q = row["round"].get<long long>();
                if (q < 1) throw Error(Errc::Io, path.string() + ": round must be >= 1 for " + r.id);
                r.round = static_cast<std::size_t>(q);
            }
            out.push_back(std::move(r));
        } catch (const io::Json::exception& e) {
            throw Error(Errc::Io, path.string() + ": bad paraphrase row: " + e.what());
        }
    }
    return out;
}

struct RetentionRow {
    std::string label;
    std::size_t total = 0;
    std::size_t kept = 0;
    double percent() const { return total ? 100.0 * static_cast<double>(kept) / static_cast<double>(total) : 0.0; }
};

struct FilterResult {
    std::vector<std::string> kept;
    std::vector<std::string> discarded;
    std::vector<RetentionRow> rounds;
    RetentionRow total{"Total"};
};

/// Keeps a paraphrase when the parser's prediction for it matches its gold
/// query. In set mode a query that does not parse never matches.
inline FilterResult paraphrase_filter(const std::vector<ParaphraseRow>& rows,
                                      const std::map<std::string, std::string>& predictions, MatchMode mode) {
    FilterResult out;
    std::map<std::size_t, RetentionRow> by_round;
    for (const auto& r : rows) {
        auto it = predictions.find(r.id);
        if (it == predictions.end()) throw Error(Errc::MissingPrediction, "no prediction for " + r.id);
        bool ok = false;
        if (mode == MatchMode::Exact) {
            ok = metrics::exact_match(it->second, r.gold);
        } else {
            try {
                ok = metrics::set_match(it->second, r.gold);
            } catch (const Error& e) {
                if (e.code() != Errc::SqlParseError) throw;
            }
        }
        (ok ? out.kept : out.discarded).push_back(r.id);
        auto& row = by_round[r.round];
        row.label = "Round " + std::to_string(r.round);
        ++row.total;
        row.kept += ok;
        ++out.total.total;
        out.total.kept += ok;
    }
    for (auto& [q, row] : by_round) out.rounds.push_back(row);
    return out;
}

/// Plain-text table with one line per filtering round and a total line.
inline std::string retention_table(const FilterResult& r) {
    std::string out = "#Rounds   kept/total   % kept\n";
    auto line = [&](const RetentionRow& row) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%-9s %5zu/%-6zu %6.2f\n", row.label.c_str(), row.kept, row.total,
                      row.percent());
        out += buf;
    };
    for (const auto& row : r.rounds) line(row);
    line(r.total);
    return out;
}

}  // namespace lrsp::harness
