#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lrsp/error.hpp"
#include "lrsp/util/io.hpp"

namespace lrsp::acquisition {

struct Hypothesis {
    std::string hyp;
    double logprob = 0;
};

/// Externally produced model scores for one id.
struct ScoreRecord {
    std::optional<double> best_logprob = std::nullopt;      // parser confidence in its top output
    std::vector<Hypothesis> nbest = {};                     // sorted by descending logprob
    std::optional<double> bt_parse_logprob = std::nullopt;  // parser log-likelihood of the gold LF given a back-translation
    std::optional<double> gen_logprob = std::nullopt;       // generator confidence in the utterance given its LF
    std::optional<double> perplexity = std::nullopt;        // language-model perplexity per word
};

/// Log-probabilities above zero by more than this are rejected as corrupt.
inline constexpr double kLogprobSlack = 1e-9;

class ScoreTable {
public:
    void add(const std::string& id, ScoreRecord rec) {
        auto check = [&](double lp, const char* what) {
            if (std::isnan(lp) || lp > kLogprobSlack) {
                throw Error(Errc::InvalidArgument, id + ": " + what + " must be a log-probability <= 0");
            }
        };
        if (rec.best_logprob) check(*rec.best_logprob, "best_logprob");
        if (rec.bt_parse_logprob) check(*rec.bt_parse_logprob, "bt_parse_logprob");
        if (rec.gen_logprob) check(*rec.gen_logprob, "gen_logprob");
        for (const auto& h : rec.nbest) check(h.logprob, "nbest logprob");
        if (rec.perplexity && !(*rec.perplexity >= 0)) throw Error(Errc::InvalidArgument, id + ": negative perplexity");
        std::stable_sort(rec.nbest.begin(), rec.nbest.end(),
                         [](const Hypothesis& a, const Hypothesis& b) { return a.logprob > b.logprob; });
        rows_[id] = std::move(rec);
    }

    const ScoreRecord* find(const std::string& id) const {
        auto it = rows_.find(id);
        return it == rows_.end() ? nullptr : &it->second;
    }

    std::size_t size() const noexcept { return rows_.size(); }

    double best_logprob(const std::string& id) const {
        auto r = find(id);
        if (!r || !r->best_logprob) throw Error(Errc::MissingScore, "no best_logprob for " + id);
        return *r->best_logprob;
    }
    const std::vector<Hypothesis>& nbest(const std::string& id) const {
        auto r = find(id);
        if (!r || r->nbest.empty()) throw Error(Errc::MissingScore, "no nbest list for " + id);
        return r->nbest;
    }
    double bt_parse_logprob(const std::string& id) const {
        auto r = find(id);
        if (!r || !r->bt_parse_logprob) throw Error(Errc::MissingScore, "no bt_parse_logprob for " + id);
        return *r->bt_parse_logprob;
    }
    double gen_logprob(const std::string& id) const {
        auto r = find(id);
        if (!r || !r->gen_logprob) throw Error(Errc::MissingScore, "no gen_logprob for " + id);
        return *r->gen_logprob;
    }
    double perplexity(const std::string& id) const {
        auto r = find(id);
        if (!r || !r->perplexity) throw Error(Errc::MissingScore, "no perplexity for " + id);
        return *r->perplexity;
    }

    /// JSON-lines {id, best_logprob?, nbest?:[{hyp, logprob}], bt_parse_logprob?,
    /// gen_logprob?, perplexity?}. A log-probability may be the string "-inf".
    static ScoreTable load(const std::filesystem::path& path) {
        ScoreTable t;
        auto number = [](const io::Json& j) -> double {
            if (j.is_string() && j.get<std::string>() == "-inf") return -std::numeric_limits<double>::infinity();
            return j.get<double>();
        };
        auto opt = [&](const io::Json& row, const char* key) -> std::optional<double> {
            if (!row.contains(key) || row[key].is_null()) return std::nullopt;
            return number(row[key]);
        };
        for (const auto& row : io::read_jsonl(path)) {
            try {
                ScoreRecord rec;
                rec.best_logprob = opt(row, "best_logprob");
                rec.bt_parse_logprob = opt(row, "bt_parse_logprob");
                rec.gen_logprob = opt(row, "gen_logprob");
                rec.perplexity = opt(row, "perplexity");
                if (row.contains("nbest") && !row["nbest"].is_null()) {
                    for (const auto& h : row["nbest"]) {
                        rec.nbest.push_back({h.at("hyp").get<std::string>(), number(h.at("logprob"))});
                    }
                }
                t.add(row.at("id").get<std::string>(), std::move(rec));
            } catch (const io::Json::exception& e) {
                throw Error(Errc::Io, path.string() + ": bad score row: " + e.what());
            }
        }
        return t;
    }

private:
    std::map<std::string, ScoreRecord> rows_;
};

}  // namespace lrsp::acquisition
