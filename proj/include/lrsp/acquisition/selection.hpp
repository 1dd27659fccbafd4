#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lrsp/acquisition/quantile.hpp"
#include "lrsp/data/example.hpp"
#include "lrsp/error.hpp"
#include "lrsp/util/io.hpp"

namespace lrsp::acquisition {

struct Pick {
    std::string id;
    double score = 0;
};

struct Selection {
    std::string method;
    std::vector<Pick> picks;

    std::vector<std::string> ids() const {
        std::vector<std::string> out;
        for (const auto& p : picks) out.push_back(p.id);
        return out;
    }
};

/// Pool ids not yet labeled, in lexicographic order.
inline std::vector<std::string> unlabeled_ids(const std::vector<Example>& pool, const std::set<std::string>& labeled) {
    std::set<std::string> ids;
    for (const auto& ex : pool) {
        if (!labeled.count(ex.id)) ids.insert(ex.id);
    }
    return {ids.begin(), ids.end()};
}

inline std::map<std::string, std::size_t> index_by_id(const std::vector<Example>& pool) {
    std::map<std::string, std::size_t> out;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (!out.emplace(pool[i].id, i).second) throw Error(Errc::InvalidArgument, "duplicate pool id " + pool[i].id);
    }
    return out;
}

inline void check_budget(std::size_t k, std::size_t available) {
    if (k > available) {
        throw Error(Errc::BudgetExceedsPool,
                    "budget " + std::to_string(k) + " exceeds " + std::to_string(available) + " unlabeled examples");
    }
}

/// One-at-a-time selection. Each step takes the highest current score, ties
/// broken by the lexicographically smallest id, then lets `on_pick` update
/// whatever state the scores depend on. If every remaining candidate is
/// gated (-inf), the step falls back to the ungated score so the budget is
/// always met.
///   score(id, honor_gate) -> double
///   on_pick(id)
template <typename ScoreFn, typename PickFn>
Selection greedy_select(std::string method, std::vector<std::string> candidates, std::size_t k, ScoreFn score,
                        PickFn on_pick) {
    check_budget(k, candidates.size());
    Selection sel{std::move(method), {}};
    std::vector<char> taken(candidates.size(), 0);
    for (std::size_t step = 0; step < k; ++step) {
        std::size_t best = candidates.size();
        double best_score = kGated;
        for (int pass = 0; pass < 2 && best == candidates.size(); ++pass) {
            const bool honor_gate = pass == 0;
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                if (taken[i]) continue;
                const double s = score(candidates[i], honor_gate);
                if (s == kGated) continue;
                if (best == candidates.size() || s > best_score) {
                    best = i;
                    best_score = s;
                }
            }
        }
        if (best == candidates.size()) {
            // Every candidate scores -inf even ungated: fall back to id order.
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                if (!taken[i]) {
                    best = i;
                    break;
                }
            }
        }
        taken[best] = 1;
        sel.picks.push_back({candidates[best], best_score});
        on_pick(candidates[best]);
    }
    return sel;
}

/// Picks the top `k` of a static score map with the same tie rule.
inline Selection top_k(std::string method, const ScoreMap& scores, std::size_t k) {
    std::vector<std::string> ids;
    for (const auto& [id, s] : scores) ids.push_back(id);
    return greedy_select(
        std::move(method), ids, k, [&](const std::string& id, bool) { return scores.at(id); },
        [](const std::string&) {});
}

/// Selection manifest rows {round, rank, id, score, method}; a gated score is written as null.
inline std::vector<io::Json> manifest_rows(const Selection& sel, std::size_t round) {
    std::vector<io::Json> out;
    for (std::size_t r = 0; r < sel.picks.size(); ++r) {
        io::Json j;
        j["round"] = round;
        j["rank"] = r + 1;
        j["id"] = sel.picks[r].id;
        j["score"] = std::isfinite(sel.picks[r].score) ? io::Json(sel.picks[r].score) : io::Json(nullptr);
        j["method"] = sel.method;
        out.push_back(std::move(j));
    }
    return out;
}

}  // namespace lrsp::acquisition
