#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lrsp/acquisition/quantile.hpp"
#include "lrsp/acquisition/score_table.hpp"

namespace lrsp::acquisition {

/// Probabilities of an n-best list renormalized over the list itself.
inline std::vector<double> renormalize(const std::vector<Hypothesis>& nbest) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& h : nbest) top = std::max(top, h.logprob);
    std::vector<double> p(nbest.size(), 1.0);
    if (std::isfinite(top)) {
        for (std::size_t i = 0; i < nbest.size(); ++i) p[i] = std::exp(nbest[i].logprob - top);
    }
    double z = 0;
    for (double v : p) z += v;
    for (double& v : p) v /= z;
    return p;
}

/// Entropy in nats of the renormalized n-best distribution.
inline double nbest_entropy_of(const std::vector<Hypothesis>& nbest) {
    double h = 0;
    for (double p : renormalize(nbest)) {
        if (p > 0) h -= p * std::log(p);
    }
    return h;
}

/// 1 - P(top output | input).
inline ScoreMap least_confidence(const std::vector<std::string>& ids, const ScoreTable& scores) {
    ScoreMap out;
    for (const auto& id : ids) out[id] = 1.0 - std::exp(scores.best_logprob(id));
    return out;
}

inline ScoreMap nbest_entropy(const std::vector<std::string>& ids, const ScoreTable& scores) {
    ScoreMap out;
    for (const auto& id : ids) out[id] = nbest_entropy_of(scores.nbest(id));
    return out;
}

}  // namespace lrsp::acquisition
