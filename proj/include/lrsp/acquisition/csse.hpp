#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lrsp/acquisition/quantile.hpp"
#include "lrsp/acquisition/selection.hpp"
#include "lrsp/features/vectors.hpp"

namespace lrsp::acquisition {

/// Denominators below this are clamped so an all-orthogonal neighborhood cannot divide by zero.
inline constexpr double kCsseMinDenominator = 1e-12;

namespace detail {

/// Half the mean cosine similarity to the k most similar pool members (self excluded).
inline std::vector<double> csse_half_density(const std::vector<features::DenseVector>& vecs, std::size_t k) {
    if (k == 0) throw Error(Errc::InvalidArgument, "k must be positive");
    if (k >= vecs.size()) throw Error(Errc::PoolTooSmall, "CSSE needs more than k pool members");
    std::vector<double> out(vecs.size());
    for (std::size_t i = 0; i < vecs.size(); ++i) {
        std::vector<double> sims;
        for (std::size_t j = 0; j < vecs.size(); ++j) {
            if (j != i) sims.push_back(features::cosine(vecs[i], vecs[j]));
        }
        std::partial_sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(k), sims.end(), std::greater<>());
        double s = 0;
        for (std::size_t t = 0; t < k; ++t) s += sims[t];
        out[i] = s / static_cast<double>(2 * k);
    }
    return out;
}

}  // namespace detail

/// Similarity-to-labeled ratio, recomputed incrementally as the labeled set grows.
class CsseScorer {
public:
    CsseScorer(const std::vector<Example>& pool, const std::set<std::string>& labeled,
               const features::EmbeddingTable& emb, std::size_t k) {
        for (const auto& ex : pool) ids_.push_back(ex.id);
        vecs_ = emb.gather(ids_);
        half_ = detail::csse_half_density(vecs_, k);
        for (std::size_t i = 0; i < ids_.size(); ++i) pos_[ids_[i]] = i;
        min_ratio_.assign(ids_.size(), std::numeric_limits<double>::infinity());
        for (const auto& id : labeled) add_labeled(id);
    }

    double ratio(std::size_t i, std::size_t j) const {
        const double denom = std::max(half_[i] + half_[j], kCsseMinDenominator);
        return features::cosine(vecs_[i], vecs_[j]) / denom;
    }

    void add_labeled(const std::string& id) {
        const std::size_t j = pos_.at(id);
        any_labeled_ = true;
        for (std::size_t i = 0; i < ids_.size(); ++i) min_ratio_[i] = std::min(min_ratio_[i], ratio(i, j));
    }

    /// Minus the minimum ratio over labeled examples; with nothing labeled
    /// yet, the mean kNN cosine similarity.
    double score(const std::string& id) const {
        const std::size_t i = pos_.at(id);
        return any_labeled_ ? -min_ratio_[i] : 2.0 * half_[i];
    }

private:
    std::vector<std::string> ids_;
    std::vector<features::DenseVector> vecs_;
    std::vector<double> half_;
    std::map<std::string, std::size_t> pos_;
    std::vector<double> min_ratio_;
    bool any_labeled_ = false;
};

inline ScoreMap csse_score(const std::vector<Example>& pool, const std::set<std::string>& labeled,
                           const features::EmbeddingTable& emb, std::size_t k) {
    CsseScorer s(pool, labeled, emb, k);
    ScoreMap out;
    for (const auto& id : unlabeled_ids(pool, labeled)) out[id] = s.score(id);
    return out;
}

/// Greedy CSSE: every pick joins the labeled set before the next step.
inline Selection csse_select(const std::vector<Example>& pool, const std::set<std::string>& labeled,
                             const features::EmbeddingTable& emb, std::size_t k_neighbors, std::size_t k) {
    auto ids = unlabeled_ids(pool, labeled);
    check_budget(k, ids.size());
    CsseScorer s(pool, labeled, emb, k_neighbors);
    return greedy_select(
        "csse", ids, k, [&](const std::string& id, bool) { return s.score(id); },
        [&](const std::string& id) { s.add_labeled(id); });
}

}  // namespace lrsp::acquisition
