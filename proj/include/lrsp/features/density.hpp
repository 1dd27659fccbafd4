#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "lrsp/error.hpp"
#include "lrsp/features/vectors.hpp"

namespace lrsp::features {

inline constexpr double kDefaultBandwidth = 1.0;

/// Log of the mean exponential kernel exp(-d/h) over the k nearest pool
/// members of `query` (itself excluded), with d the cosine distance.
inline double kernel_density(const std::vector<DenseVector>& pool, std::size_t k, std::size_t query,
                             double bandwidth = kDefaultBandwidth) {
    if (k == 0) throw Error(Errc::InvalidArgument, "k must be positive");
    if (k >= pool.size()) {
        throw Error(Errc::PoolTooSmall, "k=" + std::to_string(k) + " needs a pool larger than " +
                                            std::to_string(pool.size()));
    }
    if (query >= pool.size()) throw Error(Errc::InvalidArgument, "query index out of range");
    if (!(bandwidth > 0)) throw Error(Errc::InvalidArgument, "bandwidth must be positive");
    std::vector<double> dist;
    dist.reserve(pool.size() - 1);
    for (std::size_t j = 0; j < pool.size(); ++j) {
        if (j != query) dist.push_back(cosine_distance(pool[query], pool[j]));
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    double sum = 0;
    for (std::size_t i = 0; i < k; ++i) sum += std::exp(-dist[i] / bandwidth);
    return std::log(sum / static_cast<double>(k));
}

/// Scores for every pool member.
inline std::vector<double> kernel_density_all(const std::vector<DenseVector>& pool, std::size_t k,
                                              double bandwidth = kDefaultBandwidth) {
    std::vector<double> out(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) out[i] = kernel_density(pool, k, i, bandwidth);
    return out;
}

/// Mean cosine similarity between `query` and its k most similar pool members (self excluded).
inline double mean_knn_cosine(const std::vector<DenseVector>& pool, std::size_t k, std::size_t query) {
    if (k == 0) throw Error(Errc::InvalidArgument, "k must be positive");
    if (k >= pool.size()) {
        throw Error(Errc::PoolTooSmall, "k=" + std::to_string(k) + " needs a pool larger than " +
                                            std::to_string(pool.size()));
    }
    std::vector<double> sims;
    for (std::size_t j = 0; j < pool.size(); ++j) {
        if (j != query) sims.push_back(cosine(pool[query], pool[j]));
    }
    std::partial_sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(k), sims.end(), std::greater<>());
    double s = 0;
    for (std::size_t i = 0; i < k; ++i) s += sims[i];
    return s / static_cast<double>(k);
}

}  // namespace lrsp::features
