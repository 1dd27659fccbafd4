#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "lrsp/error.hpp"
#include "lrsp/features/vectors.hpp"
#include "lrsp/util/rng.hpp"

namespace lrsp::features {

struct CentroidClustering {
    std::vector<DenseVector> centers;    // ids 0..F-1 are the fixed centers, then the new ones
    std::vector<std::size_t> assignment; // item -> cluster id
    std::size_t fixed = 0;
    std::size_t iterations = 0;

    std::vector<std::vector<std::size_t>> members() const {
        std::vector<std::vector<std::size_t>> out(centers.size());
        for (std::size_t i = 0; i < assignment.size(); ++i) out[assignment[i]].push_back(i);
        return out;
    }
};

/// Index of the nearest center by squared Euclidean distance; ties go to the lowest id.
inline std::size_t nearest_center(const DenseVector& x, const std::vector<DenseVector>& centers) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = squared_distance(x, centers[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

inline constexpr std::size_t kDefaultKmeansIterations = 100;

/// Lloyd iterations where only the `k_new` new centers move. New centers are
/// seeded k-means++ style against all centers chosen so far (fixed ones
/// included); a new cluster that empties keeps its previous center.
inline CentroidClustering incremental_kmeans(const std::vector<DenseVector>& data,
                                             const std::vector<DenseVector>& fixed_centers, std::size_t k_new,
                                             std::uint64_t seed,
                                             std::size_t max_iter = kDefaultKmeansIterations) {
    if (k_new < 1) throw Error(Errc::InvalidArgument, "need at least one new center");
    if (data.empty()) throw Error(Errc::InvalidArgument, "no data to cluster");
    const std::size_t dim = data.front().size();
    for (const auto& v : data) {
        if (v.size() != dim) throw Error(Errc::DimensionMismatch, "inconsistent data dimension");
    }
    for (const auto& c : fixed_centers) {
        if (c.size() != dim) throw Error(Errc::DimensionMismatch, "fixed center dimension differs from data");
    }

    CentroidClustering out;
    out.fixed = fixed_centers.size();
    out.centers = fixed_centers;
    Rng rng(seed);
    std::vector<double> d2(data.size(), std::numeric_limits<double>::infinity());
    auto refresh = [&](const DenseVector& c) {
        for (std::size_t i = 0; i < data.size(); ++i) d2[i] = std::min(d2[i], squared_distance(data[i], c));
    };
    for (const auto& c : fixed_centers) refresh(c);
    for (std::size_t k = 0; k < k_new; ++k) {
        double total = 0;
        if (!out.centers.empty()) {
            for (double v : d2) total += v;
        }
        std::size_t pick = 0;
        if (total <= 0) {
            pick = rng.uniform_index(data.size());
        } else {
            double r = rng.uniform01() * total;
            pick = data.size() - 1;
            for (std::size_t i = 0; i < data.size(); ++i) {
                if (d2[i] <= 0) continue;
                if (r < d2[i]) {
                    pick = i;
                    break;
                }
                r -= d2[i];
            }
        }
        out.centers.push_back(data[pick]);
        refresh(out.centers.back());
    }

    out.assignment.assign(data.size(), 0);
    for (std::size_t i = 0; i < data.size(); ++i) out.assignment[i] = nearest_center(data[i], out.centers);
    while (out.iterations < max_iter) {
        ++out.iterations;
        for (std::size_t c = out.fixed; c < out.centers.size(); ++c) {
            DenseVector sum(dim, 0.0);
            std::size_t count = 0;
            for (std::size_t i = 0; i < data.size(); ++i) {
                if (out.assignment[i] != c) continue;
                for (std::size_t j = 0; j < dim; ++j) sum[j] += data[i][j];
                ++count;
            }
            if (count == 0) continue;
            for (double& v : sum) v /= static_cast<double>(count);
            out.centers[c] = std::move(sum);
        }
        bool changed = false;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const std::size_t a = nearest_center(data[i], out.centers);
            if (a != out.assignment[i]) {
                out.assignment[i] = a;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return out;
}

}  // namespace lrsp::features
