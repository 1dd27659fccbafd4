#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "lrsp/error.hpp"
#include "lrsp/util/rng.hpp"

namespace lrsp::features {

/// Symmetric pairwise distances over items 0..n-1.
class DistanceMatrix {
public:
    DistanceMatrix() = default;

    DistanceMatrix(std::size_t n, const std::function<double(std::size_t, std::size_t)>& dist) : n_(n), d_(n * n, 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = dist(i, j);
                d_[i * n + j] = v;
                d_[j * n + i] = v;
            }
        }
    }

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
};

struct MedoidClustering {
    std::vector<std::size_t> medoids;      // cluster id -> item index, ascending
    std::vector<std::size_t> assignment;   // item -> cluster id
    double cost = 0;                       // total distance to assigned medoid
    std::size_t iterations = 0;            // accepted swaps
    std::vector<double> cost_trace;        // cost after BUILD and after every swap

    std::vector<std::vector<std::size_t>> members() const {
        std::vector<std::vector<std::size_t>> out(medoids.size());
        for (std::size_t i = 0; i < assignment.size(); ++i) out[assignment[i]].push_back(i);
        return out;
    }
};

namespace detail {

inline double medoid_cost(const DistanceMatrix& d, const std::vector<std::size_t>& medoids) {
    double total = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t m : medoids) best = std::min(best, d(i, m));
        total += best;
    }
    return total;
}

}  // namespace detail

inline constexpr std::size_t kDefaultMedoidIterations = 100;

/// A swap must lower the cost by more than this to count as an improvement,
/// so summation-order noise cannot cause endless swapping.
inline constexpr double kSwapTolerance = 1e-12;

/// PAM: greedy BUILD initialization, then the single best improving
/// (medoid, non-medoid) swap per iteration until none improves or
/// `max_iter` swaps were made. Candidates are scanned in a seed-shuffled
/// order and only strict improvements replace the incumbent, so the seed
/// decides between equal-cost alternatives.
inline MedoidClustering kmedoids(const DistanceMatrix& d, std::size_t m, std::uint64_t seed,
                                 std::size_t max_iter = kDefaultMedoidIterations) {
    const std::size_t n = d.size();
    if (m == 0) throw Error(Errc::InvalidArgument, "need at least one cluster");
    if (m > n) {
        throw Error(Errc::CapacityExceedsClusters,
                    std::to_string(m) + " clusters requested for " + std::to_string(n) + " items");
    }
    Rng rng(seed);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(std::span<std::size_t>(order));

    std::vector<std::size_t> medoids;
    std::vector<char> is_medoid(n, 0);
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    while (medoids.size() < m) {
        double best_gain = -1;
        std::size_t pick = n;
        for (std::size_t c : order) {
            if (is_medoid[c]) continue;
            // First pick minimizes total distance; later picks maximize the distance saved.
            double gain = 0;
            for (std::size_t i = 0; i < n; ++i) {
                gain += medoids.empty() ? -d(i, c) : std::max(0.0, nearest[i] - d(i, c));
            }
            if (pick == n || gain > best_gain) {
                best_gain = gain;
                pick = c;
            }
        }
        medoids.push_back(pick);
        is_medoid[pick] = 1;
        for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], d(i, pick));
    }

    MedoidClustering out;
    double cost = detail::medoid_cost(d, medoids);
    out.cost_trace.push_back(cost);
    while (out.iterations < max_iter) {
        double best = cost;
        std::size_t best_slot = m, best_cand = n;
        for (std::size_t slot = 0; slot < m; ++slot) {
            for (std::size_t c : order) {
                if (is_medoid[c]) continue;
                auto trial = medoids;
                trial[slot] = c;
                const double tc = detail::medoid_cost(d, trial);
                if (tc < best - kSwapTolerance) {
                    best = tc;
                    best_slot = slot;
                    best_cand = c;
                }
            }
        }
        if (best_cand == n) break;
        is_medoid[medoids[best_slot]] = 0;
        is_medoid[best_cand] = 1;
        medoids[best_slot] = best_cand;
        cost = best;
        ++out.iterations;
        out.cost_trace.push_back(cost);
    }

    std::sort(medoids.begin(), medoids.end());
    out.medoids = medoids;
    out.assignment.assign(n, 0);
    out.cost = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best_id = 0;
        for (std::size_t k = 1; k < m; ++k) {
            if (d(i, medoids[k]) < d(i, medoids[best_id])) best_id = k;
        }
        // A medoid always belongs to its own cluster, even when a duplicate medoid is equally close.
        for (std::size_t k = 0; k < m; ++k) {
            if (medoids[k] == i) best_id = k;
        }
        out.assignment[i] = best_id;
        out.cost += d(i, medoids[best_id]);
    }
    return out;
}

}  // namespace lrsp::features
