#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lrsp/data/example.hpp"
#include "lrsp/features/kmedoids.hpp"
#include "lrsp/lf/anonymize.hpp"
#include "lrsp/lf/decompose.hpp"
#include "lrsp/lf/smatch.hpp"
#include "lrsp/memory/buffer.hpp"
#include "lrsp/util/rng.hpp"

namespace lrsp::memory {

inline constexpr std::size_t kCityActionSubset = 300;
inline constexpr std::size_t kQtActionSubset = 500;

/// A swap must raise the entropy by more than this to be accepted.
inline constexpr double kEntropyGain = 1e-12;

inline constexpr std::size_t kDefaultMaxSweeps = 1000;

/// Parser actions of every example.
inline std::vector<std::vector<std::string>> actions_of(const std::vector<Example>& rows) {
    std::vector<std::vector<std::string>> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(lf::extract_actions(r.lf));
    return out;
}

inline ActionTable make_action_table(const std::vector<Example>& rows) {
    return std::make_shared<const std::vector<std::vector<std::string>>>(actions_of(rows));
}

/// Pairwise 1 - smatch similarity between anonymized templates.
inline features::DistanceMatrix template_distances(const std::vector<Example>& rows, const lf::TypingRules& typing) {
    std::vector<lf::LogicalForm> templates;
    templates.reserve(rows.size());
    for (const auto& r : rows) templates.push_back(lf::anonymize(r.lf, typing).lf);
    return features::DistanceMatrix(rows.size(), [&](std::size_t i, std::size_t j) {
        return lf::smatch_distance(templates[i], templates[j]);
    });
}

/// Draws `h` distinct actions with probability proportional to their
/// frequency in `actions`, sequentially without replacement. Returns every
/// action when h covers them all.
inline std::set<std::string> sample_action_subset(const std::vector<std::vector<std::string>>& actions, std::size_t h,
                                                  std::uint64_t seed) {
    ActionCounts freq;
    for (const auto& row : actions) {
        for (const auto& a : row) ++freq[a];
    }
    std::set<std::string> out;
    if (h >= freq.size()) {
        for (const auto& [a, n] : freq) out.insert(a);
        return out;
    }
    std::vector<std::pair<std::string, double>> pool;
    double total = 0;
    for (const auto& [a, n] : freq) {
        pool.emplace_back(a, static_cast<double>(n));
        total += static_cast<double>(n);
    }
    Rng rng(seed);
    while (out.size() < h) {
        double u = rng.uniform01() * total;
        std::size_t pick = pool.size() - 1;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (u < pool[i].second) {
                pick = i;
                break;
            }
            u -= pool[i].second;
        }
        out.insert(pool[pick].first);
        total -= pool[pick].second;
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return out;
}

struct DlfsOptions {
    std::size_t capacity = 0;
    std::uint64_t seed = 0;
    std::optional<std::size_t> action_subset;  // h; all actions when unset
    std::size_t max_sweeps = kDefaultMaxSweeps;
};

struct DlfsResult {
    MemoryBuffer buffer;
    std::vector<double> entropy_trace;  // after initialization and after every accepted swap
    std::size_t sweeps = 0;
    std::set<std::string> scope;        // actions the entropy is measured over
    std::vector<std::size_t> assignment; // item -> cluster of the partition used
};

/// Optional hook invoked after every accepted swap with the new entropy.
using SwapObserver = std::function<void(const MemoryBuffer&, double)>;

/// Diversified LF sampling over a fixed partition: one random member per
/// cluster to start, then sweeps over the clusters in id order trying every
/// member as that cluster's entry and keeping any strictly better swap,
/// until a full sweep changes nothing.
inline DlfsResult dlfs_sample(const ActionTable& table, const std::vector<std::size_t>& assignment, std::size_t clusters,
                              const DlfsOptions& opt, const SwapObserver& observe = {}) {
    if (opt.capacity == 0) throw Error(Errc::InvalidArgument, "memory capacity must be positive");
    if (clusters != opt.capacity) {
        throw Error(Errc::InvalidArgument, "the partition must have exactly one cluster per memory slot");
    }
    std::vector<std::vector<std::size_t>> members(clusters);
    for (std::size_t i = 0; i < assignment.size(); ++i) members.at(assignment[i]).push_back(i);
    for (std::size_t c = 0; c < clusters; ++c) {
        if (members[c].empty()) {
            throw Error(Errc::CapacityExceedsClusters, "cluster " + std::to_string(c) + " has no members");
        }
    }

    const auto& actions = *table;
    DlfsResult out;
    out.assignment = assignment;
    out.scope = opt.action_subset ? sample_action_subset(actions, *opt.action_subset, opt.seed ^ 0x5bd1e995ULL)
                                  : sample_action_subset(actions, SIZE_MAX, 0);
    out.buffer = MemoryBuffer(opt.capacity, table);
    Rng rng(opt.seed);
    for (std::size_t c = 0; c < clusters; ++c) out.buffer.push(members[c][rng.uniform_index(members[c].size())], c);
    double h = out.buffer.entropy(&out.scope);
    out.entropy_trace.push_back(h);

    bool improved = true;
    while (improved && out.sweeps < opt.max_sweeps) {
        improved = false;
        ++out.sweeps;
        for (std::size_t c = 0; c < clusters; ++c) {
            for (std::size_t cand : members[c]) {
                const std::size_t current = out.buffer.entries()[c];
                if (cand == current) continue;
                out.buffer.replace(c, cand);
                const double trial = out.buffer.entropy(&out.scope);
                if (trial > h + kEntropyGain) {
                    h = trial;
                    improved = true;
                    out.entropy_trace.push_back(h);
                    if (observe) observe(out.buffer, h);
                } else {
                    out.buffer.replace(c, current);
                }
            }
        }
    }
    return out;
}

/// Partitions `rows` with k-medoids on template distance and samples the memory.
inline DlfsResult dlfs_sample(const std::vector<Example>& rows, const features::DistanceMatrix& distances,
                              const DlfsOptions& opt, const SwapObserver& observe = {}) {
    if (opt.capacity > rows.size()) {
        throw Error(Errc::CapacityExceedsClusters, "memory of " + std::to_string(opt.capacity) + " needs at least " +
                                                       std::to_string(opt.capacity) + " examples");
    }
    const auto cl = features::kmedoids(distances, opt.capacity, opt.seed);
    return dlfs_sample(make_action_table(rows), cl.assignment, opt.capacity, opt, observe);
}

inline DlfsResult dlfs_sample(const std::vector<Example>& rows, const lf::TypingRules& typing,
                              const DlfsOptions& opt, const SwapObserver& observe = {}) {
    if (opt.capacity > rows.size()) {
        throw Error(Errc::CapacityExceedsClusters, "memory of " + std::to_string(opt.capacity) + " needs at least " +
                                                       std::to_string(opt.capacity) + " examples");
    }
    return dlfs_sample(rows, template_distances(rows, typing), opt, observe);
}

}  // namespace lrsp::memory
