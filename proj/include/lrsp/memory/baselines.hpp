#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "lrsp/acquisition/score_table.hpp"
#include "lrsp/data/example.hpp"
#include "lrsp/features/kmeans.hpp"
#include "lrsp/features/kmedoids.hpp"
#include "lrsp/features/vectors.hpp"
#include "lrsp/memory/buffer.hpp"
#include "lrsp/memory/dlfs.hpp"
#include "lrsp/util/rng.hpp"

namespace lrsp::memory {

enum class MemoryBaseline { Random, Fss, Lfs, Balance, Prior };

inline std::string memory_baseline_name(MemoryBaseline m) {
    switch (m) {
        case MemoryBaseline::Random: return "random";
        case MemoryBaseline::Fss: return "fss";
        case MemoryBaseline::Lfs: return "lfs";
        case MemoryBaseline::Balance: return "balance";
        case MemoryBaseline::Prior: return "prior";
    }
    return "unknown";
}

struct MemoryInputs {
    const features::EmbeddingTable* embeddings = nullptr;  // fss
    const features::DistanceMatrix* distances = nullptr;   // lfs; template distances computed when absent
    const lf::TypingRules* typing = nullptr;               // lfs when distances are computed here
    const acquisition::ScoreTable* scores = nullptr;       // prior
};

namespace detail {

inline void check_capacity(std::size_t m, std::size_t n) {
    if (m == 0) throw Error(Errc::InvalidArgument, "memory capacity must be positive");
    if (m > n) {
        throw Error(Errc::CapacityExceedsClusters,
                    "memory of " + std::to_string(m) + " exceeds " + std::to_string(n) + " examples");
    }
}

}  // namespace detail

inline MemoryBuffer random_memory(const ActionTable& actions, std::size_t m, std::uint64_t seed) {
    detail::check_capacity(m, actions->size());
    std::vector<std::size_t> order(actions->size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(order));
    MemoryBuffer buf(m, actions);
    for (std::size_t s = 0; s < m; ++s) buf.push(order[s], s);
    return buf;
}

/// k-means on the embeddings; each cluster contributes the member nearest its
/// centroid (lowest index on ties). A cluster left empty contributes the
/// nearest example not yet taken.
inline MemoryBuffer fss_memory(const std::vector<Example>& rows, const ActionTable& actions, std::size_t m,
                               std::uint64_t seed, const features::EmbeddingTable& emb) {
    detail::check_capacity(m, rows.size());
    std::vector<std::string> ids;
    for (const auto& r : rows) ids.push_back(r.id);
    const auto vecs = emb.gather(ids);
    const auto cl = features::incremental_kmeans(vecs, {}, m, seed);
    MemoryBuffer buf(m, actions);
    std::vector<char> taken(rows.size(), 0);
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t best = rows.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (int pass = 0; pass < 2 && best == rows.size(); ++pass) {
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (taken[i] || (pass == 0 && cl.assignment[i] != c)) continue;
                const double d = features::squared_distance(vecs[i], cl.centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = i;
                }
            }
        }
        taken[best] = 1;
        buf.push(best, c);
    }
    return buf;
}

/// The medoids of the template-distance partition: each is the member
/// closest to the rest of its cluster.
inline MemoryBuffer lfs_memory(const std::vector<Example>& rows, const ActionTable& actions, std::size_t m,
                               std::uint64_t seed, const MemoryInputs& in) {
    detail::check_capacity(m, rows.size());
    std::optional<features::DistanceMatrix> local;
    if (!in.distances) local = template_distances(rows, in.typing ? *in.typing : lf::TypingRules{});
    const auto& d = in.distances ? *in.distances : *local;
    const auto cl = features::kmedoids(d, m, seed);
    MemoryBuffer buf(m, actions);
    for (std::size_t c = 0; c < m; ++c) buf.push(cl.medoids[c], c);
    return buf;
}

/// Greedy balancing: repeatedly adds the example that yields the highest
/// action entropy, scanning candidates in a seed-shuffled order so ties are
/// broken at random.
inline MemoryBuffer balance_memory(const ActionTable& actions, std::size_t m, std::uint64_t seed) {
    detail::check_capacity(m, actions->size());
    std::vector<std::size_t> order(actions->size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(order));
    MemoryBuffer buf(m, actions);
    std::vector<char> taken(actions->size(), 0);
    for (std::size_t s = 0; s < m; ++s) {
        std::size_t best = actions->size();
        double best_h = -1;
        for (std::size_t i : order) {
            if (taken[i]) continue;
            auto counts = buf.action_counts();
            for (const auto& a : (*actions)[i]) ++counts[a];
            const double h = action_entropy(counts);
            if (h > best_h + kEntropyGain) {
                best_h = h;
                best = i;
            }
        }
        taken[best] = 1;
        buf.push(best, s);
    }
    return buf;
}

/// The m examples the model is most confident about (highest best_logprob), ids breaking ties.
inline MemoryBuffer prior_memory(const std::vector<Example>& rows, const ActionTable& actions, std::size_t m,
                                 const acquisition::ScoreTable& scores) {
    detail::check_capacity(m, rows.size());
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<double> conf(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) conf[i] = scores.best_logprob(rows[i].id);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (conf[a] != conf[b]) return conf[a] > conf[b];
        return rows[a].id < rows[b].id;
    });
    MemoryBuffer buf(m, actions);
    for (std::size_t s = 0; s < m; ++s) buf.push(order[s], s);
    return buf;
}

inline MemoryBuffer baseline_memory(MemoryBaseline method, const std::vector<Example>& rows, std::size_t m,
                                    std::uint64_t seed, const MemoryInputs& in) {
    const auto actions = make_action_table(rows);
    switch (method) {
        case MemoryBaseline::Random: return random_memory(actions, m, seed);
        case MemoryBaseline::Fss:
            if (!in.embeddings) throw Error(Errc::MissingEmbedding, "fss needs embeddings");
            return fss_memory(rows, actions, m, seed, *in.embeddings);
        case MemoryBaseline::Lfs: return lfs_memory(rows, actions, m, seed, in);
        case MemoryBaseline::Balance: return balance_memory(actions, m, seed);
        case MemoryBaseline::Prior:
            if (!in.scores) throw Error(Errc::MissingScore, "prior needs a score file");
            return prior_memory(rows, actions, m, *in.scores);
    }
    throw Error(Errc::InvalidArgument, "unknown memory baseline");
}

}  // namespace lrsp::memory
