#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lrsp/acquisition/csse.hpp"
#include "lrsp/acquisition/lfs_lc_d.hpp"
#include "lrsp/acquisition/score_table.hpp"
#include "lrsp/acquisition/selection.hpp"
#include "lrsp/acquisition/uncertainty.hpp"
#include "lrsp/features/kmeans.hpp"
#include "lrsp/features/vectors.hpp"
#include "lrsp/lf/decompose.hpp"
#include "lrsp/util/rng.hpp"

namespace lrsp::acquisition {

enum class Baseline { Random, Cluster, MaxCompound, Traffic, LcsBw, LcsFw, NbestEntropy, Csse };

inline std::string baseline_name(Baseline b) {
    switch (b) {
        case Baseline::Random: return "random";
        case Baseline::Cluster: return "cluster";
        case Baseline::MaxCompound: return "max_compound";
        case Baseline::Traffic: return "traffic";
        case Baseline::LcsBw: return "lcs_bw";
        case Baseline::LcsFw: return "lcs_fw";
        case Baseline::NbestEntropy: return "nbest_entropy";
        case Baseline::Csse: return "csse";
    }
    return "unknown";
}

struct BaselineInputs {
    const ScoreTable* scores = nullptr;
    const features::EmbeddingTable* embeddings = nullptr;  // cluster falls back to LF structure vectors without these
    std::size_t neighbors = 10;                            // CSSE neighborhood size
};

/// Uniformly random order, reproducible from the seed.
inline Selection random_select(const std::vector<Example>& pool, const std::set<std::string>& labeled, std::size_t k,
                               std::uint64_t seed) {
    auto ids = unlabeled_ids(pool, labeled);
    check_budget(k, ids.size());
    Rng rng(seed);
    rng.shuffle(std::span<std::string>(ids));
    Selection sel{"random", {}};
    for (std::size_t i = 0; i < k; ++i) sel.picks.push_back({ids[i], 0.0});
    return sel;
}

/// Clusters the pool into |labeled| fixed plus k new clusters and draws one
/// random member from each new cluster in id order; the score is the cluster
/// id. If some new clusters end up without unlabeled members, the remaining
/// budget is drawn at random with score -1.
inline Selection cluster_select(const std::vector<Example>& pool, const std::set<std::string>& labeled, std::size_t k,
                                std::uint64_t seed, const BaselineInputs& in) {
    auto ids = unlabeled_ids(pool, labeled);
    check_budget(k, ids.size());
    Selection sel{"cluster", {}};
    if (k == 0) return sel;
    std::vector<features::DenseVector> vecs;
    if (in.embeddings) {
        for (const auto& ex : pool) vecs.push_back(in.embeddings->at(ex.id));
    } else {
        vecs = structure_vectors(pool);
    }
    std::vector<features::DenseVector> fixed;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (labeled.count(pool[i].id)) fixed.push_back(vecs[i]);
    }
    const auto cl = features::incremental_kmeans(vecs, fixed, k, seed);
    std::map<std::size_t, std::vector<std::string>> members;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (!labeled.count(pool[i].id) && cl.assignment[i] >= cl.fixed) members[cl.assignment[i]].push_back(pool[i].id);
    }
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::set<std::string> chosen;
    for (auto& [c, ms] : members) {
        std::sort(ms.begin(), ms.end());
        const auto& id = ms[rng.uniform_index(ms.size())];
        sel.picks.push_back({id, static_cast<double>(c)});
        chosen.insert(id);
    }
    std::vector<std::string> rest;
    for (const auto& id : ids) {
        if (!chosen.count(id)) rest.push_back(id);
    }
    rng.shuffle(std::span<std::string>(rest));
    for (std::size_t i = 0; sel.picks.size() < k; ++i) sel.picks.push_back({rest[i], -1.0});
    return sel;
}

/// Greedy: the example contributing the most compounds not yet covered by
/// labeled or already selected examples.
inline Selection max_compound_select(const std::vector<Example>& pool, const std::set<std::string>& labeled,
                                     std::size_t k) {
    const auto index = index_by_id(pool);
    std::set<std::string> covered;
    for (const auto& id : labeled) {
        for (auto& c : lf::extract_compounds(pool[index.at(id)].lf)) covered.insert(c.str());
    }
    auto fresh = [&](const std::string& id) {
        std::set<std::string> mine;
        for (auto& c : lf::extract_compounds(pool[index.at(id)].lf)) {
            if (!covered.count(c.str())) mine.insert(c.str());
        }
        return static_cast<double>(mine.size());
    };
    return greedy_select(
        "max_compound", unlabeled_ids(pool, labeled), k, [&](const std::string& id, bool) { return fresh(id); },
        [&](const std::string& id) {
            for (auto& c : lf::extract_compounds(pool[index.at(id)].lf)) covered.insert(c.str());
        });
}

/// Most frequent LFs first, lower perplexity breaking ties. The score is the
/// LF frequency plus a bonus in (0, 0.5] that shrinks with perplexity.
inline Selection traffic_select(const std::vector<Example>& pool, const std::set<std::string>& labeled, std::size_t k,
                                const ScoreTable& scores) {
    std::map<std::string, std::size_t> freq;
    for (const auto& ex : pool) ++freq[lf::serialize(ex.lf)];
    ScoreMap s;
    for (const auto& ex : pool) {
        if (labeled.count(ex.id)) continue;
        s[ex.id] = static_cast<double>(freq[lf::serialize(ex.lf)]) + 0.5 / (1.0 + scores.perplexity(ex.id));
    }
    return top_k("traffic", s, k);
}

inline Selection baseline_select(Baseline method, const std::vector<Example>& pool,
                                 const std::set<std::string>& labeled, std::size_t k, std::uint64_t seed,
                                 const BaselineInputs& in) {
    auto need_scores = [&]() -> const ScoreTable& {
        if (!in.scores) throw Error(Errc::MissingScore, baseline_name(method) + " needs a score file");
        return *in.scores;
    };
    const auto ids = unlabeled_ids(pool, labeled);
    check_budget(k, ids.size());
    switch (method) {
        case Baseline::Random: return random_select(pool, labeled, k, seed);
        case Baseline::Cluster: return cluster_select(pool, labeled, k, seed, in);
        case Baseline::MaxCompound: return max_compound_select(pool, labeled, k);
        case Baseline::Traffic: return traffic_select(pool, labeled, k, need_scores());
        case Baseline::LcsBw: {
            const auto& t = need_scores();
            ScoreMap s;
            for (const auto& id : ids) s[id] = -t.gen_logprob(id);
            return top_k("lcs_bw", s, k);
        }
        case Baseline::LcsFw: return top_k("lcs_fw", least_confidence(ids, need_scores()), k);
        case Baseline::NbestEntropy: return top_k("nbest_entropy", nbest_entropy(ids, need_scores()), k);
        case Baseline::Csse: {
            if (!in.embeddings) throw Error(Errc::MissingEmbedding, "csse needs embeddings");
            return csse_select(pool, labeled, *in.embeddings, in.neighbors, k);
        }
    }
    throw Error(Errc::InvalidArgument, "unknown baseline");
}

}  // namespace lrsp::acquisition
