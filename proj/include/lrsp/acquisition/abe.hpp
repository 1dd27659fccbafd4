#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lrsp/acquisition/quantile.hpp"
#include "lrsp/acquisition/score_table.hpp"
#include "lrsp/acquisition/selection.hpp"
#include "lrsp/acquisition/translation_model.hpp"
#include "lrsp/acquisition/uncertainty.hpp"
#include "lrsp/features/density.hpp"
#include "lrsp/features/kmeans.hpp"
#include "lrsp/features/vectors.hpp"

namespace lrsp::acquisition {

/// How the translation distribution is approximated.
///   Nbest:          n-best hypotheses from an external translation model (score file).
///   Max:            the single most probable translation.
///   FactorizedExact: counts of translations grouped by LF in the training data.
enum class AbeVariant { Nbest, Max, FactorizedExact };

struct AbeCoefficients {
    double bias = 1.0;
    double error = 1.0;
    double density = 1.0;
    double diversity = 1.0;
};

inline constexpr std::size_t kDefaultDensityNeighbors = 10;

struct AbeInputs {
    const EmpiricalTranslationModel* model = nullptr;  // required by the factorized bias and by the error term
    const ScoreTable* scores = nullptr;                // source-id n-best lists and translation-row bt scores
    const features::EmbeddingTable* embeddings = nullptr;
    std::size_t density_neighbors = kDefaultDensityNeighbors;
    double bandwidth = features::kDefaultBandwidth;
};

namespace detail {

inline const Example& find_example(const std::vector<Example>& pool, const std::map<std::string, std::size_t>& index,
                                   const std::string& id) {
    return pool[index.at(id)];
}

/// Most probable translation text; ties go to the lexicographically smallest.
inline std::string modal_translation(const std::map<std::string, double>& dist) {
    std::string best;
    double p = -1;
    for (const auto& [t, q] : dist) {
        if (q > p) {
            p = q;
            best = t;
        }
    }
    return best;
}

}  // namespace detail

/// Translation bias: higher means more biased. Factorized: minus the entropy of
/// the translations sharing the LF. Nbest: minus the renormalized n-best
/// entropy. Max: log-probability of the top hypothesis.
inline ScoreMap abe_bias(const std::vector<Example>& pool, const std::vector<std::string>& ids,
                         const AbeInputs& in, AbeVariant variant) {
    const auto index = index_by_id(pool);
    ScoreMap out;
    for (const auto& id : ids) {
        switch (variant) {
            case AbeVariant::FactorizedExact:
                if (!in.model) throw Error(Errc::MissingScore, "factorized bias needs a translation model");
                out[id] = -in.model->translation_entropy(detail::find_example(pool, index, id).lf);
                break;
            case AbeVariant::Nbest:
                if (!in.scores) throw Error(Errc::MissingScore, "n-best bias needs a score file");
                out[id] = -nbest_entropy_of(in.scores->nbest(id));
                break;
            case AbeVariant::Max: {
                if (!in.scores) throw Error(Errc::MissingScore, "max bias needs a score file");
                const auto* r = in.scores->find(id);
                if (r && !r->nbest.empty()) out[id] = r->nbest.front().logprob;
                else out[id] = in.scores->best_logprob(id);
                break;
            }
        }
    }
    return out;
}

/// Translation error: expected parser negative log-likelihood of the gold LF
/// over back-translations of the translations sharing that LF. The Max
/// variant uses only the most probable translation. Rows repeating one
/// translation text contribute their mean.
inline ScoreMap abe_error(const std::vector<Example>& pool, const std::vector<std::string>& ids, const AbeInputs& in,
                          AbeVariant variant) {
    if (!in.model) throw Error(Errc::MissingScore, "translation error needs a translation model");
    if (!in.scores) throw Error(Errc::MissingScore, "translation error needs back-translation scores");
    const auto index = index_by_id(pool);
    ScoreMap out;
    for (const auto& id : ids) {
        const auto& lf = detail::find_example(pool, index, id).lf;
        const auto dist = in.model->translation_distribution(lf);
        std::map<std::string, std::pair<double, std::size_t>> nll;  // text -> (sum, rows)
        for (const auto& row : in.model->translations(lf)) {
            auto& acc = nll[row.text];
            acc.first += -in.scores->bt_parse_logprob(row.row_id);
            ++acc.second;
        }
        auto mean = [&](const std::string& t) { return nll[t].first / static_cast<double>(nll[t].second); };
        if (variant == AbeVariant::Max) {
            out[id] = mean(detail::modal_translation(dist));
        } else {
            double e = 0;
            for (const auto& [t, p] : dist) e += p * mean(t);
            out[id] = e;
        }
    }
    return out;
}

/// Semantic diversity: 0 for an example whose cluster is still free, -inf otherwise.
inline ScoreMap abe_diversity(const std::vector<std::string>& ids, const std::map<std::string, std::size_t>& cluster_of,
                              const std::set<std::size_t>& used) {
    ScoreMap out;
    for (const auto& id : ids) out[id] = used.count(cluster_of.at(id)) ? kGated : 0.0;
    return out;
}

/// Log kernel density of every pool example among all pool embeddings.
inline ScoreMap abe_density(const std::vector<Example>& pool, const std::vector<std::string>& ids,
                            const AbeInputs& in) {
    if (!in.embeddings) throw Error(Errc::MissingEmbedding, "semantic density needs embeddings");
    std::vector<std::string> all;
    for (const auto& ex : pool) all.push_back(ex.id);
    const auto vecs = in.embeddings->gather(all);
    if (vecs.size() < 2) throw Error(Errc::PoolTooSmall, "semantic density needs at least two examples");
    const std::size_t k = std::min(in.density_neighbors, vecs.size() - 1);
    const auto index = index_by_id(pool);
    ScoreMap out;
    for (const auto& id : ids) out[id] = features::kernel_density(vecs, k, index.at(id), in.bandwidth);
    return out;
}

/// Embedding clusters with every labeled example as a fixed center plus `k_new` new ones.
struct SemanticClusters {
    std::map<std::string, std::size_t> cluster_of;
    std::set<std::size_t> used;
};

inline SemanticClusters fit_semantic_clusters(const std::vector<Example>& pool, const std::set<std::string>& labeled,
                                              const features::EmbeddingTable& emb, std::size_t k_new,
                                              std::uint64_t seed) {
    std::vector<std::string> all;
    for (const auto& ex : pool) all.push_back(ex.id);
    const auto vecs = emb.gather(all);
    std::vector<features::DenseVector> fixed;
    std::vector<std::size_t> fixed_items;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (labeled.count(pool[i].id)) {
            fixed.push_back(vecs[i]);
            fixed_items.push_back(i);
        }
    }
    const auto cl = features::incremental_kmeans(vecs, fixed, std::max<std::size_t>(k_new, 1), seed);
    SemanticClusters out;
    for (std::size_t i = 0; i < pool.size(); ++i) out.cluster_of[pool[i].id] = cl.assignment[i];
    for (std::size_t f = 0; f < fixed_items.size(); ++f) {
        out.used.insert(f);
        out.used.insert(cl.assignment[fixed_items[f]]);
    }
    return out;
}

/// Per-term quantile-normalized values at the start of a round, for inspection and tests.
struct AbeRound {
    std::vector<std::string> candidates;
    SemanticClusters clusters;
    std::map<std::string, double> static_score;  // weighted sum of bias, error and density
};

inline AbeRound prepare_abe(const std::vector<Example>& pool, const std::set<std::string>& labeled,
                            const AbeInputs& in, const AbeCoefficients& coef, std::size_t k, AbeVariant variant,
                            std::uint64_t seed) {
    AbeRound r;
    r.candidates = unlabeled_ids(pool, labeled);
    if (!in.embeddings) throw Error(Errc::MissingEmbedding, "ABE clusters embeddings");
    r.clusters = fit_semantic_clusters(pool, labeled, *in.embeddings, k, seed);
    for (const auto& id : r.candidates) r.static_score[id] = 0;
    auto accumulate = [&](double weight, const ScoreMap& raw) {
        const auto q = fit_quantiles(raw);
        for (const auto& [id, v] : raw) r.static_score[id] += weight * q(v);
    };
    if (coef.bias != 0) accumulate(coef.bias, abe_bias(pool, r.candidates, in, variant));
    if (coef.error != 0) accumulate(coef.error, abe_error(pool, r.candidates, in, variant));
    if (coef.density != 0) accumulate(coef.density, abe_density(pool, r.candidates, in));
    if (coef.diversity != 0) {
        // Every free candidate scores 0, so the normalized term is the same constant for all of them.
        const auto div = abe_diversity(r.candidates, r.clusters.cluster_of, r.clusters.used);
        const auto q = fit_quantiles(div);
        for (const auto& id : r.candidates) r.static_score[id] += coef.diversity * q(0.0);
    }
    return r;
}

/// Greedy ABE: the weighted sum of the normalized bias, error and density
/// terms plus the diversity term, with the cluster gate re-applied after
/// every pick.
inline Selection abe_select(const std::vector<Example>& pool, const std::set<std::string>& labeled,
                            const AbeInputs& in, const AbeCoefficients& coef, std::size_t k, AbeVariant variant,
                            std::uint64_t seed) {
    auto ids = unlabeled_ids(pool, labeled);
    check_budget(k, ids.size());
    const std::string name = variant == AbeVariant::Max ? "abe-max" : (variant == AbeVariant::Nbest ? "abe-nbest" : "abe");
    if (k == 0) return {name, {}};
    auto r = prepare_abe(pool, labeled, in, coef, k, variant, seed);
    return greedy_select(
        name, ids, k,
        [&](const std::string& id, bool honor_gate) {
            if (honor_gate && r.clusters.used.count(r.clusters.cluster_of.at(id))) return kGated;
            return r.static_score.at(id);
        },
        [&](const std::string& id) { r.clusters.used.insert(r.clusters.cluster_of.at(id)); });
}

}  // namespace lrsp::acquisition
