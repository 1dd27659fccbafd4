#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lrsp/acquisition/quantile.hpp"
#include "lrsp/acquisition/selection.hpp"
#include "lrsp/acquisition/translation_model.hpp"
#include "lrsp/features/kmeans.hpp"
#include "lrsp/features/tfidf.hpp"
#include "lrsp/lf/decompose.hpp"

namespace lrsp::acquisition {

struct LfsLcdParams {
    double alpha = 0.75;  // weight of the structure term
    double beta = 0.75;   // decay applied to atoms and compounds already covered
};

inline constexpr LfsLcdParams kGeoQueryPreset{0.75, 0.75};
inline constexpr LfsLcdParams kNlmapPreset{0.25, 0.75};

/// TF-IDF structure vectors of the whole pool, clustered with every labeled
/// example as a fixed center plus `k_new` free centers.
struct StructureClusters {
    std::vector<features::DenseVector> vectors;  // by pool index
    features::CentroidClustering clustering;
    std::set<std::size_t> used;                  // clusters already holding a labeled example
};

inline std::vector<features::DenseVector> structure_vectors(const std::vector<Example>& pool) {
    std::vector<lf::LogicalForm> lfs;
    for (const auto& ex : pool) lfs.push_back(ex.lf);
    auto tf = features::tfidf_featurize(lfs);
    return features::densify(tf.vectors, tf.model.vocabulary.size());
}

inline StructureClusters fit_structure_clusters(const std::vector<Example>& pool, const std::set<std::string>& labeled,
                                                std::size_t k_new, std::uint64_t seed) {
    StructureClusters out;
    out.vectors = structure_vectors(pool);
    std::vector<features::DenseVector> fixed;
    std::vector<std::size_t> fixed_items;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (labeled.count(pool[i].id)) {
            fixed.push_back(out.vectors[i]);
            fixed_items.push_back(i);
        }
    }
    out.clustering = features::incremental_kmeans(out.vectors, fixed, k_new, seed);
    for (std::size_t f = 0; f < fixed_items.size(); ++f) {
        out.used.insert(f);
        out.used.insert(out.clustering.assignment[fixed_items[f]]);
    }
    return out;
}

/// Structure diversity: minus the squared distance to the example's own
/// centroid, or -inf once that cluster holds a labeled or selected example.
inline ScoreMap lfsd_score(const std::vector<Example>& pool, const std::set<std::string>& labeled,
                           const StructureClusters& sc) {
    ScoreMap out;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (labeled.count(pool[i].id)) continue;
        const std::size_t c = sc.clustering.assignment[i];
        out[pool[i].id] = sc.used.count(c) ? kGated
                                           : -features::squared_distance(sc.vectors[i], sc.clustering.centers[c]);
    }
    return out;
}

/// Lexical choice diversity of one LF: mean over its distinct atoms and
/// compounds of the word-entropy given that feature, scaled by `beta` for
/// features already covered.
inline double lcd_of(const lf::LogicalForm& lf, const EmpiricalTranslationModel& model,
                     const std::set<std::string>& covered, double beta) {
    const auto feats = lf::structure_features(lf);
    const std::set<std::string> distinct(feats.begin(), feats.end());
    double total = 0;
    for (const auto& a : distinct) total += (covered.count(a) ? beta : 1.0) * model.lexical_entropy(a);
    return total / static_cast<double>(distinct.size());
}

inline ScoreMap lcd_score(const std::vector<Example>& pool, const std::set<std::string>& labeled,
                          const EmpiricalTranslationModel& model, const std::set<std::string>& covered, double beta) {
    if (!(beta >= 0 && beta <= 1)) throw Error(Errc::InvalidArgument, "beta must lie in [0, 1]");
    ScoreMap out;
    for (const auto& ex : pool) {
        if (!labeled.count(ex.id)) out[ex.id] = lcd_of(ex.lf, model, covered, beta);
    }
    return out;
}

/// Atoms and compounds of the given examples.
inline std::set<std::string> covered_features(const std::vector<Example>& pool, const std::set<std::string>& ids) {
    std::set<std::string> out;
    for (const auto& ex : pool) {
        if (!ids.count(ex.id)) continue;
        for (auto& f : lf::structure_features(ex.lf)) out.insert(std::move(f));
    }
    return out;
}

/// Word co-occurrence statistics of a source-language training set.
inline EmpiricalTranslationModel source_model(const std::vector<Example>& source) {
    EmpiricalTranslationModel m;
    for (const auto& ex : source) m.add_source(ex);
    return m;
}

/// Start-of-round terms for every unlabeled example.
struct LfsLcdCandidate {
    std::size_t cluster = 0;
    double structure = 0;  // raw structure score, ungated
    double lexical = 0;    // raw lexical score under the round's initial coverage
};

struct LfsLcdRound {
    StructureClusters clusters;
    std::map<std::string, LfsLcdCandidate> candidates;
    QuantileMap structure_quantiles;
    QuantileMap lexical_quantiles;
    std::set<std::string> covered;
};

inline LfsLcdRound prepare_lfs_lc_d(const std::vector<Example>& pool, const std::set<std::string>& labeled,
                                    const EmpiricalTranslationModel& model, const LfsLcdParams& params,
                                    std::size_t k, std::uint64_t seed) {
    LfsLcdRound r;
    r.clusters = fit_structure_clusters(pool, labeled, k, seed);
    r.covered = covered_features(pool, labeled);
    const auto s = lfsd_score(pool, labeled, r.clusters);
    const auto c = lcd_score(pool, labeled, model, r.covered, params.beta);
    std::vector<double> sref, cref;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (labeled.count(pool[i].id)) continue;
        const std::size_t cl = r.clusters.clustering.assignment[i];
        const double raw = -features::squared_distance(r.clusters.vectors[i], r.clusters.clustering.centers[cl]);
        r.candidates[pool[i].id] = {cl, raw, c.at(pool[i].id)};
        sref.push_back(s.at(pool[i].id));
        cref.push_back(c.at(pool[i].id));
    }
    r.structure_quantiles = QuantileMap(std::move(sref));
    r.lexical_quantiles = QuantileMap(std::move(cref));
    return r;
}

/// Greedy LFS-LC-D: alpha * q(structure) + q(lexical), both mapped through
/// quantiles fitted once at the start of the round. Each pick gates its
/// cluster and adds its atoms and compounds to the covered set.
inline Selection lfs_lc_d_select(const std::vector<Example>& pool, const std::set<std::string>& labeled,
                                 const EmpiricalTranslationModel& model, const LfsLcdParams& params, std::size_t k,
                                 std::uint64_t seed) {
    auto ids = unlabeled_ids(pool, labeled);
    check_budget(k, ids.size());
    if (k == 0) return {"lfs-lc-d", {}};
    auto round = prepare_lfs_lc_d(pool, labeled, model, params, k, seed);
    const auto index = index_by_id(pool);
    return greedy_select(
        "lfs-lc-d", ids, k,
        [&](const std::string& id, bool honor_gate) {
            const auto& cand = round.candidates.at(id);
            if (honor_gate && round.clusters.used.count(cand.cluster)) return kGated;
            const double lex = lcd_of(pool[index.at(id)].lf, model, round.covered, params.beta);
            return params.alpha * round.structure_quantiles(cand.structure) + round.lexical_quantiles(lex);
        },
        [&](const std::string& id) {
            round.clusters.used.insert(round.candidates.at(id).cluster);
            for (auto& f : lf::structure_features(pool[index.at(id)].lf)) round.covered.insert(std::move(f));
        });
}

}  // namespace lrsp::acquisition
