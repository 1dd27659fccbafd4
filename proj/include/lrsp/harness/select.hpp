#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "lrsp/acquisition/abe.hpp"
#include "lrsp/acquisition/baselines.hpp"
#include "lrsp/acquisition/lfs_lc_d.hpp"
#include "lrsp/harness/config.hpp"

namespace lrsp::harness {

/// Everything a method may consult besides the pool itself.
struct SelectionContext {
    const acquisition::ScoreTable* scores = nullptr;
    const features::EmbeddingTable* embeddings = nullptr;
    const acquisition::EmpiricalTranslationModel* translations = nullptr;  // target-side rows, for ABE
};

/// Runs one acquisition step of `acq.method` over the unlabeled part of `pool`.
inline acquisition::Selection select_examples(const AcquisitionConfig& acq, const std::vector<Example>& pool,
                                              const std::set<std::string>& labeled, std::size_t k,
                                              std::uint64_t seed, const SelectionContext& ctx) {
    using namespace acquisition;
    const auto& m = acq.method;
    if (m == "lfs-lc-d") return lfs_lc_d_select(pool, labeled, source_model(pool), acq.lfs, k, seed);
    if (m == "abe" || m == "abe-nbest" || m == "abe-max") {
        const AbeVariant v = m == "abe" ? AbeVariant::FactorizedExact : (m == "abe-max" ? AbeVariant::Max : AbeVariant::Nbest);
        AbeInputs in;
        in.model = ctx.translations;
        in.scores = ctx.scores;
        in.embeddings = ctx.embeddings;
        in.density_neighbors = acq.neighbors;
        in.bandwidth = acq.bandwidth;
        return abe_select(pool, labeled, in, acq.abe, k, v, seed);
    }
    static const std::map<std::string, Baseline> baselines{
        {"random", Baseline::Random},      {"cluster", Baseline::Cluster}, {"max-compound", Baseline::MaxCompound},
        {"traffic", Baseline::Traffic},    {"lcs-bw", Baseline::LcsBw},    {"lcs-fw", Baseline::LcsFw},
        {"nbest-entropy", Baseline::NbestEntropy}, {"csse", Baseline::Csse}};
    auto it = baselines.find(m);
    if (it == baselines.end()) throw Error(Errc::InvalidConfig, "unknown acquisition method '" + m + "'");
    BaselineInputs in;
    in.scores = ctx.scores;
    in.embeddings = ctx.embeddings;
    in.neighbors = acq.neighbors;
    return baseline_select(it->second, pool, labeled, k, seed, in);
}

}  // namespace lrsp::harness
