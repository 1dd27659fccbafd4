#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lrsp/data/example.hpp"
#include "lrsp/error.hpp"
#include "lrsp/lf/anonymize.hpp"
#include "lrsp/scfg/derive.hpp"
#include "lrsp/util/rng.hpp"

namespace lrsp::scfg {

/// Wraps generated pairs as dataset rows with ids `<prefix>-<n>`.
inline std::vector<Example> to_examples(const std::vector<Pair>& pairs, const std::string& prefix = "syn",
                                        const std::string& language = "en") {
    std::vector<Example> out;
    out.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        Example ex;
        ex.id = prefix + "-" + std::to_string(i);
        ex.utterance = pairs[i].utterance;
        ex.lf = pairs[i].logical_form();
        ex.language = language;
        out.push_back(std::move(ex));
    }
    return out;
}

/// Template key used for grouping: the anonymized LF in canonical form.
inline std::string template_key(const lf::LogicalForm& lf, const lf::TypingRules& typing) {
    return lf::serialize(lf::anonymize(lf, typing).lf);
}

/// Picks k examples spreading the budget evenly over anonymized templates:
/// templates are visited in a seeded random order and each visit takes that
/// template's next (seeded-shuffled) member, cycling until k are drawn.
inline std::vector<Example> uat_subsample(const std::vector<Example>& dataset, std::size_t k, std::uint64_t seed,
                                          const lf::TypingRules& typing) {
    if (k > dataset.size()) {
        throw Error(Errc::BudgetExceedsPool,
                    "k=" + std::to_string(k) + " exceeds dataset size " + std::to_string(dataset.size()));
    }
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < dataset.size(); ++i) groups[template_key(dataset[i].lf, typing)].push_back(i);

    Rng rng(seed);
    std::vector<std::vector<std::size_t>> buckets;
    for (auto& [key, members] : groups) buckets.push_back(members);
    rng.shuffle(std::span<std::vector<std::size_t>>(buckets));
    for (auto& b : buckets) rng.shuffle(std::span<std::size_t>(b));

    std::vector<Example> out;
    out.reserve(k);
    for (std::size_t layer = 0; out.size() < k; ++layer) {
        for (const auto& b : buckets) {
            if (out.size() == k) break;
            if (layer < b.size()) out.push_back(dataset[b[layer]]);
        }
    }
    return out;
}

inline std::size_t distinct_templates(const std::vector<Example>& rows, const lf::TypingRules& typing) {
    std::map<std::string, int> seen;
    for (const auto& ex : rows) seen[template_key(ex.lf, typing)] = 1;
    return seen.size();
}

}  // namespace lrsp::scfg
