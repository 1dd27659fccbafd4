#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lrsp/error.hpp"
#include "lrsp/scfg/derive.hpp"
#include "lrsp/scfg/grammar.hpp"
#include "lrsp/util/rng.hpp"

namespace lrsp::scfg {

enum class BindMode { All, Sample, AbstractOnly };

struct BindOptions {
    BindMode mode = BindMode::All;
    std::size_t k = 1;  // Sample mode: number of distinct bindings
    std::uint64_t seed = 0;
};

/// Domain-specific variables of `pair` in order of first appearance on the
/// utterance side. Throws UnknownVariable for a `$name` that is neither in the
/// lexicon nor declared abstract.
inline std::vector<std::string> bindable_variables(const Pair& pair, const ScfgGrammar& g) {
    std::vector<std::string> out;
    auto scan = [&](const std::vector<std::string>& toks) {
        for (const auto& t : toks) {
            if (!is_variable_token(t)) continue;
            if (g.abstract_variables.count(t)) continue;
            if (!g.lexicon.count(t)) throw Error(Errc::UnknownVariable, "variable " + t + " is not in the lexicon");
            if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
        }
    };
    scan(pair.utterance);
    scan(pair.lf);
    return out;
}

namespace detail {

inline Pair apply_binding(const Pair& pair, const std::map<std::string, const LexiconEntry*>& binding) {
    Pair out;
    for (const auto& t : pair.utterance) {
        auto it = binding.find(t);
        if (it == binding.end()) out.utterance.push_back(t);
        else out.utterance.insert(out.utterance.end(), it->second->surface.begin(), it->second->surface.end());
    }
    for (const auto& t : pair.lf) {
        auto it = binding.find(t);
        out.lf.push_back(it == binding.end() ? t : it->second->lf_value);
    }
    return out;
}

}  // namespace detail

/// Replaces lexicon variables with real values on both sides at once; abstract
/// variables are never touched. Every occurrence of one variable receives the
/// same value.
///   All:          the full cartesian product, last variable varying fastest.
///   Sample:       k distinct bindings drawn uniformly (all of them if fewer exist).
///   AbstractOnly: no binding; the pair is returned as is after validation.
inline std::vector<Pair> bind_variables(const Pair& pair, const ScfgGrammar& g, const BindOptions& opt = {}) {
    const auto vars = bindable_variables(pair, g);
    if (opt.mode == BindMode::AbstractOnly || vars.empty()) return {pair};

    std::vector<const std::vector<LexiconEntry>*> choices;
    std::size_t total = 1;
    bool huge = false;
    for (const auto& v : vars) {
        choices.push_back(&g.lexicon.at(v));
        const std::size_t n = choices.back()->size();
        if (total > SIZE_MAX / n) huge = true;
        else total *= n;
    }
    auto bind = [&](const std::vector<std::size_t>& digits) {
        std::map<std::string, const LexiconEntry*> b;
        for (std::size_t i = 0; i < vars.size(); ++i) b[vars[i]] = &(*choices[i])[digits[i]];
        return detail::apply_binding(pair, b);
    };

    std::vector<Pair> out;
    const bool everything = opt.mode == BindMode::All || (!huge && total <= opt.k);
    if (everything) {
        if (huge) throw Error(Errc::InvalidArgument, "binding product too large to enumerate");
        std::vector<std::size_t> digits(vars.size(), 0);
        for (std::size_t n = 0; n < total; ++n) {
            out.push_back(bind(digits));
            for (std::size_t i = vars.size(); i-- > 0;) {
                if (++digits[i] < choices[i]->size()) break;
                digits[i] = 0;
            }
        }
        return out;
    }
    if (opt.k == 0) return out;
    Rng rng(opt.seed);
    std::set<std::vector<std::size_t>> seen;
    while (out.size() < opt.k) {
        std::vector<std::size_t> digits(vars.size());
        for (std::size_t i = 0; i < vars.size(); ++i) digits[i] = rng.uniform_index(choices[i]->size());
        if (seen.insert(digits).second) out.push_back(bind(digits));
    }
    return out;
}

}  // namespace lrsp::scfg
