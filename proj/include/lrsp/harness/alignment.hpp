#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lrsp/data/example.hpp"
#include "lrsp/error.hpp"
#include "lrsp/lf/decompose.hpp"

namespace lrsp::harness {

inline std::size_t levenshtein(std::string_view a, std::string_view b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

/// 1 - Levenshtein distance / longer length; two empty strings are identical.
inline double char_sim(std::string_view a, std::string_view b) {
    const std::size_t m = std::max(a.size(), b.size());
    if (m == 0) return 1.0;
    return static_cast<double>(m - levenshtein(a, b)) / static_cast<double>(m);
}

/// For each LF predicate, a distribution over utterance tokens.
struct AlignmentPriors {
    std::vector<std::string> vocabulary;                          // sorted
    std::map<std::string, std::map<std::string, double>> rows;    // action -> token -> P'(token | action)
    std::map<std::string, std::map<std::string, double>> cooccur; // action -> token -> P(action | token)
};

/// P(a|x) = examples containing both / examples containing x, mixed with
/// character similarity as g = gamma * P + (1 - gamma) * char_sim and
/// normalized per action over the vocabulary. A row whose g is zero
/// everywhere becomes uniform.
inline AlignmentPriors alignment_priors(const std::vector<Example>& corpus, double gamma) {
    if (!(gamma >= 0 && gamma <= 1)) throw Error(Errc::InvalidArgument, "mix weight must lie in [0,1]");
    if (corpus.empty()) throw Error(Errc::EmptyCorpus, "alignment priors need a nonempty corpus");
    std::map<std::string, double> token_docs;
    std::map<std::string, std::map<std::string, double>> joint;
    std::set<std::string> actions;
    for (const auto& ex : corpus) {
        const std::set<std::string> toks(ex.utterance.begin(), ex.utterance.end());
        std::set<std::string> acts;
        for (const auto& a : lf::extract_atoms(ex.lf)) acts.insert(a.label);
        for (const auto& x : toks) token_docs[x] += 1;
        for (const auto& a : acts) {
            actions.insert(a);
            for (const auto& x : toks) joint[a][x] += 1;
        }
    }
    AlignmentPriors out;
    for (const auto& [x, n] : token_docs) out.vocabulary.push_back(x);
    if (out.vocabulary.empty()) throw Error(Errc::EmptyCorpus, "corpus has no utterance tokens");
    for (const auto& a : actions) {
        auto& row = out.rows[a];
        auto& co = out.cooccur[a];
        double sum = 0;
        for (const auto& x : out.vocabulary) {
            auto ja = joint.find(a);
            double both = 0;
            if (ja != joint.end()) {
                auto jx = ja->second.find(x);
                if (jx != ja->second.end()) both = jx->second;
            }
            const double p = both / token_docs.at(x);
            co[x] = p;
            const double g = gamma * p + (1 - gamma) * char_sim(a, x);
            row[x] = g;
            sum += g;
        }
        for (auto& [x, v] : row) v = sum > 0 ? v / sum : 1.0 / static_cast<double>(out.vocabulary.size());
    }
    return out;
}

inline std::vector<io::Json> alignment_rows(const AlignmentPriors& p) {
    std::vector<io::Json> out;
    for (const auto& [a, row] : p.rows) {
        io::Json dist = io::Json::object();
        for (const auto& [x, v] : row) dist[x] = v;
        out.push_back(io::Json{{"action", a}, {"dist", dist}});
    }
    return out;
}

}  // namespace lrsp::harness
