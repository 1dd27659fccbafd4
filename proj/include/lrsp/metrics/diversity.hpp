#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lrsp/error.hpp"

namespace lrsp::metrics {

using Tokens = std::vector<std::string>;

namespace detail {

inline std::map<std::vector<std::string>, std::size_t> ngram_counts(const Tokens& toks, std::size_t n) {
    std::map<std::vector<std::string>, std::size_t> out;
    if (toks.size() < n) return out;
    for (std::size_t i = 0; i + n <= toks.size(); ++i) ++out[Tokens(toks.begin() + static_cast<std::ptrdiff_t>(i),
                                                                     toks.begin() + static_cast<std::ptrdiff_t>(i + n))];
    return out;
}

}  // namespace detail

/// Clipped k-gram precision of `cand` against `refs`, as (matched, total).
inline std::pair<double, double> modified_precision(const Tokens& cand, const std::vector<Tokens>& refs,
                                                    std::size_t k) {
    const auto c = detail::ngram_counts(cand, k);
    std::map<Tokens, std::size_t> max_ref;
    for (const auto& r : refs) {
        for (const auto& [g, n] : detail::ngram_counts(r, k)) max_ref[g] = std::max(max_ref[g], n);
    }
    double hit = 0, total = 0;
    for (const auto& [g, n] : c) {
        total += static_cast<double>(n);
        auto it = max_ref.find(g);
        if (it != max_ref.end()) hit += static_cast<double>(std::min(n, it->second));
    }
    return {hit, total};
}

/// Zero precisions above unigram order are floored at this value in sentence-level Self-BLEU.
inline constexpr double kSelfBleuEpsilon = 1e-9;

/// Sentence BLEU-n in [0, 100]: geometric mean of clipped 1..n-gram
/// precisions times the brevity penalty against the closest reference length
/// (shorter wins ties). Without smoothing any zero precision gives 0. With
/// `epsilon` > 0, zero higher-order precisions are floored at epsilon, but no
/// unigram overlap still gives 0.
inline double bleu_n(const Tokens& cand, const std::vector<Tokens>& refs, std::size_t n, double epsilon = 0) {
    if (n == 0) throw Error(Errc::InvalidArgument, "BLEU order must be at least 1");
    if (cand.empty() || refs.empty()) return 0;
    double log_sum = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        const auto [hit, total] = modified_precision(cand, refs, k);
        double p = total > 0 ? hit / total : 0;
        if (p == 0) {
            if (epsilon <= 0 || k == 1) return 0;
            p = epsilon;
        }
        log_sum += std::log(p) / static_cast<double>(n);
    }
    const double c = static_cast<double>(cand.size());
    double r = static_cast<double>(refs.front().size());
    for (const auto& ref : refs) {
        const double len = static_cast<double>(ref.size());
        if (std::abs(len - c) < std::abs(r - c) || (std::abs(len - c) == std::abs(r - c) && len < r)) r = len;
    }
    const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
    return 100.0 * bp * std::exp(log_sum);
}

/// Corpus BLEU-n: clipped counts and lengths pooled over all pairs before
/// the geometric mean, without smoothing.
inline double corpus_bleu(const std::vector<Tokens>& cands, const std::vector<std::vector<Tokens>>& refs,
                          std::size_t n) {
    if (n == 0) throw Error(Errc::InvalidArgument, "BLEU order must be at least 1");
    if (cands.size() != refs.size()) throw Error(Errc::InvalidArgument, "candidate and reference counts differ");
    std::vector<double> hit(n + 1, 0), total(n + 1, 0);
    double c = 0, r = 0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (refs[i].empty()) throw Error(Errc::InvalidArgument, "candidate without references");
        for (std::size_t k = 1; k <= n; ++k) {
            const auto [h, t] = modified_precision(cands[i], refs[i], k);
            hit[k] += h;
            total[k] += t;
        }
        const double len = static_cast<double>(cands[i].size());
        double best = static_cast<double>(refs[i].front().size());
        for (const auto& ref : refs[i]) {
            const double l = static_cast<double>(ref.size());
            if (std::abs(l - len) < std::abs(best - len) || (std::abs(l - len) == std::abs(best - len) && l < best)) {
                best = l;
            }
        }
        c += len;
        r += best;
    }
    double log_sum = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        if (hit[k] == 0) return 0;
        log_sum += std::log(hit[k] / total[k]) / static_cast<double>(n);
    }
    const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
    return 100.0 * bp * std::exp(log_sum);
}

/// Mean over sentences of BLEU-n against all other sentences, epsilon-smoothed.
inline double self_bleu(const std::vector<Tokens>& corpus, std::size_t n) {
    if (corpus.size() < 2) throw Error(Errc::CorpusTooSmall, "Self-BLEU needs at least two sentences");
    double total = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        std::vector<Tokens> refs;
        for (std::size_t j = 0; j < corpus.size(); ++j) {
            if (j != i) refs.push_back(corpus[j]);
        }
        total += bleu_n(corpus[i], refs, n, kSelfBleuEpsilon);
    }
    return total / static_cast<double>(corpus.size());
}

inline double ttr(const Tokens& toks) {
    if (toks.empty()) throw Error(Errc::EmptyCorpus, "type-token ratio of an empty stream");
    return static_cast<double>(std::set<std::string>(toks.begin(), toks.end()).size()) /
           static_cast<double>(toks.size());
}

inline constexpr double kMtldThreshold = 0.72;

namespace detail {

/// Factor count of one MTLD pass: a factor closes whenever the running TTR
/// drops to the threshold or below; the leftover segment adds the partial
/// factor (1 - TTR) / (1 - threshold).
inline double mtld_factors(const Tokens& toks, double threshold) {
    double factors = 0;
    std::set<std::string> types;
    std::size_t count = 0;
    for (const auto& t : toks) {
        types.insert(t);
        ++count;
        const double ratio = static_cast<double>(types.size()) / static_cast<double>(count);
        if (ratio <= threshold) {
            factors += 1;
            types.clear();
            count = 0;
        }
    }
    if (count > 0) {
        const double ratio = static_cast<double>(types.size()) / static_cast<double>(count);
        factors += (1.0 - ratio) / (1.0 - threshold);
    }
    return factors;
}

inline double mtld_pass(const Tokens& toks, double threshold) {
    const double f = mtld_factors(toks, threshold);
    // A stream that never loses diversity has no factor at all; its score is its length.
    return f > 0 ? static_cast<double>(toks.size()) / f : static_cast<double>(toks.size());
}

}  // namespace detail

/// Mean of the forward and backward MTLD passes.
inline double mtld(const Tokens& toks, double threshold = kMtldThreshold) {
    if (toks.empty()) throw Error(Errc::EmptyCorpus, "MTLD of an empty stream");
    const Tokens rev(toks.rbegin(), toks.rend());
    return (detail::mtld_pass(toks, threshold) + detail::mtld_pass(rev, threshold)) / 2.0;
}

/// n-gram relative frequencies pooled over a corpus.
struct NgramProfile {
    std::size_t n = 1;
    std::map<Tokens, double> prob;
};

inline NgramProfile ngram_profile(const std::vector<Tokens>& corpus, std::size_t n) {
    if (n == 0) throw Error(Errc::InvalidArgument, "n-gram order must be at least 1");
    NgramProfile p;
    p.n = n;
    double total = 0;
    for (const auto& s : corpus) {
        for (const auto& [g, c] : detail::ngram_counts(s, n)) {
            p.prob[g] += static_cast<double>(c);
            total += static_cast<double>(c);
        }
    }
    if (total == 0) throw Error(Errc::EmptyCorpus, "corpus has no " + std::to_string(n) + "-grams");
    for (auto& [g, v] : p.prob) v /= total;
    return p;
}

/// Jensen-Shannon divergence in bits against the midpoint mixture.
inline double js_divergence(const NgramProfile& p, const NgramProfile& q) {
    if (p.n != q.n) throw Error(Errc::ProfileMismatch, "profiles use different n-gram orders");
    std::set<Tokens> support;
    for (const auto& [g, v] : p.prob) support.insert(g);
    for (const auto& [g, v] : q.prob) support.insert(g);
    double js = 0;
    for (const auto& g : support) {
        const auto ip = p.prob.find(g);
        const auto iq = q.prob.find(g);
        const double a = ip == p.prob.end() ? 0 : ip->second;
        const double b = iq == q.prob.end() ? 0 : iq->second;
        const double m = (a + b) / 2;
        if (a > 0) js += 0.5 * a * std::log2(a / m);
        if (b > 0) js += 0.5 * b * std::log2(b / m);
    }
    return std::clamp(js, 0.0, 1.0);
}

}  // namespace lrsp::metrics
