#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "lrsp/error.hpp"
#include "lrsp/lf/logical_form.hpp"
#include "lrsp/scfg/grammar.hpp"
#include "lrsp/util/rng.hpp"
#include "lrsp/util/text.hpp"

namespace lrsp::scfg {

inline constexpr std::size_t kDefaultDepthCap = 12;

/// Rule-application tree. Children follow the rule's source-order nonterminals.
struct DerivationNode {
    std::size_t rule = 0;
    std::vector<DerivationNode> children;

    std::size_t depth() const {
        std::size_t d = 0;
        for (const auto& c : children) d = std::max(d, c.depth());
        return d + 1;
    }
};

/// A synchronous yield: utterance tokens and LF tokens. Variable tokens are
/// still unbound at this point.
struct Pair {
    std::vector<std::string> utterance;
    std::vector<std::string> lf;

    std::string utterance_text() const { return text::join(utterance); }
    std::string lf_text() const { return text::join(lf); }
    lf::LogicalForm logical_form() const { return lf::parse_lf(lf_text()); }

    friend bool operator==(const Pair&, const Pair&) = default;
};

struct Derivation {
    DerivationNode tree;
    Pair yield;
};

namespace detail {

/// Substitutes child yields (given in source-link order) into a rule's two sides.
inline Pair splice(const ScfgRule& rule, const std::vector<std::size_t>& links, const std::vector<Pair>& ys) {
    auto find = [&](std::size_t link) -> const Pair& {
        for (std::size_t i = 0; i < links.size(); ++i) {
            if (links[i] == link) return ys[i];
        }
        throw Error(Errc::AlignmentMismatch, "unaligned link " + std::to_string(link));
    };
    Pair out;
    for (const auto& s : rule.source) {
        if (!s.nonterminal) {
            out.utterance.push_back(s.text);
            continue;
        }
        const auto& p = find(s.link).utterance;
        out.utterance.insert(out.utterance.end(), p.begin(), p.end());
    }
    for (const auto& s : rule.target) {
        if (!s.nonterminal) {
            out.lf.push_back(s.text);
            continue;
        }
        const auto& p = find(s.link).lf;
        out.lf.insert(out.lf.end(), p.begin(), p.end());
    }
    return out;
}

}  // namespace detail

/// Rebuilds the yield of a derivation tree.
inline Pair realize(const ScfgGrammar& g, const DerivationNode& node) {
    const auto& rule = g.rules.at(node.rule);
    const auto links = rule.source_links();
    std::vector<Pair> ys;
    for (std::size_t i = 0; i < links.size(); ++i) ys.push_back(realize(g, node.children.at(i)));
    return detail::splice(rule, links, ys);
}

/// Number of derivation trees of depth <= max_depth rooted at the start
/// symbol. Saturates at UINT64_MAX.
inline std::uint64_t count_derivations(const ScfgGrammar& g, std::size_t max_depth) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    auto sat_mul = [](std::uint64_t a, std::uint64_t b) -> std::uint64_t {
        if (a == 0 || b == 0) return 0;
        return a > kMax / b ? kMax : a * b;
    };
    auto sat_add = [](std::uint64_t a, std::uint64_t b) -> std::uint64_t { return a > kMax - b ? kMax : a + b; };

    std::map<std::string, std::uint64_t> prev;  // depth d-1; every symbol starts at 0
    for (std::size_t d = 1; d <= max_depth; ++d) {
        std::map<std::string, std::uint64_t> cur;
        for (const auto& r : g.rules) {
            std::uint64_t ways = 1;
            for (const auto& s : r.source) {
                if (!s.nonterminal) continue;
                auto it = prev.find(s.text);
                ways = sat_mul(ways, it == prev.end() ? 0 : it->second);
            }
            cur[r.head] = sat_add(cur[r.head], ways);
        }
        prev = std::move(cur);
    }
    auto it = prev.find(g.start);
    return it == prev.end() ? 0 : it->second;
}

namespace detail {

class Enumerator {
public:
    using Sink = std::function<void(const Derivation&)>;

    explicit Enumerator(const ScfgGrammar& g) : g_(g) {
        for (std::size_t i = 0; i < g.rules.size(); ++i) by_head_[g.rules[i].head].push_back(i);
    }

    void run(std::size_t max_depth, const Sink& sink) {
        if (!by_head_.count(g_.start)) return;
        expand(g_.start, max_depth, [&](const DerivationNode& node, const Pair& y) { sink(Derivation{node, y}); });
    }

private:
    using Cont = std::function<void(const DerivationNode&, const Pair&)>;

    void expand(const std::string& symbol, std::size_t depth, const Cont& k) {
        if (depth == 0) return;
        auto it = by_head_.find(symbol);
        if (it == by_head_.end()) return;
        for (std::size_t ri : it->second) {
            const auto& rule = g_.rules[ri];
            const auto links = rule.source_links();
            std::vector<DerivationNode> kids(links.size());
            std::vector<Pair> yields(links.size());
            fill(rule, ri, links, 0, depth, kids, yields, k);
        }
    }

    void fill(const ScfgRule& rule, std::size_t ri, const std::vector<std::size_t>& links, std::size_t i,
              std::size_t depth, std::vector<DerivationNode>& kids, std::vector<Pair>& yields, const Cont& k) {
        if (i == links.size()) {
            DerivationNode node{ri, kids};
            k(node, splice(rule, links, yields));
            return;
        }
        expand(rule.child_name(links[i]), depth - 1, [&](const DerivationNode& child, const Pair& y) {
            kids[i] = child;
            yields[i] = y;
            fill(rule, ri, links, i + 1, depth, kids, yields, k);
        });
    }

    const ScfgGrammar& g_;
    std::map<std::string, std::vector<std::size_t>> by_head_;
};

inline void require_terminating(const ScfgGrammar& g) {
    const auto ok = g.productive();
    for (const auto& nt : g.reachable()) {
        if (g.has_rules(nt) && !ok.count(nt)) {
            throw Error(Errc::DepthExceeded, "nonterminal " + nt + " recurses without a terminating rule");
        }
    }
}

}  // namespace detail

/// Streams every derivation of depth <= max_depth exactly once, ordered by
/// rule index at each nonterminal with earlier source positions varying slowest.
inline void derive_exhaustive(const ScfgGrammar& g, std::size_t max_depth,
                              const std::function<void(const Derivation&)>& sink) {
    if (max_depth < 1) throw Error(Errc::InvalidArgument, "max depth must be at least 1");
    detail::require_terminating(g);
    detail::Enumerator(g).run(max_depth, sink);
}

inline std::vector<Derivation> derive_exhaustive(const ScfgGrammar& g, std::size_t max_depth) {
    std::vector<Derivation> out;
    derive_exhaustive(g, max_depth, [&](const Derivation& d) { out.push_back(d); });
    return out;
}

namespace detail {

inline bool sample_node(const ScfgGrammar& g, const std::map<std::string, std::vector<std::size_t>>& by_head,
                        const std::string& symbol, std::size_t budget, Rng& rng, DerivationNode& out) {
    if (budget == 0) return false;
    auto it = by_head.find(symbol);
    if (it == by_head.end()) throw Error(Errc::UnknownNonterminal, "nonterminal " + symbol + " has no rules");
    out.rule = it->second[rng.uniform_index(it->second.size())];
    const auto& rule = g.rules[out.rule];
    const auto links = rule.source_links();
    out.children.assign(links.size(), {});
    for (std::size_t i = 0; i < links.size(); ++i) {
        if (!sample_node(g, by_head, rule.child_name(links[i]), budget - 1, rng, out.children[i])) return false;
    }
    return true;
}

}  // namespace detail

inline constexpr std::size_t kSampleRetries = 1000;

/// Draws `n` derivations choosing uniformly among a nonterminal's rules.
/// Draws that exceed the depth cap are discarded and redrawn; a sample that
/// fails kSampleRetries times in a row raises DepthExceeded.
inline std::vector<Derivation> derive_sample(const ScfgGrammar& g, std::size_t n, std::uint64_t seed,
                                             std::size_t depth_cap = kDefaultDepthCap) {
    if (n < 1) throw Error(Errc::InvalidArgument, "sample size must be at least 1");
    if (!g.has_rules(g.start)) throw Error(Errc::UnreachableStart, "start symbol " + g.start + " has no rules");
    detail::require_terminating(g);
    std::map<std::string, std::vector<std::size_t>> by_head;
    for (std::size_t i = 0; i < g.rules.size(); ++i) by_head[g.rules[i].head].push_back(i);

    Rng rng(seed);
    std::vector<Derivation> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        bool done = false;
        for (std::size_t attempt = 0; attempt < kSampleRetries && !done; ++attempt) {
            DerivationNode tree;
            if (detail::sample_node(g, by_head, g.start, depth_cap, rng, tree)) {
                auto y = realize(g, tree);
                out.push_back(Derivation{std::move(tree), std::move(y)});
                done = true;
            }
        }
        if (!done) {
            throw Error(Errc::DepthExceeded, "no derivation within depth " + std::to_string(depth_cap) + " after " +
                                                 std::to_string(kSampleRetries) + " attempts");
        }
    }
    return out;
}

}  // namespace lrsp::scfg
