#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lrsp/error.hpp"
#include "lrsp/lf/anonymize.hpp"
#include "lrsp/lf/logical_form.hpp"

namespace lrsp::lf {

/// A collapsed idiom. Holes mark positions whose subtrees stay as children of
/// the unit node; concrete parts are reproduced verbatim on expansion.
struct IdiomPattern {
    std::string label;
    std::vector<IdiomPattern> children;
    bool hole = false;

    friend bool operator==(const IdiomPattern&, const IdiomPattern&) = default;

    std::size_t hole_count() const {
        if (hole) return 1;
        std::size_t n = 0;
        for (const auto& c : children) n += c.hole_count();
        return n;
    }

    /// S-expression rendering with `?` for holes.
    std::string str() const {
        if (hole) return "?";
        if (children.empty()) return label;
        std::string out = "( " + label;
        for (const auto& c : children) out += " " + c.str();
        return out + " )";
    }

    static IdiomPattern from_tree(const LfNode& node) {
        IdiomPattern p{node.label, {}, false};
        for (const auto& c : node.children) p.children.push_back(from_tree(c));
        return p;
    }
};

class IdiomDictionary {
public:
    explicit IdiomDictionary(std::size_t min_support = 2) : min_support_(min_support) {}

    std::size_t min_support() const noexcept { return min_support_; }
    std::size_t size() const noexcept { return units_.size(); }
    bool empty() const noexcept { return units_.empty(); }
    const std::map<std::string, IdiomPattern>& units() const noexcept { return units_; }
    bool is_unit(const std::string& token) const { return units_.count(token) != 0; }

    /// Returns the unit token for `pattern`, minting `<prefix><n>` on first use.
    const std::string& intern(const IdiomPattern& pattern, const std::string& prefix) {
        const auto key = pattern.str();
        auto it = by_key_.find(key);
        if (it != by_key_.end()) return it->second;
        std::string token = prefix + std::to_string(units_.size());
        units_.emplace(token, pattern);
        return by_key_.emplace(key, std::move(token)).first->second;
    }

    /// Inverse of normalization: rebuilds the original tree.
    LfNode expand(const LfNode& node) const {
        auto it = units_.find(node.label);
        if (it == units_.end()) {
            LfNode out(node.label);
            for (const auto& c : node.children) out.children.push_back(expand(c));
            return out;
        }
        if (it->second.hole_count() != node.children.size()) {
            throw Error(Errc::MalformedLf, "unit " + node.label + " expects " +
                                               std::to_string(it->second.hole_count()) + " children");
        }
        std::size_t next = 0;
        // Concrete parts may mention units minted earlier, so expand the filled pattern again.
        return expand(fill(it->second, node.children, next));
    }

    LogicalForm expand(const LogicalForm& lf) const { return LogicalForm{expand(lf.root)}; }

private:
    static LfNode fill(const IdiomPattern& p, const std::vector<LfNode>& args, std::size_t& next) {
        if (p.hole) return args[next++];
        LfNode out(p.label);
        for (const auto& c : p.children) out.children.push_back(fill(c, args, next));
        return out;
    }

    std::size_t min_support_;
    std::map<std::string, IdiomPattern> units_;
    std::map<std::string, std::string> by_key_;
};

struct NormalizedCorpus {
    std::vector<Template> corpus;
    IdiomDictionary dictionary;
};

namespace detail {

inline void collect_labels(const LfNode& n, std::set<std::string>& out) {
    out.insert(n.label);
    for (const auto& c : n.children) collect_labels(c, out);
}

inline void collect_full_subtrees(const LfNode& n, std::set<std::string>& out) {
    if (n.is_leaf()) return;
    out.insert(serialize(n));
    for (const auto& c : n.children) collect_full_subtrees(c, out);
}

using Signature = std::pair<std::string, std::size_t>;  // (label, arity)

struct SiblingStats {
    std::size_t occurrences = 0;
    std::set<std::size_t> docs;
    std::vector<std::map<std::string, std::size_t>> child_counts;
    std::vector<std::map<std::string, LfNode>> child_trees;
};

inline void collect_siblings(const LfNode& n, std::size_t doc, std::map<Signature, SiblingStats>& stats) {
    if (n.is_leaf()) return;
    auto& s = stats[{n.label, n.children.size()}];
    if (s.child_counts.empty()) {
        s.child_counts.resize(n.children.size());
        s.child_trees.resize(n.children.size());
    }
    ++s.occurrences;
    s.docs.insert(doc);
    for (std::size_t i = 0; i < n.children.size(); ++i) {
        const auto key = serialize(n.children[i]);
        ++s.child_counts[i][key];
        s.child_trees[i].emplace(key, n.children[i]);
        collect_siblings(n.children[i], doc, stats);
    }
}

class Normalizer {
public:
    Normalizer(std::size_t min_support, std::string prefix)
        : dict_(min_support), tau_(min_support), prefix_(std::move(prefix)) {}

    /// Collapses maximal frequent complete subtrees top-down.
    bool full_pass(std::vector<LfNode>& roots) {
        std::map<std::string, std::size_t> support;
        for (const auto& r : roots) {
            std::set<std::string> seen;
            collect_full_subtrees(r, seen);
            for (const auto& k : seen) ++support[k];
        }
        bool changed = false;
        for (auto& r : roots) changed |= collapse_full(r, support);
        return changed;
    }

    /// Collapses a frequent (label, arity) node together with the children that
    /// occupy the same position in every one of its occurrences.
    bool sibling_pass(std::vector<LfNode>& roots) {
        std::map<Signature, SiblingStats> stats;
        for (std::size_t d = 0; d < roots.size(); ++d) collect_siblings(roots[d], d, stats);
        std::map<Signature, IdiomPattern> patterns;
        for (const auto& [sig, s] : stats) {
            if (s.docs.size() < tau_) continue;
            IdiomPattern p{sig.first, {}, false};
            std::size_t fixed = 0;
            for (std::size_t i = 0; i < sig.second; ++i) {
                const auto& counts = s.child_counts[i];
                if (counts.size() == 1 && counts.begin()->second == s.occurrences) {
                    p.children.push_back(IdiomPattern::from_tree(s.child_trees[i].begin()->second));
                    ++fixed;
                } else {
                    p.children.push_back(IdiomPattern{"", {}, true});
                }
            }
            // All-fixed nodes are complete subtrees and belong to the full pass.
            if (fixed > 0 && fixed < sig.second) patterns.emplace(sig, std::move(p));
        }
        if (patterns.empty()) return false;
        bool changed = false;
        for (auto& r : roots) changed |= collapse_siblings(r, patterns);
        return changed;
    }

    IdiomDictionary take_dictionary() { return std::move(dict_); }

private:
    bool collapse_full(LfNode& n, const std::map<std::string, std::size_t>& support) {
        if (n.is_leaf()) return false;
        const auto key = serialize(n);
        if (support.at(key) >= tau_) {
            n = LfNode(dict_.intern(IdiomPattern::from_tree(n), prefix_));
            return true;
        }
        bool changed = false;
        for (auto& c : n.children) changed |= collapse_full(c, support);
        return changed;
    }

    bool collapse_siblings(LfNode& n, const std::map<Signature, IdiomPattern>& patterns) {
        if (n.is_leaf()) return false;
        bool changed = false;
        auto it = patterns.find({n.label, n.children.size()});
        if (it != patterns.end()) {
            std::vector<LfNode> kept;
            for (std::size_t i = 0; i < n.children.size(); ++i) {
                if (it->second.children[i].hole) kept.push_back(std::move(n.children[i]));
            }
            n = LfNode(dict_.intern(it->second, prefix_), std::move(kept));
            changed = true;
        }
        for (auto& c : n.children) changed |= collapse_siblings(c, patterns);
        return changed;
    }

    IdiomDictionary dict_;
    std::size_t tau_;
    std::string prefix_;
};

}  // namespace detail

inline constexpr std::size_t kDefaultMinSupport = 2;

/// Collapses every frequent complete subtree (document support >= min_support)
/// into a single unit token, then folds fixed siblings into their parent, and
/// repeats until nothing changes. Expansion through the returned dictionary
/// reproduces the input exactly.
inline NormalizedCorpus normalize_templates(const std::vector<Template>& corpus,
                                            std::size_t min_support = kDefaultMinSupport) {
    if (min_support < 2) throw Error(Errc::InvalidArgument, "min support must be at least 2");

    std::set<std::string> labels;
    for (const auto& t : corpus) detail::collect_labels(t.lf.root, labels);
    std::string prefix = "@idiom";
    auto clashes = [&] {
        for (const auto& l : labels) {
            if (text::starts_with(l, prefix)) return true;
        }
        return false;
    };
    while (clashes()) prefix.insert(prefix.begin(), '@');

    std::vector<LfNode> roots;
    roots.reserve(corpus.size());
    for (const auto& t : corpus) roots.push_back(t.lf.root);

    detail::Normalizer norm(min_support, prefix);
    bool changed = true;
    while (changed) {
        changed = norm.full_pass(roots);
        changed |= norm.sibling_pass(roots);
    }

    NormalizedCorpus out{{}, norm.take_dictionary()};
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        out.corpus.push_back(Template{LogicalForm{std::move(roots[i])}, corpus[i].slot_types});
    }
    return out;
}

}  // namespace lrsp::lf
