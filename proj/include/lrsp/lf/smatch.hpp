#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "lrsp/lf/logical_form.hpp"
#include "lrsp/util/rng.hpp"

namespace lrsp::lf {

/// (parent label, argument index, child label). The root contributes one
/// triple whose parent is the empty string, so single-node LFs still compare.
struct Triple {
    std::string parent;
    std::size_t arg = 0;
    std::string child;

    friend auto operator<=>(const Triple&, const Triple&) = default;
};

inline std::vector<Triple> lf_triples(const LogicalForm& lf) {
    std::vector<Triple> out;
    out.push_back({"", 0, lf.root.label});
    visit_preorder(lf.root, [&](const LfNode& n, std::size_t) {
        for (std::size_t i = 0; i < n.children.size(); ++i) out.push_back({n.label, i, n.children[i].label});
    });
    return out;
}

/// Slot variables are `$` + optional letters + digits (`$0`, `$x1`). Their
/// type is the part before the digits; only same-typed variables align.
/// Names without digits (`$loc`) are ordinary constants.
inline bool is_slot_variable(const std::string& token) {
    if (token.size() < 2 || token[0] != '$') return false;
    std::size_t i = 1;
    while (i < token.size() && (std::isalpha(static_cast<unsigned char>(token[i])) || token[i] == '_')) ++i;
    if (i == token.size()) return false;
    for (; i < token.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(token[i]))) return false;
    }
    return true;
}

inline std::string slot_variable_type(const std::string& token) {
    std::size_t end = token.size();
    while (end > 0 && std::isdigit(static_cast<unsigned char>(token[end - 1]))) --end;
    return token.substr(0, end);
}

inline std::vector<std::string> slot_variables(const LogicalForm& lf) {
    std::vector<std::string> vars;
    visit_preorder(lf.root, [&](const LfNode& n, std::size_t) {
        if (is_slot_variable(n.label) && std::find(vars.begin(), vars.end(), n.label) == vars.end()) {
            vars.push_back(n.label);
        }
    });
    return vars;
}

namespace detail {

class SmatchSearch {
public:
    SmatchSearch(const LogicalForm& a, const LogicalForm& b)
        : a_triples_(lf_triples(a)), a_vars_(slot_variables(a)), b_vars_(slot_variables(b)) {
        for (auto& t : lf_triples(b)) ++b_counts_[t];
        for (std::size_t i = 0; i < a_vars_.size(); ++i) a_index_[a_vars_[i]] = static_cast<int>(i);
        compatible_.assign(a_vars_.size(), {});
        for (std::size_t i = 0; i < a_vars_.size(); ++i) {
            for (std::size_t j = 0; j < b_vars_.size(); ++j) {
                if (slot_variable_type(a_vars_[i]) == slot_variable_type(b_vars_[j])) {
                    compatible_[i].push_back(static_cast<int>(j));
                }
            }
        }
    }

    std::size_t total() const { return a_triples_.size(); }

    /// Matched triple count of `a` under `mapping` (a-var index -> b-var index or -1).
    std::size_t score(const std::vector<int>& mapping) const {
        auto remaining = b_counts_;
        std::size_t matched = 0;
        for (const auto& t : a_triples_) {
            Triple r{rename(t.parent, mapping), t.arg, rename(t.child, mapping)};
            auto it = remaining.find(r);
            if (it != remaining.end() && it->second > 0) {
                --it->second;
                ++matched;
            }
        }
        return matched;
    }

    std::size_t run(std::size_t restarts, std::uint64_t seed) const {
        std::vector<int> start(a_vars_.size(), -1);
        std::size_t best = climb(greedy_start(start));
        Rng rng(seed);
        for (std::size_t r = 0; r < restarts && best < total(); ++r) {
            best = std::max(best, climb(random_start(rng)));
        }
        return best;
    }

private:
    std::string rename(const std::string& label, const std::vector<int>& mapping) const {
        auto it = a_index_.find(label);
        if (it == a_index_.end()) return label;
        const int target = mapping[static_cast<std::size_t>(it->second)];
        // \x01 never occurs in parsed labels, so an unmapped variable matches nothing.
        return target < 0 ? std::string("\x01") : b_vars_[static_cast<std::size_t>(target)];
    }

    std::vector<int> greedy_start(std::vector<int> mapping) const {
        std::vector<bool> used(b_vars_.size(), false);
        for (std::size_t i = 0; i < a_vars_.size(); ++i) {
            std::size_t best_score = score(mapping);
            int best_target = -1;
            for (int j : compatible_[i]) {
                if (used[static_cast<std::size_t>(j)]) continue;
                mapping[i] = j;
                const std::size_t s = score(mapping);
                if (s > best_score) {
                    best_score = s;
                    best_target = j;
                }
            }
            mapping[i] = best_target;
            if (best_target >= 0) used[static_cast<std::size_t>(best_target)] = true;
        }
        return mapping;
    }

    std::vector<int> random_start(Rng& rng) const {
        std::vector<int> mapping(a_vars_.size(), -1);
        std::vector<bool> used(b_vars_.size(), false);
        std::vector<std::size_t> order(a_vars_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        rng.shuffle(std::span<std::size_t>(order));
        for (std::size_t i : order) {
            std::vector<int> options{-1};
            for (int j : compatible_[i]) {
                if (!used[static_cast<std::size_t>(j)]) options.push_back(j);
            }
            const int pick = options[rng.uniform_index(options.size())];
            mapping[i] = pick;
            if (pick >= 0) used[static_cast<std::size_t>(pick)] = true;
        }
        return mapping;
    }

    /// Steepest ascent over two move types: reassign one variable to a free
    /// compatible target (or unmap it), and swap the targets of two variables.
    std::size_t climb(std::vector<int> mapping) const {
        std::size_t current = score(mapping);
        while (current < total()) {
            std::size_t best = current;
            std::vector<int> best_mapping;
            std::vector<bool> used(b_vars_.size(), false);
            for (int t : mapping) {
                if (t >= 0) used[static_cast<std::size_t>(t)] = true;
            }
            for (std::size_t i = 0; i < mapping.size(); ++i) {
                const int original = mapping[i];
                std::vector<int> options{-1};
                for (int j : compatible_[i]) {
                    if (!used[static_cast<std::size_t>(j)]) options.push_back(j);
                }
                for (int j : options) {
                    if (j == original) continue;
                    mapping[i] = j;
                    const std::size_t s = score(mapping);
                    if (s > best) {
                        best = s;
                        best_mapping = mapping;
                    }
                }
                mapping[i] = original;
            }
            for (std::size_t i = 0; i < mapping.size(); ++i) {
                for (std::size_t k = i + 1; k < mapping.size(); ++k) {
                    if (mapping[i] == mapping[k]) continue;
                    if (slot_variable_type(a_vars_[i]) != slot_variable_type(a_vars_[k])) continue;
                    std::swap(mapping[i], mapping[k]);
                    const std::size_t s = score(mapping);
                    if (s > best) {
                        best = s;
                        best_mapping = mapping;
                    }
                    std::swap(mapping[i], mapping[k]);
                }
            }
            if (best_mapping.empty()) break;
            mapping = std::move(best_mapping);
            current = best;
        }
        return current;
    }

    std::vector<Triple> a_triples_;
    std::vector<std::string> a_vars_;
    std::vector<std::string> b_vars_;
    std::map<Triple, std::size_t> b_counts_;
    std::map<std::string, int> a_index_;
    std::vector<std::vector<int>> compatible_;
};

}  // namespace detail

inline constexpr std::size_t kDefaultSmatchRestarts = 8;

/// Fraction of `a`'s triples matched in `b` under the best slot-variable
/// alignment found by hill-climbing (one greedy start plus `restarts` random ones).
inline double smatch_directional(const LogicalForm& a, const LogicalForm& b,
                                 std::size_t restarts = kDefaultSmatchRestarts, std::uint64_t seed = 0x5a7c4) {
    detail::SmatchSearch search(a, b);
    return static_cast<double>(search.run(restarts, seed)) / static_cast<double>(search.total());
}

/// Symmetric similarity: mean of both directions.
inline double smatch_sim(const LogicalForm& a, const LogicalForm& b, std::size_t restarts = kDefaultSmatchRestarts) {
    return (smatch_directional(a, b, restarts) + smatch_directional(b, a, restarts)) / 2.0;
}

inline double smatch_distance(const LogicalForm& a, const LogicalForm& b,
                              std::size_t restarts = kDefaultSmatchRestarts) {
    return 1.0 - smatch_sim(a, b, restarts);
}

}  // namespace lrsp::lf
