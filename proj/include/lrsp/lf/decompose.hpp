#pragma once

#include <string>
#include <vector>

#include "lrsp/lf/logical_form.hpp"

namespace lrsp::lf {

struct Atom {
    std::string label;

    friend bool operator==(const Atom&, const Atom&) = default;
    friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// Depth-1 skeleton of an internal node: its label and the root labels of its children.
struct Compound {
    std::string head;
    std::vector<std::string> child_heads;

    friend bool operator==(const Compound&, const Compound&) = default;
    friend auto operator<=>(const Compound&, const Compound&) = default;

    /// Rendered as in the worked examples, e.g. `( and state:t next_to:t )`.
    std::string str() const {
        std::string out = "( " + head;
        for (const auto& c : child_heads) out += " " + c;
        return out + " )";
    }
};

/// One atom per node, pre-order, multiplicity preserved.
inline std::vector<Atom> extract_atoms(const LogicalForm& lf) {
    std::vector<Atom> out;
    visit_preorder(lf.root, [&](const LfNode& n, std::size_t) { out.push_back(Atom{n.label}); });
    return out;
}

/// One compound per internal node, pre-order.
inline std::vector<Compound> extract_compounds(const LogicalForm& lf) {
    std::vector<Compound> out;
    visit_preorder(lf.root, [&](const LfNode& n, std::size_t) {
        if (n.is_leaf()) return;
        Compound c{n.label, {}};
        c.child_heads.reserve(n.children.size());
        for (const auto& ch : n.children) c.child_heads.push_back(ch.label);
        out.push_back(std::move(c));
    });
    return out;
}

/// Parser actions: internal nodes render as `REDUCE head:-c1 c2 ...`, leaves as `GEN label`.
inline std::vector<std::string> extract_actions(const LogicalForm& lf) {
    std::vector<std::string> out;
    visit_preorder(lf.root, [&](const LfNode& n, std::size_t) {
        if (n.is_leaf()) {
            out.push_back("GEN " + n.label);
            return;
        }
        std::string a = "REDUCE " + n.label + ":-";
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            if (i) a += ' ';
            a += n.children[i].label;
        }
        out.push_back(std::move(a));
    });
    return out;
}

/// Feature keys shared by TF-IDF featurization and lexical-choice statistics.
/// Atoms and compounds live in one namespace, distinguished by prefix.
inline std::vector<std::string> structure_features(const LogicalForm& lf) {
    std::vector<std::string> out;
    for (auto& a : extract_atoms(lf)) out.push_back("A:" + a.label);
    for (auto& c : extract_compounds(lf)) out.push_back("C:" + c.str());
    return out;
}

}  // namespace lrsp::lf
