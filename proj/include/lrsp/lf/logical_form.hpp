#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lrsp/error.hpp"
#include "lrsp/util/text.hpp"

namespace lrsp::lf {

/// One node of a logical-form tree. A node is a leaf iff it has no children.
struct LfNode {
    std::string label;
    std::vector<LfNode> children;

    LfNode() = default;
    explicit LfNode(std::string l, std::vector<LfNode> c = {}) : label(std::move(l)), children(std::move(c)) {}

    bool is_leaf() const noexcept { return children.empty(); }

    friend bool operator==(const LfNode&, const LfNode&) = default;
};

/// Rooted, ordered, labeled tree. Immutable by convention once built.
struct LogicalForm {
    LfNode root;

    friend bool operator==(const LogicalForm&, const LogicalForm&) = default;
};

/// Pre-order visit; the callback receives the node and its depth (root = 0).
inline void visit_preorder(const LfNode& node, const std::function<void(const LfNode&, std::size_t)>& fn,
                           std::size_t depth = 0) {
    fn(node, depth);
    for (const auto& child : node.children) visit_preorder(child, fn, depth + 1);
}

inline std::size_t node_count(const LfNode& node) {
    std::size_t n = 1;
    for (const auto& c : node.children) n += node_count(c);
    return n;
}

inline std::size_t internal_count(const LfNode& node) {
    if (node.is_leaf()) return 0;
    std::size_t n = 1;
    for (const auto& c : node.children) n += internal_count(c);
    return n;
}

namespace detail {

inline std::vector<std::string> tokenize_sexpr(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) tokens.push_back(std::move(cur));
        cur.clear();
    };
    for (char c : text) {
        if (c == '(' || c == ')') {
            flush();
            tokens.emplace_back(1, c);
        } else if (text::is_space(c)) {
            flush();
        } else {
            cur.push_back(c);
        }
    }
    flush();
    return tokens;
}

inline void serialize_into(const LfNode& node, std::string& out) {
    if (node.is_leaf()) {
        out += node.label;
        return;
    }
    out += "( ";
    out += node.label;
    for (const auto& c : node.children) {
        out += ' ';
        serialize_into(c, out);
    }
    out += " )";
}

}  // namespace detail

/// Parses parenthesized prefix notation: `x` or `( head child ... )`.
/// Parentheses need not be surrounded by spaces in the input.
inline LogicalForm parse_lf(std::string_view text) {
    const auto tokens = detail::tokenize_sexpr(text);
    if (tokens.empty()) throw Error(Errc::EmptyNode, "empty logical form");

    // Iterative so deeply nested generated LFs cannot exhaust the stack.
    std::vector<LfNode> stack;
    std::vector<LfNode> done;
    int depth = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto& tok = tokens[i];
        if (tok == "(") {
            if (i + 1 >= tokens.size()) throw Error(Errc::UnbalancedParens, "dangling '('");
            const auto& head = tokens[i + 1];
            if (head == ")") throw Error(Errc::EmptyNode, "empty node '( )'");
            if (head == "(") throw Error(Errc::EmptyNode, "node without a head label");
            stack.emplace_back(head);
            ++depth;
            ++i;
        } else if (tok == ")") {
            if (depth == 0) throw Error(Errc::UnbalancedParens, "unexpected ')'");
            --depth;
            LfNode node = std::move(stack.back());
            stack.pop_back();
            if (stack.empty()) done.push_back(std::move(node));
            else stack.back().children.push_back(std::move(node));
        } else if (stack.empty()) {
            done.emplace_back(tok);
        } else {
            stack.back().children.emplace_back(tok);
        }
    }
    if (depth != 0) throw Error(Errc::UnbalancedParens, "missing ')'");
    if (done.size() != 1) throw Error(Errc::MalformedLf, "expected exactly one tree, found " + std::to_string(done.size()));
    return LogicalForm{std::move(done.front())};
}

inline std::string serialize(const LfNode& node) {
    std::string out;
    detail::serialize_into(node, out);
    return out;
}

inline std::string serialize(const LogicalForm& lf) { return serialize(lf.root); }

/// Canonical whitespace form of LF text: single spaces, parentheses as tokens.
inline std::string canonical(std::string_view text) { return serialize(parse_lf(text)); }

namespace detail {

class FunctionalParser {
public:
    explicit FunctionalParser(std::string_view s) : s_(s) {}

    LfNode parse_all() {
        LfNode node = parse_term();
        skip_ws();
        if (pos_ != s_.size()) throw Error(Errc::MalformedLf, "trailing input at offset " + std::to_string(pos_));
        return node;
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && text::is_space(s_[pos_])) ++pos_;
    }

    std::string parse_atom() {
        skip_ws();
        std::string out;
        if (pos_ < s_.size() && (s_[pos_] == '\'' || s_[pos_] == '"')) {
            const char quote = s_[pos_];
            out.push_back(s_[pos_++]);
            while (pos_ < s_.size() && s_[pos_] != quote) out.push_back(s_[pos_++]);
            if (pos_ >= s_.size()) throw Error(Errc::MalformedLf, "unterminated quote");
            out.push_back(s_[pos_++]);
            return out;
        }
        while (pos_ < s_.size()) {
            const char c = s_[pos_];
            if (c == '(' || c == ')' || c == ',' || text::is_space(c)) break;
            out.push_back(c);
            ++pos_;
        }
        if (out.empty()) throw Error(Errc::EmptyNode, "missing label at offset " + std::to_string(pos_));
        return out;
    }

    LfNode parse_term() {
        LfNode node(parse_atom());
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '(') {
            ++pos_;
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == ')') throw Error(Errc::EmptyNode, "call with no arguments");
            while (true) {
                node.children.push_back(parse_term());
                skip_ws();
                if (pos_ >= s_.size()) throw Error(Errc::UnbalancedParens, "missing ')'");
                if (s_[pos_] == ',') {
                    ++pos_;
                    continue;
                }
                if (s_[pos_] == ')') {
                    ++pos_;
                    break;
                }
                throw Error(Errc::MalformedLf, "expected ',' or ')' at offset " + std::to_string(pos_));
            }
        }
        return node;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

inline void functional_into(const LfNode& node, std::string& out) {
    out += node.label;
    if (node.is_leaf()) return;
    out += '(';
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i) out += ", ";
        functional_into(node.children[i], out);
    }
    out += ')';
}

}  // namespace detail

/// Parses call notation such as `ask_weather(state_id('VIC'), date('today'), var)`.
/// Quoted literals become single leaf labels, quotes included.
inline LogicalForm parse_functional(std::string_view text) {
    if (text::trim(text).empty()) throw Error(Errc::EmptyNode, "empty logical form");
    int balance = 0;
    bool quoted = false;
    char quote = 0;
    for (char c : text) {
        if (quoted) {
            if (c == quote) quoted = false;
            continue;
        }
        if (c == '\'' || c == '"') {
            quoted = true;
            quote = c;
        } else if (c == '(') {
            ++balance;
        } else if (c == ')') {
            if (--balance < 0) throw Error(Errc::UnbalancedParens, "unexpected ')'");
        }
    }
    if (balance != 0) throw Error(Errc::UnbalancedParens, "missing ')'");
    return LogicalForm{detail::FunctionalParser(text).parse_all()};
}

inline std::string to_functional(const LogicalForm& lf) {
    std::string out;
    detail::functional_into(lf.root, out);
    return out;
}

}  // namespace lrsp::lf
