#pragma once

#include <array>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lrsp/error.hpp"
#include "lrsp/util/text.hpp"

namespace lrsp::metrics {

enum class Clause { Select, From, Where, GroupBy, OrderBy };

inline constexpr std::array<Clause, 5> kClauses{Clause::Select, Clause::From, Clause::Where, Clause::GroupBy,
                                                Clause::OrderBy};

inline std::string clause_name(Clause c) {
    switch (c) {
        case Clause::Select: return "select";
        case Clause::From: return "from";
        case Clause::Where: return "where";
        case Clause::GroupBy: return "group_by";
        case Clause::OrderBy: return "order_by";
    }
    return "unknown";
}

/// Each clause kind mapped to its bag of normalized sub-components. Absent
/// clauses have empty bags.
struct SqlClauses {
    std::map<Clause, std::multiset<std::string>> bags;

    const std::multiset<std::string>& bag(Clause c) const {
        static const std::multiset<std::string> none;
        auto it = bags.find(c);
        return it == bags.end() ? none : it->second;
    }
    std::set<std::string> set(Clause c) const {
        const auto& b = bag(c);
        return {b.begin(), b.end()};
    }
};

namespace detail {

/// Quoted literals stay whole with their quotes; everything else is lowercased.
inline std::vector<std::string> sql_tokens(std::string_view q) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < q.size()) {
        const char c = q[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '\'' || c == '"') {
            const std::size_t end = q.find(c, i + 1);
            if (end == std::string_view::npos) throw Error(Errc::SqlParseError, "unterminated quote");
            out.emplace_back(q.substr(i, end - i + 1));
            i = end + 1;
        } else if (c == '(' || c == ')' || c == ',' || c == ';') {
            out.emplace_back(1, c);
            ++i;
        } else if (c == '<' || c == '>' || c == '=' || c == '!') {
            std::size_t j = i + 1;
            if (j < q.size() && (q[j] == '=' || (c == '<' && q[j] == '>'))) ++j;
            out.emplace_back(q.substr(i, j - i));
            i = j;
        } else {
            std::size_t j = i;
            while (j < q.size() && !std::isspace(static_cast<unsigned char>(q[j])) &&
                   std::string_view("()',;<>=!\"").find(q[j]) == std::string_view::npos) {
                ++j;
            }
            out.push_back(text::to_lower(q.substr(i, j - i)));
            i = j;
        }
    }
    if (!out.empty() && out.back() == ";") out.pop_back();
    return out;
}

/// Splits `toks` at depth-0 positions where `is_sep(index)` holds; separators are dropped.
template <typename Pred>
std::vector<std::vector<std::string>> split_top(const std::vector<std::string>& toks, Pred is_sep,
                                                std::size_t sep_len = 1) {
    std::vector<std::vector<std::string>> parts(1);
    int depth = 0;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (toks[i] == "(") ++depth;
        if (toks[i] == ")") --depth;
        if (depth == 0 && is_sep(i)) {
            parts.emplace_back();
            i += sep_len - 1;
            continue;
        }
        parts.back().push_back(toks[i]);
    }
    return parts;
}

inline void add_parts(std::multiset<std::string>& bag, const std::vector<std::vector<std::string>>& parts) {
    for (const auto& p : parts) {
        if (p.empty()) throw Error(Errc::SqlParseError, "empty sub-component");
        bag.insert(text::join(p));
    }
}

}  // namespace detail

/// Parses the five supported clause kinds. Sub-components are split on
/// depth-0 commas (select, from, group by, order by), on depth-0 AND (where,
/// join conditions) and on JOIN keywords (from). HAVING conditions join the
/// group-by bag prefixed with "having"; LIMIT joins the order-by bag.
inline SqlClauses parse_sql(std::string_view query) {
    const auto toks = detail::sql_tokens(query);
    if (toks.empty() || toks.front() != "select") throw Error(Errc::SqlParseError, "query must start with SELECT");
    int depth = 0;
    for (const auto& t : toks) {
        depth += t == "(" ? 1 : (t == ")" ? -1 : 0);
        if (depth < 0) throw Error(Errc::SqlParseError, "unbalanced parentheses");
    }
    if (depth != 0) throw Error(Errc::SqlParseError, "unbalanced parentheses");

    // Locate depth-0 clause keywords.
    struct Mark {
        std::string kind;
        std::size_t start, body;
    };
    std::vector<Mark> marks;
    depth = 0;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (toks[i] == "(") ++depth;
        if (toks[i] == ")") --depth;
        if (depth != 0) continue;
        const auto& t = toks[i];
        const bool by_next = i + 1 < toks.size() && toks[i + 1] == "by";
        if (t == "select" || t == "from" || t == "where" || t == "having" || t == "limit") {
            marks.push_back({t, i, i + 1});
        } else if ((t == "group" || t == "order") && by_next) {
            marks.push_back({t + " by", i, i + 2});
        }
    }
    SqlClauses out;
    std::set<std::string> seen;
    for (std::size_t m = 0; m < marks.size(); ++m) {
        const std::size_t end = m + 1 < marks.size() ? marks[m + 1].start : toks.size();
        std::vector<std::string> body(toks.begin() + static_cast<std::ptrdiff_t>(marks[m].body),
                                      toks.begin() + static_cast<std::ptrdiff_t>(end));
        const auto& kind = marks[m].kind;
        if (!seen.insert(kind).second) throw Error(Errc::SqlParseError, "repeated " + kind + " clause");
        if (body.empty()) throw Error(Errc::SqlParseError, "empty " + kind + " clause");
        auto commas = [&](std::size_t i) { return body[i] == ","; };
        auto ands = [&](std::size_t i) { return body[i] == "and"; };
        if (kind == "select") {
            auto& bag = out.bags[Clause::Select];
            if (body.front() == "distinct") {
                bag.insert("distinct");
                body.erase(body.begin());
            }
            detail::add_parts(bag, detail::split_top(body, commas));
        } else if (kind == "from") {
            auto& bag = out.bags[Clause::From];
            static const std::set<std::string> join_words{"join", "inner", "left", "right", "outer", "cross"};
            std::vector<std::string> cur;
            bool in_on = false;
            auto flush = [&] {
                if (cur.empty()) return;
                if (in_on) {
                    detail::add_parts(bag, detail::split_top(cur, [&](std::size_t i) { return cur[i] == "and"; }));
                } else {
                    detail::add_parts(bag, detail::split_top(cur, [&](std::size_t i) { return cur[i] == ","; }));
                }
                cur.clear();
            };
            int d = 0;
            for (const auto& t : body) {
                if (t == "(") ++d;
                if (t == ")") --d;
                if (d == 0 && join_words.count(t)) {
                    flush();
                    in_on = false;
                    continue;
                }
                if (d == 0 && t == "on") {
                    flush();
                    in_on = true;
                    continue;
                }
                cur.push_back(t);
            }
            flush();
        } else if (kind == "where") {
            detail::add_parts(out.bags[Clause::Where], detail::split_top(body, ands));
        } else if (kind == "group by") {
            detail::add_parts(out.bags[Clause::GroupBy], detail::split_top(body, commas));
        } else if (kind == "having") {
            for (auto& p : detail::split_top(body, ands)) {
                if (p.empty()) throw Error(Errc::SqlParseError, "empty having condition");
                out.bags[Clause::GroupBy].insert("having " + text::join(p));
            }
        } else if (kind == "order by") {
            auto parts = detail::split_top(body, commas);
            for (auto& p : parts) {
                if (p.size() > 1 && p.back() == "asc") p.pop_back();
            }
            detail::add_parts(out.bags[Clause::OrderBy], parts);
        } else if (kind == "limit") {
            out.bags[Clause::OrderBy].insert("limit " + text::join(body));
        }
    }
    return out;
}

}  // namespace lrsp::metrics
