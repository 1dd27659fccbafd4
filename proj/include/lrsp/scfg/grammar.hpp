#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lrsp/error.hpp"
#include "lrsp/lf/anonymize.hpp"
#include "lrsp/util/io.hpp"
#include "lrsp/util/text.hpp"

namespace lrsp::scfg {

/// A rule-side symbol: a terminal token, or a nonterminal with its alignment index.
struct Symbol {
    std::string text;  // terminal token or nonterminal name
    bool nonterminal = false;
    std::size_t link = 0;  // pairs the source and target occurrence

    friend bool operator==(const Symbol&, const Symbol&) = default;
};

struct ScfgRule {
    std::string head;
    std::vector<Symbol> source;
    std::vector<Symbol> target;

    /// Nonterminal links in source order; derivations expand children in this order.
    std::vector<std::size_t> source_links() const {
        std::vector<std::size_t> out;
        for (const auto& s : source) {
            if (s.nonterminal) out.push_back(s.link);
        }
        return out;
    }

    std::string child_name(std::size_t link) const {
        for (const auto& s : source) {
            if (s.nonterminal && s.link == link) return s.text;
        }
        throw Error(Errc::AlignmentMismatch, "no source nonterminal with link " + std::to_string(link));
    }
};

struct LexiconEntry {
    std::vector<std::string> surface;
    std::string lf_value;

    friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

inline bool is_variable_token(std::string_view tok) {
    static const std::regex re(R"(^\$[A-Za-z_][A-Za-z0-9_]*$)");
    return std::regex_match(tok.begin(), tok.end(), re);
}

class ScfgGrammar {
public:
    std::string start = "ROOT";
    std::vector<ScfgRule> rules;
    std::map<std::string, std::vector<LexiconEntry>> lexicon;
    std::set<std::string> abstract_variables;

    /// Rule indices per head, in file order.
    std::vector<std::size_t> rules_for(const std::string& head) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < rules.size(); ++i) {
            if (rules[i].head == head) out.push_back(i);
        }
        return out;
    }

    bool has_rules(const std::string& head) const {
        for (const auto& r : rules) {
            if (r.head == head) return true;
        }
        return false;
    }

    std::set<std::string> reachable() const {
        std::set<std::string> seen{start};
        std::vector<std::string> todo{start};
        while (!todo.empty()) {
            auto cur = todo.back();
            todo.pop_back();
            for (const auto& r : rules) {
                if (r.head != cur) continue;
                for (const auto& s : r.source) {
                    if (s.nonterminal && seen.insert(s.text).second) todo.push_back(s.text);
                }
            }
        }
        return seen;
    }

    /// Nonterminals that can finish a derivation (least fixed point).
    std::set<std::string> productive() const {
        std::set<std::string> ok;
        bool grew = true;
        while (grew) {
            grew = false;
            for (const auto& r : rules) {
                if (ok.count(r.head)) continue;
                bool all = true;
                for (const auto& s : r.source) {
                    if (s.nonterminal && !ok.count(s.text)) all = false;
                }
                if (all) {
                    ok.insert(r.head);
                    grew = true;
                }
            }
        }
        return ok;
    }

    /// Enforces the structural invariants; raised codes match load_grammar's contract.
    void validate() const {
        for (std::size_t i = 0; i < rules.size(); ++i) validate_rule(rules[i], i);
        if (!has_rules(start)) throw Error(Errc::UnreachableStart, "start symbol " + start + " has no rules");
        for (const auto& r : rules) {
            for (const auto& s : r.source) {
                if (s.nonterminal && !has_rules(s.text)) {
                    throw Error(Errc::UnknownNonterminal, "nonterminal " + s.text + " has no rules");
                }
            }
        }
        for (const auto& v : abstract_variables) {
            if (lexicon.count(v)) throw Error(Errc::InvalidConfig, v + " is both abstract and in the lexicon");
        }
        for (const auto& [v, entries] : lexicon) {
            if (entries.empty()) throw Error(Errc::InvalidConfig, "lexicon variable " + v + " has no values");
        }
    }

    /// Typing rules that map every lexicon LF value back to its variable, for
    /// anonymizing generated data into templates.
    lf::TypingRules typing_rules() const {
        lf::TypingRules out;
        for (const auto& [var, entries] : lexicon) {
            for (const auto& e : entries) out.add({regex_escape(e.lf_value), var.substr(1), var});
        }
        return out;
    }

private:
    static std::string regex_escape(const std::string& s) {
        static const std::string special = R"(\^$.|?*+()[]{}-)";
        std::string out;
        for (char c : s) {
            if (special.find(c) != std::string::npos) out += '\\';
            out += c;
        }
        return out;
    }

    static void validate_rule(const ScfgRule& r, std::size_t index) {
        const auto where = "rule " + std::to_string(index) + " (" + r.head + ")";
        auto collect = [&](const std::vector<Symbol>& side, const char* name) {
            std::map<std::size_t, std::string> links;
            for (const auto& s : side) {
                if (!s.nonterminal) continue;
                if (!links.emplace(s.link, s.text).second) {
                    throw Error(Errc::AlignmentMismatch,
                                where + ": link " + std::to_string(s.link) + " repeated on " + name + " side");
                }
            }
            return links;
        };
        if (collect(r.source, "source") != collect(r.target, "target")) {
            throw Error(Errc::AlignmentMismatch, where + ": source and target nonterminals differ");
        }
        auto vars = [](const std::vector<Symbol>& side) {
            std::multiset<std::string> out;
            for (const auto& s : side) {
                if (!s.nonterminal && is_variable_token(s.text)) out.insert(s.text);
            }
            return out;
        };
        if (vars(r.source) != vars(r.target)) {
            throw Error(Errc::AlignmentMismatch, where + ": variables differ between source and target");
        }
    }
};

namespace detail {

inline Symbol parse_symbol(const std::string& tok) {
    static const std::regex nt(R"(^<([A-Za-z_][A-Za-z0-9_]*):([0-9]+)>$)");
    std::smatch m;
    if (std::regex_match(tok, m, nt)) return Symbol{m[1].str(), true, std::stoul(m[2].str())};
    return Symbol{tok, false, 0};
}

inline std::vector<Symbol> parse_side(std::string_view text) {
    std::vector<Symbol> out;
    for (const auto& tok : text::split_ws(text)) out.push_back(parse_symbol(tok));
    return out;
}

}  // namespace detail

/// Line format:
///   HEAD -> src: <tokens> ;; tgt: <tokens>     nonterminals as <NT:i>
///   lexicon $VAR = surface words | lf_value
///   abstract $VAR
///   start NT
/// Blank lines and lines starting with `#` are ignored.
inline ScfgGrammar parse_grammar(const std::vector<std::string>& lines) {
    ScfgGrammar g;
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const std::string line(text::trim(lines[n]));
        const auto at = "line " + std::to_string(n + 1) + ": ";
        if (line.empty() || line.front() == '#') continue;
        auto fields = text::split_ws(line);
        if (fields[0] == "start") {
            if (fields.size() != 2) throw Error(Errc::InvalidConfig, at + "start takes one symbol");
            g.start = fields[1];
        } else if (fields[0] == "abstract") {
            if (fields.size() < 2) throw Error(Errc::InvalidConfig, at + "abstract needs a variable");
            for (std::size_t i = 1; i < fields.size(); ++i) {
                if (!is_variable_token(fields[i])) throw Error(Errc::InvalidConfig, at + "bad variable " + fields[i]);
                g.abstract_variables.insert(fields[i]);
            }
        } else if (fields[0] == "lexicon") {
            const auto eq = line.find('=');
            const auto bar = line.rfind('|');
            if (fields.size() < 2 || eq == std::string::npos || bar == std::string::npos || bar < eq) {
                throw Error(Errc::InvalidConfig, at + "expected 'lexicon $VAR = surface | lf_value'");
            }
            const auto var = std::string(text::trim(std::string_view(line).substr(7, eq - 7)));
            if (!is_variable_token(var)) throw Error(Errc::InvalidConfig, at + "bad variable " + var);
            auto surface = text::split_ws(std::string_view(line).substr(eq + 1, bar - eq - 1));
            auto value = text::split_ws(std::string_view(line).substr(bar + 1));
            if (surface.empty() || value.size() != 1) {
                throw Error(Errc::InvalidConfig, at + "lexicon needs a surface form and a single-token LF value");
            }
            g.lexicon[var].push_back({std::move(surface), value[0]});
        } else {
            const auto arrow = line.find("->");
            const auto src = line.find("src:");
            const auto sep = line.find(";;");
            const auto tgt = line.find("tgt:");
            if (arrow == std::string::npos || src == std::string::npos || sep == std::string::npos ||
                tgt == std::string::npos || !(arrow < src && src < sep && sep < tgt)) {
                throw Error(Errc::InvalidConfig, at + "expected 'HEAD -> src: ... ;; tgt: ...'");
            }
            ScfgRule r;
            r.head = std::string(text::trim(std::string_view(line).substr(0, arrow)));
            if (r.head.empty() || r.head.find(' ') != std::string::npos) {
                throw Error(Errc::InvalidConfig, at + "bad rule head");
            }
            r.source = detail::parse_side(std::string_view(line).substr(src + 4, sep - src - 4));
            r.target = detail::parse_side(std::string_view(line).substr(tgt + 4));
            if (r.source.empty() || r.target.empty()) throw Error(Errc::InvalidConfig, at + "empty rule side");
            g.rules.push_back(std::move(r));
        }
    }
    g.validate();
    return g;
}

inline ScfgGrammar load_grammar(const std::filesystem::path& path) { return parse_grammar(io::read_lines(path)); }

}  // namespace lrsp::scfg
