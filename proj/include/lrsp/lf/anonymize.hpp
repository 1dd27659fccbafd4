#pragma once

#include <filesystem>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "lrsp/error.hpp"
#include "lrsp/lf/logical_form.hpp"
#include "lrsp/util/io.hpp"
#include "lrsp/util/text.hpp"

namespace lrsp::lf {

struct TypingRule {
    std::string pattern;  // ECMAScript regex, matched against the whole leaf label
    std::string type;
    std::string slot;  // token written in place of a matching leaf
};

/// Ordered entity-typing rules; the first matching rule wins.
class TypingRules {
public:
    TypingRules() = default;

    explicit TypingRules(std::vector<TypingRule> rules) {
        for (auto& r : rules) add(std::move(r));
    }

    void add(TypingRule rule) {
        if (rule.slot.empty()) rule.slot = rule.type;
        try {
            compiled_.emplace_back(rule.pattern);
        } catch (const std::regex_error& e) {
            throw Error(Errc::InvalidConfig, "bad typing pattern '" + rule.pattern + "': " + e.what());
        }
        slots_.emplace(rule.slot, rule.type);
        rules_.push_back(std::move(rule));
    }

    /// Line format: `<regex> <type> [slot]`; `#` starts a comment line.
    static TypingRules parse(const std::vector<std::string>& lines) {
        TypingRules out;
        for (const auto& raw : lines) {
            const auto line = text::trim(raw);
            if (line.empty() || line.front() == '#') continue;
            auto fields = text::split_ws(line);
            if (fields.size() < 2 || fields.size() > 3) {
                throw Error(Errc::InvalidConfig, "typing rule needs 2 or 3 fields: " + std::string(line));
            }
            out.add({fields[0], fields[1], fields.size() == 3 ? fields[2] : std::string{}});
        }
        return out;
    }

    static TypingRules load(const std::filesystem::path& path) { return parse(io::read_lines(path)); }

    bool empty() const noexcept { return rules_.empty(); }
    const std::vector<TypingRule>& rules() const noexcept { return rules_; }

    bool is_slot(const std::string& token) const { return slots_.count(token) != 0; }
    const std::map<std::string, std::string>& slot_types() const noexcept { return slots_; }

    /// Returns the rule index matching `label`, or -1.
    int match(const std::string& label) const {
        for (std::size_t i = 0; i < compiled_.size(); ++i) {
            if (std::regex_match(label, compiled_[i])) return static_cast<int>(i);
        }
        return -1;
    }

private:
    std::vector<TypingRule> rules_;
    std::vector<std::regex> compiled_;
    std::map<std::string, std::string> slots_;  // slot token -> type tag
};

/// An LF whose entities and values have been replaced by typed slot tokens.
struct Template {
    LogicalForm lf;
    std::map<std::string, std::string> slot_types;

    friend bool operator==(const Template&, const Template&) = default;
};

namespace detail {

inline void anonymize_node(LfNode& node, const TypingRules& rules, std::map<std::string, std::string>& used) {
    if (node.is_leaf()) {
        if (rules.is_slot(node.label)) {
            used.emplace(node.label, rules.slot_types().at(node.label));
            return;
        }
        const int hit = rules.match(node.label);
        if (hit >= 0) {
            const auto& rule = rules.rules()[static_cast<std::size_t>(hit)];
            node.label = rule.slot;
            used.emplace(rule.slot, rule.type);
        }
        return;
    }
    for (auto& c : node.children) anonymize_node(c, rules, used);
}

}  // namespace detail

/// Replaces every leaf matched by a typing rule with that rule's slot token.
/// Leaves that already are slot tokens are left alone, which makes the
/// operation idempotent. Internal nodes (predicates) are never rewritten.
inline Template anonymize(const LogicalForm& lf, const TypingRules& rules) {
    Template t{lf, {}};
    detail::anonymize_node(t.lf.root, rules, t.slot_types);
    return t;
}

inline Template anonymize(const Template& t, const TypingRules& rules) {
    Template out = anonymize(t.lf, rules);
    for (const auto& [slot, type] : t.slot_types) out.slot_types.emplace(slot, type);
    return out;
}

}  // namespace lrsp::lf
