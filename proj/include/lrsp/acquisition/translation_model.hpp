#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lrsp/data/example.hpp"
#include "lrsp/error.hpp"
#include "lrsp/lf/anonymize.hpp"
#include "lrsp/lf/decompose.hpp"

namespace lrsp::acquisition {

/// Entropy in nats of a distribution given by non-negative weights.
inline double entropy_of_counts(const std::vector<double>& weights) {
    double total = 0;
    for (double w : weights) total += w;
    if (total <= 0) return 0;
    double h = 0;
    for (double w : weights) {
        if (w > 0) {
            const double p = w / total;
            h -= p * std::log(p);
        }
    }
    return h;
}

struct TranslationRow {
    std::string row_id;  // id of the translated training row, used to look up back-translation scores
    std::string text;
};

/// Count-based estimates from the current training data: target-language
/// translations grouped by LF, and source-word co-occurrence per atom or
/// compound.
class EmpiricalTranslationModel {
public:
    EmpiricalTranslationModel() = default;
    explicit EmpiricalTranslationModel(lf::TypingRules typing) : typing_(std::move(typing)) {}

    /// Key under which LFs are grouped: the canonical text, anonymized when
    /// typing rules are configured.
    std::string lf_key(const lf::LogicalForm& lf) const {
        if (typing_) return lf::serialize(lf::anonymize(lf, *typing_).lf);
        return lf::serialize(lf);
    }

    void add_translation(const lf::LogicalForm& lf, TranslationRow row) {
        per_lf_[lf_key(lf)].push_back(std::move(row));
    }

    void add_translation(const Example& row) { add_translation(row.lf, {row.id, row.utterance_text()}); }

    /// Source-language statistics: each distinct atom or compound of the LF
    /// co-occurs once with every utterance token.
    void add_source(const Example& ex) {
        const auto feats = lf::structure_features(ex.lf);
        const std::set<std::string> distinct(feats.begin(), feats.end());
        for (const auto& a : distinct) {
            auto& row = coocc_[a];
            for (const auto& w : ex.utterance) ++row[w];
        }
    }

    /// Translations sharing `lf`, or an empty list.
    const std::vector<TranslationRow>& translations(const lf::LogicalForm& lf) const {
        static const std::vector<TranslationRow> none;
        auto it = per_lf_.find(lf_key(lf));
        return it == per_lf_.end() ? none : it->second;
    }

    /// Empirical distribution over distinct translation strings for `lf`.
    std::map<std::string, double> translation_distribution(const lf::LogicalForm& lf) const {
        const auto& rows = translations(lf);
        if (rows.empty()) throw Error(Errc::MissingScore, "no translations for LF " + lf_key(lf));
        std::map<std::string, double> out;
        for (const auto& r : rows) out[r.text] += 1.0;
        for (auto& [t, p] : out) p /= static_cast<double>(rows.size());
        return out;
    }

    double translation_entropy(const lf::LogicalForm& lf) const {
        std::vector<double> w;
        for (const auto& [t, p] : translation_distribution(lf)) w.push_back(p);
        return entropy_of_counts(w);
    }

    /// Entropy of p(word | feature) in nats; 0 for a feature never seen.
    double lexical_entropy(const std::string& feature) const {
        auto it = coocc_.find(feature);
        if (it == coocc_.end()) return 0;
        std::vector<double> w;
        for (const auto& [word, c] : it->second) w.push_back(static_cast<double>(c));
        return entropy_of_counts(w);
    }

    const std::map<std::string, std::map<std::string, std::size_t>>& cooccurrence() const { return coocc_; }
    std::size_t lf_count() const noexcept { return per_lf_.size(); }

private:
    std::optional<lf::TypingRules> typing_;
    std::map<std::string, std::vector<TranslationRow>> per_lf_;
    std::map<std::string, std::map<std::string, std::size_t>> coocc_;
};

}  // namespace lrsp::acquisition
