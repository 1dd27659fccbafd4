#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lrsp/acquisition/score_table.hpp"
#include "lrsp/acquisition/selection.hpp"
#include "lrsp/acquisition/translation_model.hpp"
#include "lrsp/data/example.hpp"
#include "lrsp/features/vectors.hpp"
#include "lrsp/harness/config.hpp"
#include "lrsp/harness/select.hpp"
#include "lrsp/util/io.hpp"

namespace lrsp::harness {

/// Translations keyed by source id.
using TranslationFile = std::map<std::string, std::string>;

/// JSON-lines {id, utterance} where utterance is a string or a token array.
inline TranslationFile load_translations(const std::filesystem::path& path) {
    TranslationFile out;
    for (const auto& row : io::read_jsonl(path)) {
        try {
            const auto& u = row.at("utterance");
            out[row.at("id").get<std::string>()] =
                u.is_array() ? text::join(u.get<std::vector<std::string>>()) : text::normalize_ws(u.get<std::string>());
        } catch (const io::Json::exception& e) {
            throw Error(Errc::Io, path.string() + ": bad translation row: " + e.what());
        }
    }
    return out;
}

struct SimulationInputs {
    std::vector<Example> pool;
    TranslationFile oracle;
    std::optional<TranslationFile> mt;
    std::optional<acquisition::ScoreTable> scores;
    std::optional<features::EmbeddingTable> embeddings;
};

inline SimulationInputs load_inputs(const AlConfig& cfg) {
    SimulationInputs in;
    in.pool = load_examples(cfg.data.pool);
    in.oracle = load_translations(cfg.data.oracle);
    if (!cfg.data.mt.empty()) in.mt = load_translations(cfg.data.mt);
    if (!cfg.data.scores.empty()) in.scores = acquisition::ScoreTable::load(cfg.data.scores);
    if (!cfg.data.embeddings.empty()) in.embeddings = features::EmbeddingTable::load(cfg.data.embeddings);
    return in;
}

inline const std::string kMtSuffix = "/mt";
inline const std::string kHtSuffix = "/ht";

struct RoundArtifact {
    std::size_t round = 0;
    acquisition::Selection selection;  // empty for round 0
    std::vector<Example> revealed;     // human translations added this round
    std::vector<Example> train;        // merged training manifest after the round
    io::Json snapshot;
};

namespace detail {

inline Example translated_row(const Example& src, const std::string& text_, const std::string& suffix,
                              const std::string& language) {
    Example ex;
    ex.id = src.id + suffix;
    ex.utterance = text::split_ws(text_);
    ex.lf = src.lf;
    ex.language = language;
    ex.task = src.task;
    ex.meta["source_id"] = src.id;
    ex.meta["origin"] = suffix.substr(1);
    return ex;
}

/// Per-round seed: a splitmix step keeps rounds decorrelated under one run seed.
inline std::uint64_t round_seed(std::uint64_t seed, std::size_t round) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(round) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline io::Json snapshot_of(std::size_t round, std::size_t selected, std::size_t cumulative,
                            const std::vector<Example>& train) {
    std::size_t mt = 0, ht = 0;
    for (const auto& ex : train) {
        auto it = ex.meta.find("origin");
        if (it == ex.meta.end()) continue;
        mt += it->second == "mt";
        ht += it->second == "ht";
    }
    return io::Json{{"round", round},
                    {"selected", selected},
                    {"cumulative_selected", cumulative},
                    {"train_rows", train.size()},
                    {"source_rows", train.size() - mt - ht},
                    {"mt_rows", mt},
                    {"ht_rows", ht}};
}

}  // namespace detail

/// Replays the annotation loop. Round 0 holds the source pool, plus every
/// machine translation in HAT mode. Each later round scores the unlabeled
/// pool, takes that round's budget, reveals the human translations and
/// appends them; earlier rows are never removed.
inline std::vector<RoundArtifact> run_simulation(const AlConfig& cfg, const SimulationInputs& in) {
    cfg.validate();
    const bool hat = cfg.mode == SimMode::Hat;
    const auto budgets = round_budgets(cfg.budget, in.pool.size());
    const std::size_t rounds = cfg.round_count();

    std::vector<Example> train = in.pool;
    if (hat) {
        if (!in.mt) throw Error(Errc::MissingMachineTranslation, "hat mode needs a machine-translation file");
        for (const auto& ex : in.pool) {
            auto it = in.mt->find(ex.id);
            if (it == in.mt->end()) throw Error(Errc::MissingMachineTranslation, "no machine translation for " + ex.id);
            train.push_back(detail::translated_row(ex, it->second, kMtSuffix, cfg.target_language));
        }
    }
    const auto index = acquisition::index_by_id(in.pool);

    std::vector<RoundArtifact> out;
    out.push_back({0, {cfg.acquisition.method, {}}, {}, train, detail::snapshot_of(0, 0, 0, train)});
    std::set<std::string> labeled;
    for (std::size_t q = 1; q <= rounds; ++q) {
        acquisition::EmpiricalTranslationModel model;
        for (const auto& ex : train) {
            if (ex.meta.count("origin")) model.add_translation(ex.lf, {ex.id, ex.utterance_text()});
        }
        SelectionContext ctx;
        ctx.scores = in.scores ? &*in.scores : nullptr;
        ctx.embeddings = in.embeddings ? &*in.embeddings : nullptr;
        ctx.translations = &model;
        auto sel = select_examples(cfg.acquisition, in.pool, labeled, budgets[q - 1], detail::round_seed(cfg.seed, q),
                                   ctx);
        RoundArtifact art;
        art.round = q;
        for (const auto& id : sel.ids()) {
            if (!labeled.insert(id).second) throw Error(Errc::InvalidArgument, id + " was selected twice");
            auto it = in.oracle.find(id);
            if (it == in.oracle.end()) throw Error(Errc::MissingTranslation, "oracle has no translation for " + id);
            art.revealed.push_back(detail::translated_row(in.pool[index.at(id)], it->second, kHtSuffix,
                                                          cfg.target_language));
        }
        train.insert(train.end(), art.revealed.begin(), art.revealed.end());
        art.selection = std::move(sel);
        art.train = train;
        art.snapshot = detail::snapshot_of(q, art.revealed.size(), labeled.size(), train);
        out.push_back(std::move(art));
    }
    return out;
}

inline std::vector<RoundArtifact> al_msp_run(AlConfig cfg, const SimulationInputs& in) {
    cfg.mode = SimMode::AlMsp;
    return run_simulation(cfg, in);
}

inline std::vector<RoundArtifact> hat_run(AlConfig cfg, const SimulationInputs& in) {
    cfg.mode = SimMode::Hat;
    return run_simulation(cfg, in);
}

/// Writes run.json and round_<q>/{selection.jsonl, train.jsonl, summary.json}
/// under `dir`, each file atomically.
inline void write_artifacts(const AlConfig& cfg, const std::vector<RoundArtifact>& rounds,
                            const std::filesystem::path& dir, const std::string& command = "simulate") {
    auto header = run_header(cfg.seed, config_hash(cfg), command);
    header["mode"] = mode_name(cfg.mode);
    header["method"] = cfg.acquisition.method;
    header["rounds"] = rounds.empty() ? 0 : rounds.size() - 1;
    io::write_atomic(dir / "run.json", header.dump(2) + "\n");
    for (const auto& r : rounds) {
        const auto sub = dir / ("round_" + std::to_string(r.round));
        io::write_atomic(sub / "selection.jsonl", io::to_jsonl(acquisition::manifest_rows(r.selection, r.round)));
        io::write_atomic(sub / "train.jsonl", examples_to_jsonl(r.train));
        io::write_atomic(sub / "summary.json", r.snapshot.dump(2) + "\n");
    }
}

/// One full run per (alpha, beta) cell with LFS-LC-D, for external tuning.
struct GridCell {
    double alpha = 0, beta = 0;
    std::string label;
    std::vector<RoundArtifact> rounds;
};

inline std::vector<GridCell> grid_run(const AlConfig& cfg, const SimulationInputs& in, const std::vector<double>& alphas,
                                      const std::vector<double>& betas) {
    std::vector<GridCell> out;
    for (double a : alphas) {
        for (double b : betas) {
            AlConfig c = cfg;
            c.acquisition.method = "lfs-lc-d";
            c.acquisition.lfs = {a, b};
            GridCell cell{a, b, "alpha_" + detail::fmt_double(a) + "_beta_" + detail::fmt_double(b), {}};
            cell.rounds = run_simulation(c, in);
            out.push_back(std::move(cell));
        }
    }
    return out;
}

}  // namespace lrsp::harness
