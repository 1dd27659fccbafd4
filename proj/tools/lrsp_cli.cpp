// Command-line front end. Exit codes: 0 ok, 1 data error, 2 usage error.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include "lrsp/lrsp.hpp"

namespace fs = std::filesystem;
using namespace lrsp;

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

/// Writes `<out>.meta.json` next to a file output.
void write_meta(const fs::path& out, const io::Json& header) {
    auto meta = out;
    meta += ".meta.json";
    io::write_atomic(meta, header.dump(2) + "\n");
}

io::Json header_for(CLI::App& sub, std::uint64_t seed) {
    return harness::run_header(seed, text::hex64(text::fnv1a64(sub.config_to_str(true, false))), sub.get_name());
}

std::vector<metrics::Tokens> utterances_of(const std::vector<Example>& rows) {
    std::vector<metrics::Tokens> out;
    for (const auto& r : rows) out.push_back(r.utterance);
    return out;
}

std::set<std::string> read_id_list(const fs::path& path) {
    std::set<std::string> out;
    for (const auto& line : io::read_lines(path)) {
        const auto t = text::trim(line);
        if (!t.empty()) out.insert(std::string(t));
    }
    return out;
}

void print_report(const std::vector<std::pair<std::string, double>>& rows, const std::string& format) {
    if (format == "json") {
        io::Json j = io::Json::object();
        for (const auto& [k, v] : rows) j[k] = v;
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& [k, v] : rows) std::cout << k << " = " << harness::detail::fmt_double(v) << "\n";
    }
}

// ------------------------------------------------------------------ generate

struct GenerateOpts {
    fs::path grammar, out, typing;
    std::size_t depth = scfg::kDefaultDepthCap;
    std::size_t sample = 0;
    std::string bind = "abstract";
    std::size_t bind_k = 1;
    std::size_t uat = 0;
    std::uint64_t seed = 0;
    std::string prefix = "syn";
    std::string language = "en";
};

int run_generate(CLI::App& sub, const GenerateOpts& o) {
    const auto g = scfg::load_grammar(o.grammar);
    std::vector<scfg::Pair> pairs;
    if (o.sample > 0) {
        for (auto& d : scfg::derive_sample(g, o.sample, o.seed, o.depth)) pairs.push_back(std::move(d.yield));
    } else {
        for (auto& d : scfg::derive_exhaustive(g, o.depth)) pairs.push_back(std::move(d.yield));
    }
    scfg::BindOptions bo;
    bo.mode = o.bind == "all" ? scfg::BindMode::All
                              : (o.bind == "sample" ? scfg::BindMode::Sample : scfg::BindMode::AbstractOnly);
    bo.k = o.bind_k;
    std::vector<scfg::Pair> bound;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        bo.seed = o.seed + i;
        for (auto& p : scfg::bind_variables(pairs[i], g, bo)) bound.push_back(std::move(p));
    }
    auto rows = scfg::to_examples(bound, o.prefix, o.language);
    if (o.uat > 0) {
        const auto typing = o.typing.empty() ? g.typing_rules() : lf::TypingRules::load(o.typing);
        rows = scfg::uat_subsample(rows, o.uat, o.seed, typing);
    }
    io::write_atomic(o.out, examples_to_jsonl(rows));
    auto h = header_for(sub, o.seed);
    h["rows"] = rows.size();
    write_meta(o.out, h);
    std::cerr << "generated " << rows.size() << " examples\n";
    return 0;
}

// ------------------------------------------------------------------ normalize

struct NormalizeOpts {
    fs::path in, out, dict, typing;
    std::size_t min_support = lf::kDefaultMinSupport;
};

int run_normalize(CLI::App& sub, const NormalizeOpts& o) {
    const auto rows = load_examples(o.in);
    const auto typing = o.typing.empty() ? lf::TypingRules{} : lf::TypingRules::load(o.typing);
    std::vector<lf::Template> templates;
    for (const auto& r : rows) templates.push_back(lf::anonymize(r.lf, typing));
    const auto norm = lf::normalize_templates(templates, o.min_support);
    std::vector<io::Json> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.push_back(io::Json{{"id", rows[i].id},
                               {"template", lf::serialize(templates[i].lf)},
                               {"normalized", lf::serialize(norm.corpus[i].lf)}});
    }
    io::write_atomic(o.out, io::to_jsonl(out));
    if (!o.dict.empty()) {
        std::vector<io::Json> d;
        for (const auto& [tok, pat] : norm.dictionary.units()) d.push_back(io::Json{{"unit", tok}, {"pattern", pat.str()}});
        io::write_atomic(o.dict, io::to_jsonl(d));
    }
    auto h = header_for(sub, 0);
    h["idioms"] = norm.dictionary.size();
    write_meta(o.out, h);
    std::cerr << "normalized " << rows.size() << " templates with " << norm.dictionary.size() << " idioms\n";
    return 0;
}

// ------------------------------------------------------------------ select

struct SelectOpts {
    fs::path pool, out, labeled, scores, embeddings, mt, ht;
    std::string method = "lfs-lc-d";
    std::string preset;
    std::optional<double> alpha, beta;
    std::size_t k = 0;
    std::size_t neighbors = acquisition::kDefaultDensityNeighbors;
    double bandwidth = features::kDefaultBandwidth;
    std::size_t round = 1;
    std::uint64_t seed = 0;
};

int run_select(CLI::App& sub, const SelectOpts& o) {
    harness::AcquisitionConfig acq;
    acq.method = o.method;
    if (o.preset == "nlmap") acq.lfs = acquisition::kNlmapPreset;
    if (o.alpha) acq.lfs.alpha = *o.alpha;
    if (o.beta) acq.lfs.beta = *o.beta;
    acq.neighbors = o.neighbors;
    acq.bandwidth = o.bandwidth;

    const auto pool = load_examples(o.pool);
    const auto labeled = o.labeled.empty() ? std::set<std::string>{} : read_id_list(o.labeled);
    std::optional<acquisition::ScoreTable> scores;
    std::optional<features::EmbeddingTable> emb;
    if (!o.scores.empty()) scores = acquisition::ScoreTable::load(o.scores);
    if (!o.embeddings.empty()) emb = features::EmbeddingTable::load(o.embeddings);
    acquisition::EmpiricalTranslationModel model;
    const auto index = acquisition::index_by_id(pool);
    auto add_rows = [&](const fs::path& path, const std::string& suffix) {
        if (path.empty()) return;
        for (const auto& [id, utt] : harness::load_translations(path)) {
            auto it = index.find(id);
            if (it == index.end()) throw Error(Errc::MissingTranslation, "translation for unknown id " + id);
            model.add_translation(pool[it->second].lf, {id + suffix, utt});
        }
    };
    add_rows(o.mt, harness::kMtSuffix);
    add_rows(o.ht, harness::kHtSuffix);

    harness::SelectionContext ctx{scores ? &*scores : nullptr, emb ? &*emb : nullptr, &model};
    const auto sel = harness::select_examples(acq, pool, labeled, o.k, o.seed, ctx);
    io::write_atomic(o.out, io::to_jsonl(acquisition::manifest_rows(sel, o.round)));
    write_meta(o.out, header_for(sub, o.seed));
    std::cerr << "selected " << sel.picks.size() << " of " << pool.size() - labeled.size() << " unlabeled\n";
    return 0;
}

// ------------------------------------------------------------------ sample-memory

struct MemoryOpts {
    fs::path data, out, typing, embeddings, scores;
    std::string method = "dlfs";
    std::size_t capacity = 0;
    std::optional<std::size_t> action_subset;
    std::size_t max_sweeps = memory::kDefaultMaxSweeps;
    std::string task = "task";
    std::uint64_t seed = 0;
};

int run_memory(CLI::App& sub, const MemoryOpts& o) {
    const auto rows = load_examples(o.data);
    std::vector<std::string> ids;
    for (const auto& r : rows) ids.push_back(r.id);
    const auto typing = o.typing.empty() ? lf::TypingRules{} : lf::TypingRules::load(o.typing);
    auto h = header_for(sub, o.seed);
    std::optional<memory::MemoryBuffer> buf;
    if (o.method == "dlfs") {
        memory::DlfsOptions opt;
        opt.capacity = o.capacity;
        opt.seed = o.seed;
        opt.action_subset = o.action_subset;
        opt.max_sweeps = o.max_sweeps;
        auto res = memory::dlfs_sample(rows, typing, opt);
        h["sweeps"] = res.sweeps;
        h["entropy"] = res.entropy_trace.empty() ? 0.0 : res.entropy_trace.back();
        buf = std::move(res.buffer);
    } else {
        static const std::map<std::string, memory::MemoryBaseline> names{{"random", memory::MemoryBaseline::Random},
                                                                         {"fss", memory::MemoryBaseline::Fss},
                                                                         {"lfs", memory::MemoryBaseline::Lfs},
                                                                         {"balance", memory::MemoryBaseline::Balance},
                                                                         {"prior", memory::MemoryBaseline::Prior}};
        std::optional<features::EmbeddingTable> emb;
        std::optional<acquisition::ScoreTable> scores;
        if (!o.embeddings.empty()) emb = features::EmbeddingTable::load(o.embeddings);
        if (!o.scores.empty()) scores = acquisition::ScoreTable::load(o.scores);
        memory::MemoryInputs in;
        in.embeddings = emb ? &*emb : nullptr;
        in.scores = scores ? &*scores : nullptr;
        in.typing = &typing;
        buf = memory::baseline_memory(names.at(o.method), rows, o.capacity, o.seed, in);
        h["entropy"] = buf->entropy();
    }
    io::write_atomic(o.out, io::to_jsonl(memory::memory_manifest(*buf, ids, o.task)));
    write_meta(o.out, h);
    std::cerr << "memory of " << buf->size() << " with action entropy " << h["entropy"].get<double>() << "\n";
    return 0;
}

// ------------------------------------------------------------------ evaluate

struct EvaluateOpts {
    std::string metric;
    fs::path pred, gold, data, ref;
    std::size_t n = 4;
    std::string format = "text";
};

int run_evaluate(CLI::App&, const EvaluateOpts& o) {
    std::vector<std::pair<std::string, double>> report;
    const auto& m = o.metric;
    if (m == "exact" || m == "set" || m == "component" || m == "bleu") {
        if (o.pred.empty() || o.gold.empty()) throw Error(Errc::InvalidConfig, m + " needs --pred and --gold");
        const auto preds = metrics::load_predictions(o.pred);
        const auto golds = harness::load_paraphrases(o.gold);
        std::vector<std::string> p, g;
        for (const auto& row : golds) {
            auto it = preds.find(row.id);
            if (it == preds.end()) throw Error(Errc::MissingPrediction, "no prediction for " + row.id);
            p.push_back(it->second);
            g.push_back(row.gold);
        }
        if (g.empty()) throw Error(Errc::EmptyCorpus, "gold file is empty");
        const double n = static_cast<double>(g.size());
        if (m == "exact") {
            double hit = 0;
            for (std::size_t i = 0; i < g.size(); ++i) hit += metrics::exact_match(p[i], g[i]);
            report = {{"exact_match", 100 * hit / n}, {"examples", n}};
        } else if (m == "set") {
            double hit = 0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                try {
                    hit += metrics::set_match(p[i], g[i]);
                } catch (const Error& e) {
                    if (e.code() != Errc::SqlParseError) throw;
                }
            }
            report = {{"set_match", 100 * hit / n}, {"examples", n}};
        } else if (m == "component") {
            const auto f = metrics::component_f1(p, g);
            for (auto c : metrics::kClauses) report.emplace_back("f1_" + metrics::clause_name(c), f.per_clause.at(c));
            report.emplace_back("f1_macro", f.macro);
        } else {
            std::vector<metrics::Tokens> cands;
            std::vector<std::vector<metrics::Tokens>> refs;
            for (std::size_t i = 0; i < g.size(); ++i) {
                cands.push_back(text::split_ws(p[i]));
                refs.push_back({text::split_ws(g[i])});
            }
            report = {{"bleu_" + std::to_string(o.n), metrics::corpus_bleu(cands, refs, o.n)}};
        }
    } else {
        if (o.data.empty()) throw Error(Errc::InvalidConfig, m + " needs --data");
        const auto corpus = utterances_of(load_examples(o.data));
        metrics::Tokens stream;
        for (const auto& s : corpus) stream.insert(stream.end(), s.begin(), s.end());
        if (m == "self-bleu") report = {{"self_bleu_" + std::to_string(o.n), metrics::self_bleu(corpus, o.n)}};
        else if (m == "mtld") report = {{"mtld", metrics::mtld(stream)}};
        else if (m == "ttr") report = {{"ttr", metrics::ttr(stream)}};
        else {
            if (o.ref.empty()) throw Error(Errc::InvalidConfig, "js needs --ref");
            const auto other = utterances_of(load_examples(o.ref));
            report = {{"js_" + std::to_string(o.n),
                       metrics::js_divergence(metrics::ngram_profile(corpus, o.n), metrics::ngram_profile(other, o.n))}};
        }
    }
    print_report(report, o.format);
    return 0;
}

// ------------------------------------------------------------------ simulate

struct SimulateOpts {
    fs::path config, out;
    std::string mode;
    std::optional<std::uint64_t> seed;
    std::vector<double> grid_alpha, grid_beta;
};

int run_simulate(CLI::App&, const SimulateOpts& o) {
    auto cfg = harness::load_config(o.config);
    if (o.mode == "hat") cfg.mode = harness::SimMode::Hat;
    if (o.mode == "al") cfg.mode = harness::SimMode::AlMsp;
    if (o.seed) cfg.seed = *o.seed;
    if (!o.out.empty()) cfg.output = o.out;
    cfg.validate();
    const auto in = harness::load_inputs(cfg);
    if (!o.grid_alpha.empty() || !o.grid_beta.empty()) {
        const auto alphas = o.grid_alpha.empty() ? std::vector<double>{cfg.acquisition.lfs.alpha} : o.grid_alpha;
        const auto betas = o.grid_beta.empty() ? std::vector<double>{cfg.acquisition.lfs.beta} : o.grid_beta;
        for (const auto& cell : harness::grid_run(cfg, in, alphas, betas)) {
            auto c = cfg;
            c.acquisition.method = "lfs-lc-d";
            c.acquisition.lfs = {cell.alpha, cell.beta};
            harness::write_artifacts(c, cell.rounds, cfg.output / "grid" / cell.label, "simulate");
            std::cerr << cell.label << ": " << cell.rounds.back().snapshot.dump() << "\n";
        }
        return 0;
    }
    const auto rounds = harness::run_simulation(cfg, in);
    harness::write_artifacts(cfg, rounds, cfg.output, "simulate");
    for (const auto& r : rounds) std::cout << r.snapshot.dump() << "\n";
    return 0;
}

// ------------------------------------------------------------------ filter-paraphrases

struct FilterOpts {
    fs::path paraphrases, pred, out;
    std::string match = "set";
};

int run_filter(CLI::App& sub, const FilterOpts& o) {
    const auto rows = harness::load_paraphrases(o.paraphrases);
    const auto preds = metrics::load_predictions(o.pred);
    const auto res =
        harness::paraphrase_filter(rows, preds, o.match == "exact" ? harness::MatchMode::Exact : harness::MatchMode::Set);
    const auto table = harness::retention_table(res);
    std::cout << table;
    if (!o.out.empty()) {
        const std::set<std::string> kept(res.kept.begin(), res.kept.end());
        std::vector<io::Json> k, d;
        for (const auto& r : rows) {
            io::Json j{{"id", r.id}, {"utterance", r.utterance}, {"gold", r.gold}, {"round", r.round}};
            (kept.count(r.id) ? k : d).push_back(std::move(j));
        }
        io::write_atomic(o.out / "kept.jsonl", io::to_jsonl(k));
        io::write_atomic(o.out / "discarded.jsonl", io::to_jsonl(d));
        io::write_atomic(o.out / "retention.txt", table);
        io::write_atomic(o.out / "run.json", header_for(sub, 0).dump(2) + "\n");
    }
    return 0;
}

// ------------------------------------------------------------------ align-priors

struct AlignOpts {
    fs::path data, out;
    double gamma = 0.5;
};

int run_align(CLI::App& sub, const AlignOpts& o) {
    const auto p = harness::alignment_priors(load_examples(o.data), o.gamma);
    io::write_atomic(o.out, io::to_jsonl(harness::alignment_rows(p)));
    write_meta(o.out, header_for(sub, 0));
    std::cerr << p.rows.size() << " actions over " << p.vocabulary.size() << " tokens\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Data-side toolkit for low-resource semantic parsing"};
    app.require_subcommand(1);
    app.set_version_flag("--version", LRSP_VERSION);
    int rc = 0;

    GenerateOpts gen;
    auto* g = app.add_subcommand("generate", "Derive utterance/LF pairs from a synchronous grammar");
    g->add_option("--grammar", gen.grammar, "Grammar file")->required()->check(CLI::ExistingFile);
    g->add_option("--out", gen.out, "Output JSON-lines dataset")->required();
    g->add_option("--depth", gen.depth, "Derivation depth cap")->check(CLI::PositiveNumber);
    g->add_option("--sample", gen.sample, "Draw this many derivations instead of enumerating");
    g->add_option("--bind", gen.bind, "Variable binding")->check(CLI::IsMember({"all", "sample", "abstract"}));
    g->add_option("--bind-k", gen.bind_k, "Bindings per pair in sample mode");
    g->add_option("--uat", gen.uat, "Template-balanced subsample size");
    g->add_option("--typing", gen.typing, "Typing rules for template grouping")->check(CLI::ExistingFile);
    g->add_option("--seed", gen.seed);
    g->add_option("--prefix", gen.prefix, "Example id prefix");
    g->add_option("--language", gen.language);
    g->callback([&] { rc = run_generate(*g, gen); });

    NormalizeOpts norm;
    auto* n = app.add_subcommand("normalize", "Anonymize LFs and collapse frequent subtrees");
    n->add_option("--in", norm.in, "Input dataset")->required()->check(CLI::ExistingFile);
    n->add_option("--out", norm.out, "Output templates")->required();
    n->add_option("--dict", norm.dict, "Output idiom dictionary");
    n->add_option("--typing", norm.typing, "Typing rules")->check(CLI::ExistingFile);
    n->add_option("--min-support", norm.min_support, "Minimum document support")->check(CLI::Range(2, 1 << 30));
    n->callback([&] { rc = run_normalize(*n, norm); });

    SelectOpts sel;
    auto* s = app.add_subcommand("select", "Rank the unlabeled pool and emit a selection manifest");
    s->add_option("--pool", sel.pool, "Pool dataset")->required()->check(CLI::ExistingFile);
    s->add_option("--k", sel.k, "Number of examples to select")->required();
    s->add_option("--out", sel.out, "Output manifest")->required();
    s->add_option("--method", sel.method)->check(CLI::IsMember(harness::known_methods()));
    s->add_option("--preset", sel.preset)->check(CLI::IsMember({"geoquery", "nlmap"}));
    s->add_option("--alpha", sel.alpha)->check(CLI::NonNegativeNumber);
    s->add_option("--beta", sel.beta)->check(CLI::Range(0.0, 1.0));
    s->add_option("--labeled", sel.labeled, "Already labeled ids, one per line")->check(CLI::ExistingFile);
    s->add_option("--scores", sel.scores)->check(CLI::ExistingFile);
    s->add_option("--embeddings", sel.embeddings)->check(CLI::ExistingFile);
    s->add_option("--mt", sel.mt, "Machine translations")->check(CLI::ExistingFile);
    s->add_option("--ht", sel.ht, "Human translations already collected")->check(CLI::ExistingFile);
    s->add_option("--neighbors", sel.neighbors)->check(CLI::PositiveNumber);
    s->add_option("--bandwidth", sel.bandwidth)->check(CLI::PositiveNumber);
    s->add_option("--round", sel.round);
    s->add_option("--seed", sel.seed);
    s->callback([&] { rc = run_select(*s, sel); });

    MemoryOpts mem;
    auto* m = app.add_subcommand("sample-memory", "Sample a replay memory from a task's data");
    m->add_option("--data", mem.data)->required()->check(CLI::ExistingFile);
    m->add_option("--capacity", mem.capacity)->required()->check(CLI::PositiveNumber);
    m->add_option("--out", mem.out)->required();
    m->add_option("--method", mem.method)->check(CLI::IsMember({"dlfs", "random", "fss", "lfs", "balance", "prior"}));
    m->add_option("--typing", mem.typing)->check(CLI::ExistingFile);
    m->add_option("--embeddings", mem.embeddings)->check(CLI::ExistingFile);
    m->add_option("--scores", mem.scores)->check(CLI::ExistingFile);
    m->add_option("--action-subset", mem.action_subset)->check(CLI::PositiveNumber);
    m->add_option("--max-sweeps", mem.max_sweeps)->check(CLI::PositiveNumber);
    m->add_option("--task", mem.task);
    m->add_option("--seed", mem.seed);
    m->callback([&] { rc = run_memory(*m, mem); });

    EvaluateOpts ev;
    auto* e = app.add_subcommand("evaluate", "Score predictions or measure dataset diversity");
    e->add_option("--metric", ev.metric)
        ->required()
        ->check(CLI::IsMember({"exact", "set", "component", "bleu", "self-bleu", "mtld", "ttr", "js"}));
    e->add_option("--pred", ev.pred, "Predictions {id, pred}")->check(CLI::ExistingFile);
    e->add_option("--gold", ev.gold, "Gold rows {id, gold|lf}")->check(CLI::ExistingFile);
    e->add_option("--data", ev.data, "Dataset for diversity metrics")->check(CLI::ExistingFile);
    e->add_option("--ref", ev.ref, "Second dataset for js")->check(CLI::ExistingFile);
    e->add_option("--n", ev.n, "n-gram order")->check(CLI::PositiveNumber);
    e->add_option("--format", ev.format)->check(CLI::IsMember({"text", "json"}));
    e->callback([&] { rc = run_evaluate(*e, ev); });

    SimulateOpts sim;
    auto* r = app.add_subcommand("simulate", "Replay the annotation loop from a config file");
    r->add_option("--config", sim.config)->required()->check(CLI::ExistingFile);
    r->add_option("--mode", sim.mode)->check(CLI::IsMember({"al", "hat"}));
    r->add_option("--out", sim.out, "Output directory");
    r->add_option("--seed", sim.seed);
    r->add_option("--grid-alpha", sim.grid_alpha, "Alpha values for a tuning grid")->delimiter(',');
    r->add_option("--grid-beta", sim.grid_beta, "Beta values for a tuning grid")->delimiter(',');
    r->callback([&] { rc = run_simulate(*r, sim); });

    FilterOpts fil;
    auto* f = app.add_subcommand("filter-paraphrases", "Keep paraphrases whose parse still matches the gold query");
    f->add_option("--paraphrases", fil.paraphrases)->required()->check(CLI::ExistingFile);
    f->add_option("--pred", fil.pred)->required()->check(CLI::ExistingFile);
    f->add_option("--match", fil.match)->check(CLI::IsMember({"exact", "set"}));
    f->add_option("--out", fil.out, "Output directory");
    f->callback([&] { rc = run_filter(*f, fil); });

    AlignOpts al;
    auto* a = app.add_subcommand("align-priors", "Token distributions per LF predicate");
    a->add_option("--data", al.data)->required()->check(CLI::ExistingFile);
    a->add_option("--out", al.out)->required();
    a->add_option("--gamma", al.gamma, "Weight of co-occurrence against character similarity")
        ->check(CLI::Range(0.0, 1.0));
    a->callback([&] { rc = run_align(*a, al); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : kExitUsage;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return err.code() == Errc::InvalidConfig ? kExitUsage : kExitData;
    } catch (const fs::filesystem_error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitData;
    }
    return rc;
}
