#include <gtest/gtest.h>

#include <filesystem>
#include <numeric>

#include "lrsp/harness/alignment.hpp"
#include "lrsp/harness/config.hpp"
#include "lrsp/harness/paraphrase.hpp"
#include "lrsp/harness/simulate.hpp"
#include "sim_fixture.hpp"

using namespace lrsp;
using namespace lrsp::harness;

namespace {

template <typename F>
void expect_code(Errc code, F&& f) {
    try {
        f();
        ADD_FAILURE() << "expected " << errc_name(code);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

std::set<std::string> ids_of(const std::vector<Example>& rows) {
    std::set<std::string> s;
    for (const auto& r : rows) s.insert(r.id);
    return s;
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("lrsp_harness_" + name);
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST(Budget, PresetsOnPoolSizes) {
    EXPECT_EQ(cumulative_budgets(kAlMspSchedule, 600), (std::vector<std::size_t>{6, 12, 24, 48, 96, 192}));
    EXPECT_EQ(round_budgets(kAlMspSchedule, 600), (std::vector<std::size_t>{6, 6, 12, 24, 48, 96}));
    EXPECT_EQ(cumulative_budgets(kHatSchedule, 1500), (std::vector<std::size_t>{15, 30, 60, 120, 240}));
    EXPECT_EQ(cumulative_budgets({BudgetKind::Percent, {0.1, 50}}, 100), (std::vector<std::size_t>{1, 50}));
    EXPECT_EQ(cumulative_budgets({BudgetKind::Absolute, {3, 5}}, 10), (std::vector<std::size_t>{3, 5}));
}

TEST(Budget, InvalidSchedules) {
    expect_code(Errc::InvalidConfig, [] { cumulative_budgets({BudgetKind::Percent, {1, 2}}, 10); });  // 1 then 1
    expect_code(Errc::InvalidConfig, [] { cumulative_budgets({BudgetKind::Absolute, {3, 11}}, 10); });
    expect_code(Errc::InvalidConfig, [] { cumulative_budgets({BudgetKind::Absolute, {0}}, 10); });
    expect_code(Errc::InvalidConfig, [] { cumulative_budgets({BudgetKind::Absolute, {1.5}}, 10); });
}

TEST(Config, ParsesAndResolvesPaths) {
    const auto c = parse_config(R"(
[run]
mode = al
seed = 42
output = runs/a
target_language = de
[acquisition]
method = lfs-lc-d
preset = nlmap
[data]
pool = pool.jsonl
oracle = /abs/ht.jsonl
)",
                                "/base");
    EXPECT_EQ(c.mode, SimMode::AlMsp);
    EXPECT_EQ(c.seed, 42u);
    EXPECT_EQ(c.round_count(), 6u);  // al mode defaults to the six-round schedule
    EXPECT_EQ(c.output, std::filesystem::path("/base/runs/a"));
    EXPECT_EQ(c.data.pool, std::filesystem::path("/base/pool.jsonl"));
    EXPECT_EQ(c.data.oracle, std::filesystem::path("/abs/ht.jsonl"));
    EXPECT_DOUBLE_EQ(c.acquisition.lfs.alpha, 0.25);
    EXPECT_DOUBLE_EQ(c.acquisition.lfs.beta, 0.75);
    EXPECT_EQ(c.target_language, "de");
}

TEST(Config, DefaultsToHatSchedule) {
    const auto c = parse_config("[data]\npool = p\noracle = o\nmt = m\n");
    EXPECT_EQ(c.mode, SimMode::Hat);
    EXPECT_EQ(c.budget.cumulative, kHatSchedule.cumulative);
}

TEST(Config, RejectsBadInput) {
    const std::string data = "[data]\npool = p\noracle = o\nmt = m\n";
    expect_code(Errc::InvalidConfig, [&] { parse_config(data + "[run]\nbogus = 1\n"); });
    expect_code(Errc::InvalidConfig, [&] { parse_config(data + "[extra]\nx = 1\n"); });
    expect_code(Errc::InvalidConfig, [&] { parse_config(data + "[acquisition]\nmethod = magic\n"); });
    expect_code(Errc::InvalidConfig, [&] { parse_config(data + "[acquisition]\nbeta = 2\n"); });
    expect_code(Errc::InvalidConfig, [&] { parse_config(data + "[run]\nseed = -3\n"); });
    expect_code(Errc::InvalidConfig, [&] { parse_config(data + "[run]\nrounds = 9\n"); });
    expect_code(Errc::InvalidConfig, [&] { parse_config("[data]\npool = p\noracle = o\n"); });  // hat without mt
    expect_code(Errc::InvalidConfig, [&] { parse_config("[run\n"); });
}

TEST(Config, HashTracksSettings) {
    auto a = testing_util::sim_config(SimMode::Hat, "random", 1);
    auto b = a;
    EXPECT_EQ(config_hash(a), config_hash(b));
    b.seed = 2;
    EXPECT_NE(config_hash(a), config_hash(b));
    b = a;
    b.data.pool = "/elsewhere/pool.jsonl";
    EXPECT_EQ(config_hash(a), config_hash(b));
}

TEST(Simulation, ZeroRoundsGivesSourceManifest) {
    Rng rng(1);
    const auto in = testing_util::random_sim_inputs(rng, 100);
    auto cfg = testing_util::sim_config(SimMode::AlMsp, "random", 1);
    cfg.rounds = 0;
    const auto out = run_simulation(cfg, in);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].train, in.pool);
}

TEST(Simulation, PoolExclusionAndScheduleOverSeeds) {
    Rng rng(2);
    const auto in = testing_util::random_sim_inputs(rng, 600);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto out = al_msp_run(testing_util::sim_config(SimMode::AlMsp, "random", seed), in);
        ASSERT_EQ(out.size(), 7u);
        std::set<std::string> seen;
        const std::vector<std::size_t> expected{6, 12, 24, 48, 96, 192};
        for (std::size_t q = 1; q < out.size(); ++q) {
            for (const auto& id : out[q].selection.ids()) EXPECT_TRUE(seen.insert(id).second) << id;
            EXPECT_EQ(seen.size(), expected[q - 1]);
            EXPECT_EQ(out[q].train.size(), in.pool.size() + seen.size());
        }
    }
}

TEST(Simulation, HatKeepsMachineRowsAndAddsHumanRows) {
    Rng rng(3);
    const auto in = testing_util::random_sim_inputs(rng, 200);
    for (const std::string method : {"random", "lfs-lc-d", "abe", "abe-nbest", "abe-max", "cluster", "max-compound", "csse",
                                      "traffic", "lcs-bw", "lcs-fw", "nbest-entropy"}) {
        const auto out = hat_run(testing_util::sim_config(SimMode::Hat, method, 5), in);
        ASSERT_EQ(out.size(), 6u) << method;
        EXPECT_EQ(out[0].train.size(), 2 * in.pool.size());
        const auto base = ids_of(out[0].train);
        for (const auto& ex : in.pool) EXPECT_TRUE(base.count(ex.id + kMtSuffix));
        for (std::size_t q = 1; q < out.size(); ++q) {
            const auto now = ids_of(out[q].train);
            EXPECT_TRUE(std::includes(now.begin(), now.end(), base.begin(), base.end())) << method;
            const auto prev = ids_of(out[q - 1].train);
            EXPECT_TRUE(std::includes(now.begin(), now.end(), prev.begin(), prev.end())) << method;
        }
        const auto final_ids = ids_of(out.back().train);
        std::size_t ht = 0;
        for (const auto& r : out) {
            for (const auto& id : r.selection.ids()) {
                EXPECT_TRUE(final_ids.count(id + kMtSuffix));
                EXPECT_TRUE(final_ids.count(id + kHtSuffix));
                ++ht;
            }
        }
        EXPECT_EQ(ht, 32u) << method;  // 16% of 200
        EXPECT_EQ(out.back().snapshot["ht_rows"], 32);
    }
}

TEST(Simulation, RevealedRowsCarryOracleText) {
    Rng rng(4);
    const auto in = testing_util::random_sim_inputs(rng, 100);
    const auto out = hat_run(testing_util::sim_config(SimMode::Hat, "random", 9), in);
    for (const auto& ex : out[1].revealed) {
        const auto src = ex.meta.at("source_id");
        EXPECT_EQ(ex.utterance_text(), in.oracle.at(src));
        EXPECT_EQ(ex.id, src + kHtSuffix);
    }
}

TEST(Simulation, MissingTranslations) {
    Rng rng(5);
    auto in = testing_util::random_sim_inputs(rng, 100);
    auto bad_mt = in;
    bad_mt.mt->erase(bad_mt.pool[3].id);
    expect_code(Errc::MissingMachineTranslation,
                [&] { hat_run(testing_util::sim_config(SimMode::Hat, "random", 1), bad_mt); });
    auto bad_ht = in;
    bad_ht.oracle.clear();
    expect_code(Errc::MissingTranslation,
                [&] { al_msp_run(testing_util::sim_config(SimMode::AlMsp, "random", 1), bad_ht); });
    auto no_scores = in;
    no_scores.scores.reset();
    expect_code(Errc::MissingScore,
                [&] { al_msp_run(testing_util::sim_config(SimMode::AlMsp, "lcs-fw", 1), no_scores); });
}

TEST(Simulation, RerunsAreByteIdentical) {
    Rng rng(6);
    const auto in = testing_util::random_sim_inputs(rng, 150);
    const auto cfg = testing_util::sim_config(SimMode::Hat, "lfs-lc-d", 77);
    const auto a = scratch("a"), b = scratch("b");
    write_artifacts(cfg, run_simulation(cfg, in), a);
    write_artifacts(cfg, run_simulation(cfg, in), b);
    std::size_t files = 0;
    for (const auto& e : std::filesystem::recursive_directory_iterator(a)) {
        if (!e.is_regular_file()) continue;
        const auto rel = std::filesystem::relative(e.path(), a);
        EXPECT_EQ(io::read_file(e.path()), io::read_file(b / rel)) << rel;
        ++files;
    }
    EXPECT_EQ(files, 1u + 6u * 3u);
    const auto header = io::Json::parse(io::read_file(a / "run.json"));
    EXPECT_EQ(header["seed"], 77);
    EXPECT_EQ(header["config_hash"], config_hash(cfg));
    const auto sel = io::read_jsonl(a / "round_2" / "selection.jsonl");
    EXPECT_EQ(sel.size(), 1u);  // lround(1.5) = 2 rows, then 3 rows cumulative
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
}

TEST(Simulation, GridEmitsOneRunPerCell) {
    Rng rng(7);
    const auto in = testing_util::random_sim_inputs(rng, 100);
    auto cfg = testing_util::sim_config(SimMode::AlMsp, "random", 3);
    cfg.rounds = 2;
    const auto grid = grid_run(cfg, in, {0.25, 0.75}, {0.5, 1.0});
    ASSERT_EQ(grid.size(), 4u);
    EXPECT_EQ(grid[0].label, "alpha_0.25_beta_0.5");
    for (const auto& cell : grid) {
        EXPECT_EQ(cell.rounds.size(), 3u);
        EXPECT_EQ(cell.rounds.back().selection.method, "lfs-lc-d");
    }
}

TEST(Paraphrase, RetentionExtremesAndTable) {
    const std::vector<ParaphraseRow> rows{{"p1", "u", "select a from t where x = 1 and y = 2", 1},
                                          {"p2", "u", "select b from t", 1},
                                          {"p3", "u", "select c from t", 2},
                                          {"p4", "u", "select d from t", 2}};
    std::map<std::string, std::string> all, none;
    for (const auto& r : rows) {
        all[r.id] = r.gold;
        none[r.id] = "select zzz from t";
    }
    EXPECT_DOUBLE_EQ(paraphrase_filter(rows, all, MatchMode::Exact).total.percent(), 100.0);
    EXPECT_DOUBLE_EQ(paraphrase_filter(rows, none, MatchMode::Set).total.percent(), 0.0);

    auto mixed = all;
    mixed["p1"] = "SELECT a FROM t WHERE y = 2 AND x = 1";  // set match only
    mixed["p4"] = "not sql";
    const auto exact = paraphrase_filter(rows, mixed, MatchMode::Exact);
    EXPECT_EQ(exact.kept, (std::vector<std::string>{"p2", "p3"}));
    const auto set = paraphrase_filter(rows, mixed, MatchMode::Set);
    EXPECT_EQ(set.kept, (std::vector<std::string>{"p1", "p2", "p3"}));
    EXPECT_EQ(set.discarded, (std::vector<std::string>{"p4"}));
    ASSERT_EQ(set.rounds.size(), 2u);
    EXPECT_DOUBLE_EQ(set.rounds[0].percent(), 100.0);
    EXPECT_DOUBLE_EQ(set.rounds[1].percent(), 50.0);
    EXPECT_EQ(retention_table(set),
              "#Rounds   kept/total   % kept\n"
              "Round 1       2/2      100.00\n"
              "Round 2       1/2       50.00\n"
              "Total         3/4       75.00\n");
    none.erase("p2");
    expect_code(Errc::MissingPrediction, [&] { paraphrase_filter(rows, none, MatchMode::Exact); });
}

TEST(Alignment, CharSim) {
    EXPECT_EQ(levenshtein("ask_weather", "weather"), 4u);
    EXPECT_EQ(char_sim("ask_weather", "weather"), 7.0 / 11.0);
    EXPECT_EQ(char_sim("", ""), 1.0);
    EXPECT_EQ(char_sim("abc", "abc"), 1.0);
    EXPECT_EQ(levenshtein("kitten", "sitting"), 3u);
}

TEST(Alignment, RowsAreDistributions) {
    Rng rng(8);
    const auto pool = testing_util::random_pool(rng, 60);
    for (double gamma : {0.0, 0.3, 1.0}) {
        const auto p = alignment_priors(pool, gamma);
        for (const auto& [a, row] : p.rows) {
            double sum = 0;
            for (const auto& [x, v] : row) {
                EXPECT_GE(v, 0.0);
                sum += v;
            }
            EXPECT_NEAR(sum, 1.0, 1e-12) << a;
        }
    }
}

TEST(Alignment, GammaOneIsCooccurrenceOnly) {
    std::vector<Example> corpus(3);
    corpus[0] = {"a", {"rain", "today"}, lf::parse_lf("( ask_weather today )"), "en", {}, {}};
    corpus[1] = {"b", {"rain", "tomorrow"}, lf::parse_lf("( ask_weather tomorrow )"), "en", {}, {}};
    corpus[2] = {"c", {"book", "today"}, lf::parse_lf("( book today )"), "en", {}, {}};
    const auto p = alignment_priors(corpus, 1.0);
    // P(ask_weather | x): rain 2/2, today 1/2, tomorrow 1/1, book 0/1.
    const auto& row = p.rows.at("ask_weather");
    const double z = 1.0 + 0.5 + 1.0;
    EXPECT_NEAR(row.at("rain"), 1.0 / z, 1e-15);
    EXPECT_NEAR(row.at("today"), 0.5 / z, 1e-15);
    EXPECT_NEAR(row.at("tomorrow"), 1.0 / z, 1e-15);
    EXPECT_EQ(row.at("book"), 0.0);
}

TEST(Alignment, ZeroRowFallsBackToUniform) {
    std::vector<Example> corpus(1);
    corpus[0] = {"a", {"x", "y"}, lf::parse_lf("zz"), "en", {}, {}};
    const auto p = alignment_priors(corpus, 0.0);
    EXPECT_EQ(p.rows.at("zz").at("x"), 0.5);
    EXPECT_EQ(p.rows.at("zz").at("y"), 0.5);
    expect_code(Errc::InvalidArgument, [&] { alignment_priors(corpus, 1.5); });
    expect_code(Errc::EmptyCorpus, [&] { alignment_priors({}, 0.5); });
}
