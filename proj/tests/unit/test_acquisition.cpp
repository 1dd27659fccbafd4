#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>

#include "lrsp/acquisition/abe.hpp"
#include "lrsp/acquisition/baselines.hpp"
#include "lrsp/acquisition/csse.hpp"
#include "lrsp/acquisition/lfs_lc_d.hpp"
#include "lrsp/acquisition/quantile.hpp"
#include "lrsp/acquisition/uncertainty.hpp"
#include "oracles.hpp"
#include "random_pool.hpp"

using namespace lrsp;
using namespace lrsp::acquisition;

namespace {

Example ex(const std::string& id, const std::string& utt, const std::string& lf) {
    Example e;
    e.id = id;
    e.utterance = text::split_ws(utt);
    e.lf = lf::parse_lf(lf);
    return e;
}

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return Errc::Io;
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

}  // namespace

// ---------------------------------------------------------------- quantiles

TEST(Quantile, TieGetsMeanRank) {
    const auto q = quantile_normalize(std::vector<double>{3, 1, 3, 2});
    EXPECT_DOUBLE_EQ(q[1], 0.0);
    EXPECT_DOUBLE_EQ(q[3], 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(q[0], 2.5 / 3.0);
    EXPECT_DOUBLE_EQ(q[2], 2.5 / 3.0);
}

TEST(Quantile, AllEqualAndSingleton) {
    for (double v : quantile_normalize(std::vector<double>{4, 4, 4})) EXPECT_EQ(v, 0.5);
    EXPECT_EQ(quantile_normalize(std::vector<double>{-7})[0], 0.5);
}

TEST(Quantile, GateSurvivesAndIsExcludedFromFit) {
    const auto q = quantile_normalize(std::vector<double>{1, kGated, 2});
    EXPECT_EQ(q[0], 0.0);
    EXPECT_EQ(q[1], kGated);
    EXPECT_EQ(q[2], 1.0);
}

TEST(Quantile, SpearmanOneOnDistinctInputs) {
    Rng rng(11);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> xs(2 + rng.uniform_index(30));
        for (auto& x : xs) x = rng.uniform01() * 100 - 50;
        const auto q = quantile_normalize(xs);
        EXPECT_NEAR(oracle::spearman(xs, q), 1.0, 1e-12);
        for (double v : q) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
}

TEST(Quantile, MapIsMonotoneBetweenReferences) {
    QuantileMap q(std::vector<double>{0, 10, 20});
    EXPECT_DOUBLE_EQ(q(10), 0.5);
    EXPECT_DOUBLE_EQ(q(5), 0.25);
    EXPECT_DOUBLE_EQ(q(-100), 0.0);
    EXPECT_DOUBLE_EQ(q(100), 1.0);
}

// ---------------------------------------------------------------- uncertainty

TEST(Uncertainty, LeastConfidence) {
    ScoreTable t;
    t.add("a", {.best_logprob = 0.0});
    t.add("b", {.best_logprob = -std::numeric_limits<double>::infinity()});
    t.add("c", {.best_logprob = std::log(0.25)});
    auto s = least_confidence({"a", "b", "c"}, t);
    EXPECT_EQ(s["a"], 0.0);
    EXPECT_EQ(s["b"], 1.0);
    EXPECT_NEAR(s["c"], 0.75, 1e-15);
    EXPECT_EQ(code_of([&] { least_confidence({"zz"}, t); }), Errc::MissingScore);
}

TEST(Uncertainty, NbestEntropy) {
    ScoreTable t;
    t.add("one", {.nbest = {{"y", -3.0}}});
    t.add("two", {.nbest = {{"y", -1.0}, {"z", -1.0}}});
    t.add("three", {.nbest = {{"p", std::log(0.1)}, {"q", std::log(0.2)}, {"r", std::log(0.1)}}});
    auto s = nbest_entropy({"one", "two", "three"}, t);
    EXPECT_EQ(s["one"], 0.0);
    EXPECT_NEAR(s["two"], std::log(2.0), 1e-15);
    // Renormalized to 0.5 / 0.25 / 0.25.
    EXPECT_NEAR(s["three"], 1.5 * std::log(2.0), 1e-12);
    EXPECT_EQ(t.nbest("three").front().hyp, "q");
}

TEST(ScoreTableFile, RejectsPositiveLogprob) {
    ScoreTable t;
    EXPECT_EQ(code_of([&] { t.add("a", {.best_logprob = 0.5}); }), Errc::InvalidArgument);
}

// ---------------------------------------------------------------- LFS-LC-D

TEST(Lfsd, LoneExampleSitsOnItsCentroid) {
    std::vector<Example> pool{ex("a", "u", "( f a )"), ex("b", "u", "( f a )"), ex("c", "u", "( g ( h b c ) )")};
    auto sc = fit_structure_clusters(pool, {}, 2, 3);
    auto s = lfsd_score(pool, {}, sc);
    EXPECT_EQ(s.at("c"), 0.0);
    EXPECT_EQ(s.at("a"), 0.0);
    sc.used.insert(sc.clustering.assignment[0]);
    s = lfsd_score(pool, {}, sc);
    EXPECT_EQ(s.at("b"), kGated);
}

TEST(Lcd, EntropyCases) {
    std::vector<Example> src{ex("1", "u", "f"), ex("2", "v", "f"), ex("3", "w", "g"), ex("4", "w", "g")};
    auto model = source_model(src);
    EXPECT_NEAR(model.lexical_entropy("A:f"), std::log(2.0), 1e-15);
    EXPECT_EQ(model.lexical_entropy("A:g"), 0.0);
    EXPECT_NEAR(lcd_of(lf::parse_lf("f"), model, {}, 0.75), std::log(2.0), 1e-15);
    EXPECT_EQ(lcd_of(lf::parse_lf("g"), model, {}, 0.75), 0.0);
    EXPECT_EQ(lcd_of(lf::parse_lf("f"), model, {"A:f"}, 0.0), 0.0);
    EXPECT_NEAR(lcd_of(lf::parse_lf("f"), model, {"A:f"}, 0.5), 0.5 * std::log(2.0), 1e-15);
}

TEST(Lcd, BetaOneIgnoresCoverage) {
    Rng rng(5);
    auto pool = testing_util::random_pool(rng, 30);
    auto model = source_model(pool);
    std::set<std::string> labeled{"x0001", "x0007"};
    auto covered = covered_features(pool, labeled);
    EXPECT_EQ(lcd_score(pool, labeled, model, covered, 1.0), lcd_score(pool, labeled, model, {}, 1.0));
}

TEST(LfsLcd, OnePerClusterAndDeterministic) {
    Rng rng(21);
    for (int t = 0; t < 10; ++t) {
        auto pool = testing_util::random_pool(rng, 40);
        auto model = source_model(pool);
        std::set<std::string> labeled{"x0003", "x0010"};
        auto sel = lfs_lc_d_select(pool, labeled, model, kGeoQueryPreset, 6, 100 + t);
        auto again = lfs_lc_d_select(pool, labeled, model, kGeoQueryPreset, 6, 100 + t);
        EXPECT_EQ(sel.ids(), again.ids());
        ASSERT_EQ(sel.picks.size(), 6u);
        auto round = prepare_lfs_lc_d(pool, labeled, model, kGeoQueryPreset, 6, 100 + t);
        std::set<std::size_t> clusters;
        bool all_finite = true;
        for (const auto& p : sel.picks) {
            EXPECT_FALSE(labeled.count(p.id));
            clusters.insert(round.candidates.at(p.id).cluster);
            all_finite = all_finite && std::isfinite(p.score);
        }
        if (all_finite) {
            EXPECT_EQ(clusters.size(), 6u);
            for (std::size_t c : clusters) EXPECT_FALSE(round.clusters.used.count(c));
        }
        EXPECT_EQ(as_set(sel.ids()).size(), 6u);
    }
}

TEST(LfsLcd, HugeAlphaFollowsStructureOrder) {
    Rng rng(3);
    auto pool = testing_util::random_pool(rng, 30);
    auto model = source_model(pool);
    EmpiricalTranslationModel empty;
    auto pure = lfs_lc_d_select(pool, {}, empty, {1.0, 0.75}, 5, 9);
    auto dominated = lfs_lc_d_select(pool, {}, model, {1e9, 0.75}, 5, 9);
    EXPECT_EQ(pure.ids(), dominated.ids());
}

TEST(LfsLcd, GreedyMatchesBruteForceOnToyPools) {
    Rng rng(77);
    for (int t = 0; t < 10; ++t) {
        auto pool = testing_util::random_pool(rng, 12);
        auto model = source_model(pool);
        const std::set<std::string> labeled{"x0000"};
        const std::size_t k = 3;
        const LfsLcdParams params{0.75, 1.0};
        auto round = prepare_lfs_lc_d(pool, labeled, model, params, k, t);
        auto sel = lfs_lc_d_select(pool, labeled, model, params, k, t);
        std::vector<double> score;
        std::vector<std::size_t> cluster;
        for (const auto& [id, c] : round.candidates) {
            score.push_back(params.alpha * round.structure_quantiles(c.structure) + round.lexical_quantiles(c.lexical));
            cluster.push_back(c.cluster);
        }
        const double best = oracle::best_one_per_cluster(score, cluster, round.clusters.used, k);
        double got = 0;
        for (const auto& p : sel.picks) got += p.score;
        EXPECT_NEAR(got, best, 1e-12);
    }
}

TEST(LfsLcd, BudgetChecks) {
    std::vector<Example> pool{ex("a", "u", "f"), ex("b", "v", "g")};
    EXPECT_EQ(code_of([&] { lfs_lc_d_select(pool, {"a"}, source_model(pool), {}, 2, 0); }), Errc::BudgetExceedsPool);
}

// ---------------------------------------------------------------- CSSE

TEST(Csse, IdenticalVectorsGiveUnitRatio) {
    std::vector<Example> pool;
    features::EmbeddingTable emb;
    for (int i = 0; i < 5; ++i) {
        pool.push_back(ex("p" + std::to_string(i), "u", "f"));
        emb.add(pool.back().id, {0.3, 0.4});
    }
    auto s = csse_score(pool, {"p0"}, emb, 2);
    for (const auto& [id, v] : s) EXPECT_NEAR(v, -1.0, 1e-12);
}

TEST(Csse, HandInstance) {
    // Six points on the unit circle at angles 0, 10, 20, 90, 100, 180 degrees; k = 1.
    const double deg = std::acos(-1.0) / 180.0;
    const std::vector<double> ang{0, 10, 20, 90, 100, 180};
    std::vector<Example> pool;
    features::EmbeddingTable emb;
    for (std::size_t i = 0; i < ang.size(); ++i) {
        pool.push_back(ex("p" + std::to_string(i), "u", "f"));
        emb.add(pool.back().id, {std::cos(ang[i] * deg), std::sin(ang[i] * deg)});
    }
    // Nearest-neighbor cosine of each point, halved.
    const double c10 = std::cos(10 * deg), c80 = std::cos(80 * deg);
    const std::vector<double> half{c10 / 2, c10 / 2, c10 / 2, c10 / 2, c10 / 2, std::cos(80 * deg) / 2};
    auto s = csse_score(pool, {"p0", "p3"}, emb, 1);
    auto ratio = [&](std::size_t i, std::size_t j, double cosij) { return cosij / (half[i] + half[j]); };
    EXPECT_NEAR(s.at("p1"), -std::min(ratio(1, 0, c10), ratio(1, 3, c80)), 1e-12);
    EXPECT_NEAR(s.at("p2"), -std::min(ratio(2, 0, std::cos(20 * deg)), ratio(2, 3, std::cos(70 * deg))), 1e-12);
    EXPECT_NEAR(s.at("p4"), -std::min(ratio(4, 0, std::cos(100 * deg)), ratio(4, 3, c10)), 1e-12);
    EXPECT_NEAR(s.at("p5"), -std::min(ratio(5, 0, -1.0), ratio(5, 3, 0.0)), 1e-12);
    // With nothing labeled, the score is the mean nearest-neighbor cosine.
    auto d = csse_score(pool, {}, emb, 1);
    EXPECT_NEAR(d.at("p5"), c80, 1e-12);
}

TEST(Csse, DuplicateOfLabeledScoresLowest) {
    std::vector<Example> pool;
    features::EmbeddingTable emb;
    const std::vector<features::DenseVector> v{{1, 0}, {1, 0}, {0.6, 0.8}, {0, 1}, {-0.6, 0.8}};
    for (std::size_t i = 0; i < v.size(); ++i) {
        pool.push_back(ex("p" + std::to_string(i), "u", "f"));
        emb.add(pool.back().id, v[i]);
    }
    auto s = csse_score(pool, {"p0"}, emb, 1);
    for (const auto& [id, val] : s) {
        if (id != "p1") {
            EXPECT_LT(s.at("p1"), val);
        }
    }
}

// ---------------------------------------------------------------- ABE terms

TEST(AbeBias, FactorizedEntropy) {
    EmpiricalTranslationModel m;
    m.add_translation(lf::parse_lf("( f a )"), {"r1", "eins"});
    for (int i = 0; i < 4; ++i) m.add_translation(lf::parse_lf("( g b )"), {"s" + std::to_string(i), "t" + std::to_string(i)});
    std::vector<Example> pool{ex("a1", "u", "( f a )"), ex("a2", "v", "( f a )"), ex("b1", "w", "( g b )")};
    AbeInputs in;
    in.model = &m;
    auto s = abe_bias(pool, {"a1", "a2", "b1"}, in, AbeVariant::FactorizedExact);
    EXPECT_EQ(s["a1"], 0.0);
    EXPECT_EQ(s["a1"], s["a2"]);
    EXPECT_NEAR(s["b1"], -std::log(4.0), 1e-15);
}

TEST(AbeBias, DuplicatingCorpusKeepsArgmax) {
    EmpiricalTranslationModel once, twice;
    const std::vector<std::pair<std::string, std::string>> rows{
        {"( f a )", "x"}, {"( f a )", "y"}, {"( g b )", "z"}, {"( h c )", "p"}, {"( h c )", "p"}, {"( h c )", "q"}};
    for (int copy = 0; copy < 2; ++copy) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            TranslationRow r{"r" + std::to_string(i) + "_" + std::to_string(copy), rows[i].second};
            if (copy == 0) once.add_translation(lf::parse_lf(rows[i].first), r);
            twice.add_translation(lf::parse_lf(rows[i].first), r);
        }
    }
    std::vector<Example> pool{ex("a", "u", "( f a )"), ex("b", "u", "( g b )"), ex("c", "u", "( h c )")};
    AbeInputs a, b;
    a.model = &once;
    b.model = &twice;
    EXPECT_EQ(abe_bias(pool, {"a", "b", "c"}, a, AbeVariant::FactorizedExact),
              abe_bias(pool, {"a", "b", "c"}, b, AbeVariant::FactorizedExact));
}

TEST(AbeBias, ScoreFileVariants) {
    ScoreTable t;
    t.add("a", {.nbest = {{"x", std::log(0.5)}, {"y", std::log(0.5)}}});
    std::vector<Example> pool{ex("a", "u", "f")};
    AbeInputs in;
    in.scores = &t;
    EXPECT_NEAR(abe_bias(pool, {"a"}, in, AbeVariant::Nbest)["a"], -std::log(2.0), 1e-15);
    EXPECT_NEAR(abe_bias(pool, {"a"}, in, AbeVariant::Max)["a"], std::log(0.5), 1e-15);
    AbeInputs none;
    EXPECT_EQ(code_of([&] { abe_bias(pool, {"a"}, none, AbeVariant::Nbest); }), Errc::MissingScore);
}

TEST(AbeError, Cases) {
    EmpiricalTranslationModel m;
    ScoreTable t;
    m.add_translation(lf::parse_lf("f"), {"f1", "eins"});
    t.add("f1", {.bt_parse_logprob = 0.0});
    m.add_translation(lf::parse_lf("g"), {"g1", "zwei"});
    t.add("g1", {.bt_parse_logprob = std::log(0.5)});
    m.add_translation(lf::parse_lf("h"), {"h1", "A"});
    m.add_translation(lf::parse_lf("h"), {"h2", "A"});
    m.add_translation(lf::parse_lf("h"), {"h3", "B"});
    t.add("h1", {.bt_parse_logprob = std::log(0.5)});
    t.add("h2", {.bt_parse_logprob = std::log(0.5)});
    t.add("h3", {.bt_parse_logprob = std::log(0.25)});
    std::vector<Example> pool{ex("f", "u", "f"), ex("g", "u", "g"), ex("h", "u", "h")};
    AbeInputs in;
    in.model = &m;
    in.scores = &t;
    auto nb = abe_error(pool, {"f", "g", "h"}, in, AbeVariant::Nbest);
    EXPECT_EQ(nb["f"], 0.0);
    EXPECT_NEAR(nb["g"], std::log(2.0), 1e-15);
    EXPECT_NEAR(nb["h"], 2.0 / 3.0 * std::log(2.0) + 1.0 / 3.0 * std::log(4.0), 1e-12);
    auto mx = abe_error(pool, {"h"}, in, AbeVariant::Max);
    EXPECT_NEAR(mx["h"], std::log(2.0), 1e-15);
}

TEST(AbeDiversity, Gate) {
    std::map<std::string, std::size_t> cl{{"a", 0}, {"b", 0}, {"c", 1}};
    auto s = abe_diversity({"a", "b", "c"}, cl, {0});
    EXPECT_EQ(s["a"], kGated);
    EXPECT_EQ(s["b"], kGated);
    EXPECT_EQ(s["c"], 0.0);
}

// ---------------------------------------------------------------- ABE selection

namespace {

struct AbeFixture {
    std::vector<Example> pool;
    features::EmbeddingTable emb;
    EmpiricalTranslationModel model;
    ScoreTable scores;
    AbeInputs in() const {
        AbeInputs i;
        i.model = &model;
        i.scores = &scores;
        i.embeddings = &emb;
        i.density_neighbors = 3;
        return i;
    }
};

AbeFixture one_translation_fixture(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    AbeFixture f;
    f.pool = testing_util::random_pool(rng, n);
    f.emb = testing_util::random_embeddings(rng, f.pool);
    std::set<std::string> seen;
    for (const auto& e : f.pool) {
        const auto key = lf::serialize(e.lf);
        if (!seen.insert(key).second) continue;
        f.model.add_translation(e.lf, {e.id + "/mt", "mt " + e.utterance_text()});
        f.scores.add(e.id + "/mt", {.bt_parse_logprob = -rng.uniform01() * 3});
    }
    return f;
}

}  // namespace

TEST(AbeSelect, DiversityOnlyTakesFirstFreeIdPerCluster) {
    auto f = one_translation_fixture(4, 30);
    AbeCoefficients c{0, 0, 0, 1};
    auto sel = abe_select(f.pool, {}, f.in(), c, 5, AbeVariant::FactorizedExact, 8);
    auto sc = fit_semantic_clusters(f.pool, {}, f.emb, 5, 8);
    std::set<std::size_t> used;
    for (const auto& p : sel.picks) {
        // Expected: the smallest id whose cluster is still free.
        std::string expect;
        for (const auto& e : f.pool) {
            if (!used.count(sc.cluster_of.at(e.id)) && (expect.empty() || e.id < expect)) {
                bool taken = false;
                for (const auto& q : sel.picks) {
                    if (&q == &p) break;
                    taken = taken || q.id == e.id;
                }
                if (!taken) expect = e.id;
            }
        }
        if (!expect.empty()) {
            EXPECT_EQ(p.id, expect);
        }
        used.insert(sc.cluster_of.at(p.id));
    }
}

TEST(AbeSelect, ConstantBiasLeavesRankingUnchanged) {
    auto f = one_translation_fixture(6, 50);
    AbeCoefficients four{1, 1, 1, 1}, three{0, 1, 1, 1};
    auto a = abe_select(f.pool, {"x0002"}, f.in(), four, 8, AbeVariant::FactorizedExact, 1);
    auto b = abe_select(f.pool, {"x0002"}, f.in(), three, 8, AbeVariant::FactorizedExact, 1);
    EXPECT_EQ(a.ids(), b.ids());
}

TEST(AbeSelect, HandScoredTenExamples) {
    // Bias from n-best lists, error from back-translation scores; density and diversity off.
    AbeFixture f;
    const std::vector<double> ent_p{0.5, 0.9, 0.7, 0.6, 0.99, 0.8, 0.55, 0.95, 0.65, 0.75};
    const std::vector<double> bt{-0.1, -2.0, -0.5, -1.5, -0.3, -0.7, -3.0, -0.2, -1.0, -0.4};
    for (std::size_t i = 0; i < 10; ++i) {
        const std::string id = "e" + std::to_string(i);
        f.pool.push_back(ex(id, "u", "( f c" + std::to_string(i) + " )"));
        const double jitter = 0.01 * static_cast<double>(i);
        f.emb.add(id, i < 4 ? features::DenseVector{1.0, jitter} : (i < 7 ? features::DenseVector{jitter, 1.0} : features::DenseVector{-1.0, -1.0 + jitter}));
        f.scores.add(id, {.nbest = {{"t", std::log(ent_p[i])}, {"s", std::log(1 - ent_p[i])}}});
        f.model.add_translation(f.pool.back().lf, {id + "/mt", "t"});
        f.scores.add(id + "/mt", {.bt_parse_logprob = bt[i]});
    }
    AbeCoefficients c{1, 1, 0, 0};
    auto round = prepare_abe(f.pool, {}, f.in(), c, 1, AbeVariant::Nbest, 0);
    // Bias rank: higher p is less entropy, so more biased. Error rank: larger -bt.
    // bias ranks (0-based, ascending score): p 0.5<0.55<0.6<0.65<0.7<0.75<0.8<0.9<0.95<0.99
    const std::vector<double> bias_rank{0, 7, 4, 2, 9, 6, 1, 8, 3, 5};
    // error -bt: 0.1 2.0 0.5 1.5 0.3 0.7 3.0 0.2 1.0 0.4 -> ascending ranks
    const std::vector<double> err_rank{0, 8, 4, 7, 2, 5, 9, 1, 6, 3};
    for (std::size_t i = 0; i < 10; ++i) {
        EXPECT_NEAR(round.static_score.at("e" + std::to_string(i)), (bias_rank[i] + err_rank[i]) / 9.0, 1e-12) << i;
    }
    // Three well separated embedding groups {e0..e3}, {e4..e6}, {e7..e9}; the gate
    // keeps one per group. Group bests: e1 (15), e4 (11, ties e5 and wins on id), e7 (9, ties e8).
    auto sel = abe_select(f.pool, {}, f.in(), {1, 1, 0, 0}, 3, AbeVariant::Nbest, 0);
    EXPECT_EQ(sel.ids(), (std::vector<std::string>{"e1", "e4", "e7"}));
}

// ---------------------------------------------------------------- baselines

TEST(Baselines, RandomIsReproducible) {
    Rng rng(1);
    auto pool = testing_util::random_pool(rng, 25);
    auto a = random_select(pool, {"x0000"}, 7, 42);
    auto b = random_select(pool, {"x0000"}, 7, 42);
    auto c = random_select(pool, {"x0000"}, 7, 43);
    EXPECT_EQ(a.ids(), b.ids());
    EXPECT_NE(a.ids(), c.ids());
    EXPECT_EQ(as_set(a.ids()).size(), 7u);
    EXPECT_FALSE(as_set(a.ids()).count("x0000"));
}

TEST(Baselines, ClusterTakesOnePerCluster) {
    Rng rng(2);
    auto pool = testing_util::random_pool(rng, 40);
    auto emb = testing_util::random_embeddings(rng, pool, 3);
    BaselineInputs in;
    in.embeddings = &emb;
    auto sel = cluster_select(pool, {}, 6, 5, in);
    ASSERT_EQ(sel.picks.size(), 6u);
    std::set<double> clusters;
    for (const auto& p : sel.picks) {
        if (p.score >= 0) {
            EXPECT_TRUE(clusters.insert(p.score).second);
        }
    }
}

TEST(Baselines, MaxCompoundGreedyIsStepwiseOptimal) {
    Rng rng(9);
    for (int t = 0; t < 10; ++t) {
        auto pool = testing_util::random_pool(rng, 10);
        auto sel = max_compound_select(pool, {}, 4);
        std::set<std::string> covered;
        std::set<std::string> chosen;
        for (const auto& p : sel.picks) {
            // Brute force: the best new-compound count over every remaining example.
            std::size_t best = 0;
            for (const auto& e : pool) {
                if (chosen.count(e.id)) continue;
                std::set<std::string> fresh;
                for (auto& c : lf::extract_compounds(e.lf)) {
                    if (!covered.count(c.str())) fresh.insert(c.str());
                }
                best = std::max(best, fresh.size());
            }
            EXPECT_EQ(static_cast<std::size_t>(p.score), best);
            chosen.insert(p.id);
            for (const auto& e : pool) {
                if (e.id == p.id) {
                    for (auto& c : lf::extract_compounds(e.lf)) covered.insert(c.str());
                }
            }
        }
    }
}

TEST(Baselines, ScoreBackedMethodsNeedScores) {
    std::vector<Example> pool{ex("a", "u", "f"), ex("b", "v", "f"), ex("c", "v", "g")};
    EXPECT_EQ(code_of([&] { baseline_select(Baseline::Traffic, pool, {}, 1, 0, {}); }), Errc::MissingScore);
    ScoreTable t;
    t.add("a", {.gen_logprob = -1.0, .perplexity = 30});
    t.add("b", {.gen_logprob = -5.0, .perplexity = 10});
    t.add("c", {.gen_logprob = -2.0, .perplexity = 1});
    BaselineInputs in;
    in.scores = &t;
    EXPECT_EQ(baseline_select(Baseline::Traffic, pool, {}, 3, 0, in).ids(), (std::vector<std::string>{"b", "a", "c"}));
    EXPECT_EQ(baseline_select(Baseline::LcsBw, pool, {}, 1, 0, in).ids(), (std::vector<std::string>{"b"}));
}

TEST(Selection, ManifestRows) {
    Selection s{"random", {{"a", 0.5}, {"b", kGated}}};
    auto rows = manifest_rows(s, 2);
    EXPECT_EQ(rows[0]["rank"], 1);
    EXPECT_EQ(rows[1]["round"], 2);
    EXPECT_TRUE(rows[1]["score"].is_null());
}
