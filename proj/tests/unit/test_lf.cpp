#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "lrsp/lf/anonymize.hpp"
#include "lrsp/lf/decompose.hpp"
#include "lrsp/lf/logical_form.hpp"
#include "lrsp/lf/normalize.hpp"
#include "lrsp/lf/smatch.hpp"
#include "lrsp/util/rng.hpp"
#include "oracles.hpp"
#include "random_trees.hpp"

using namespace lrsp;
using namespace lrsp::lf;

namespace {

const char* kLambdaLf = "( lambda $0 e ( and ( state:t $0 ) ( next_to:t $0 s0 ) ) )";

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return Errc::Io;
}

}  // namespace

TEST(ParseLf, ChainOfFourNodes) {
    auto lf = parse_lf("( answer ( state ( next_to s0 ) ) )");
    EXPECT_EQ(lf.root.label, "answer");
    ASSERT_EQ(lf.root.children.size(), 1u);
    EXPECT_EQ(lf.root.children[0].label, "state");
    EXPECT_EQ(lf.root.children[0].children[0].children[0].label, "s0");
    EXPECT_EQ(node_count(lf.root), 4u);
}

TEST(ParseLf, LambdaRootHasThreeChildren) {
    auto lf = parse_lf(kLambdaLf);
    EXPECT_EQ(lf.root.label, "lambda");
    EXPECT_EQ(lf.root.children.size(), 3u);
}

TEST(ParseLf, TightParenthesesAndExtraSpaces) {
    EXPECT_EQ(canonical("(f  (g a)b )"), "( f ( g a ) b )");
    EXPECT_EQ(canonical("x"), "x");
}

TEST(ParseLf, Errors) {
    EXPECT_EQ(code_of([] { parse_lf("( f a"); }), Errc::UnbalancedParens);
    EXPECT_EQ(code_of([] { parse_lf("f a )"); }), Errc::UnbalancedParens);
    EXPECT_EQ(code_of([] { parse_lf("( )"); }), Errc::EmptyNode);
    EXPECT_EQ(code_of([] { parse_lf("   "); }), Errc::EmptyNode);
    EXPECT_EQ(code_of([] { parse_lf("( ( a ) b )"); }), Errc::EmptyNode);
    EXPECT_EQ(code_of([] { parse_lf("a b"); }), Errc::MalformedLf);
}

TEST(ParseLf, RoundTripOnRandomTrees) {
    Rng rng(11);
    for (int i = 0; i < 300; ++i) {
        auto lf = testing_util::random_tree(rng, 4, 3);
        const auto text = serialize(lf);
        EXPECT_EQ(serialize(parse_lf(text)), text);
        // Perturb whitespace; the canonical form must not change.
        std::string noisy;
        for (char c : text) {
            noisy += c;
            if (c == ' ' && rng.uniform_index(3) == 0) noisy += "  ";
        }
        EXPECT_EQ(canonical(noisy), text);
    }
}

TEST(ParseFunctional, RoundTrip) {
    const std::string text = "ask_weather(state_id('VIC'), date('today'), var)";
    auto lf = parse_functional(text);
    EXPECT_EQ(lf.root.children.size(), 3u);
    EXPECT_EQ(lf.root.children[0].children[0].label, "'VIC'");
    EXPECT_EQ(to_functional(lf), text);
    EXPECT_EQ(code_of([] { parse_functional("f(a, b"); }), Errc::UnbalancedParens);
    EXPECT_EQ(code_of([] { parse_functional("f()"); }), Errc::EmptyNode);
}

TEST(Atoms, LambdaExampleContainsExpectedAtoms) {
    auto atoms = extract_atoms(parse_lf(kLambdaLf));
    for (const char* want : {"lambda", "$0", "e"}) {
        EXPECT_NE(std::find(atoms.begin(), atoms.end(), Atom{want}), atoms.end()) << want;
    }
}

TEST(Atoms, SingleLeaf) {
    auto atoms = extract_atoms(parse_lf("x"));
    ASSERT_EQ(atoms.size(), 1u);
    EXPECT_EQ(atoms[0].label, "x");
}

TEST(Atoms, CardinalityMatchesTokenCount) {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        auto lf = testing_util::random_tree(rng, 5, 3);
        const auto text = serialize(lf);
        EXPECT_EQ(extract_atoms(lf).size(), oracle::count_label_tokens(text));
        EXPECT_EQ(extract_compounds(lf).size(), oracle::count_open_parens(text));
        EXPECT_EQ(extract_actions(lf).size(), oracle::count_label_tokens(text));
    }
}

TEST(Compounds, LambdaExample) {
    auto cs = extract_compounds(parse_lf(kLambdaLf));
    const Compound conj{"and", {"state:t", "next_to:t"}};
    const Compound lam{"lambda", {"$0", "e", "and"}};
    EXPECT_NE(std::find(cs.begin(), cs.end(), conj), cs.end());
    EXPECT_NE(std::find(cs.begin(), cs.end(), lam), cs.end());
    EXPECT_EQ(conj.str(), "( and state:t next_to:t )");
}

TEST(Compounds, DepthOne) {
    auto cs = extract_compounds(parse_lf("( f a b )"));
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_EQ(cs[0], (Compound{"f", {"a", "b"}}));
}

TEST(Actions, Rendering) {
    auto acts = extract_actions(parse_lf("( f a b )"));
    std::multiset<std::string> got(acts.begin(), acts.end());
    EXPECT_EQ(got, (std::multiset<std::string>{"REDUCE f:-a b", "GEN a", "GEN b"}));
    EXPECT_EQ(extract_actions(parse_lf(kLambdaLf)), extract_actions(parse_lf(kLambdaLf)));
}

TEST(Anonymize, WeatherExample) {
    auto rules = TypingRules::parse({"# values", "'.*' value var"});
    auto t = anonymize(parse_functional("ask_weather(state_id('VIC'), date('today'), var)"), rules);
    EXPECT_EQ(to_functional(t.lf), "ask_weather(state_id(var), date(var), var)");
    ASSERT_EQ(t.slot_types.count("var"), 1u);
    EXPECT_EQ(t.slot_types.at("var"), "value");
}

TEST(Anonymize, IdempotentAndNoEntities) {
    auto rules = TypingRules::parse({"s[0-9]+ state $state", "c[0-9]+ city $city"});
    auto lf = parse_lf("( and ( loc s0 ) ( loc c1 ) ( capital s2 ) )");
    auto once = anonymize(lf, rules);
    EXPECT_EQ(serialize(once.lf), "( and ( loc $state ) ( loc $city ) ( capital $state ) )");
    EXPECT_EQ(anonymize(once, rules), once);
    auto plain = parse_lf("( f a b )");
    EXPECT_EQ(anonymize(plain, rules).lf, plain);
    EXPECT_TRUE(anonymize(plain, rules).slot_types.empty());
}

TEST(Anonymize, EverySlotIsTyped) {
    auto rules = TypingRules::parse({"s[0-9]+ state $state"});
    auto t = anonymize(parse_lf("( f s1 s2 x )"), rules);
    visit_preorder(t.lf.root, [&](const LfNode& n, std::size_t) {
        if (rules.is_slot(n.label)) {
            EXPECT_EQ(t.slot_types.count(n.label), 1u);
        }
    });
}

TEST(Anonymize, BadPatternIsConfigError) {
    EXPECT_EQ(code_of([] { TypingRules::parse({"([ broken"}); }), Errc::InvalidConfig);
    EXPECT_EQ(code_of([] { TypingRules::parse({"(unclosed type"}); }), Errc::InvalidConfig);
}

TEST(Smatch, IdentityAndDisjoint) {
    auto a = parse_lf(kLambdaLf);
    EXPECT_DOUBLE_EQ(smatch_directional(a, a), 1.0);
    EXPECT_DOUBLE_EQ(smatch_sim(a, a), 1.0);
    EXPECT_DOUBLE_EQ(smatch_distance(a, a), 0.0);
    EXPECT_DOUBLE_EQ(smatch_directional(parse_lf("( f a b )"), parse_lf("( g c d )")), 0.0);
}

TEST(Smatch, HandCountedHalfOverlap) {
    // a: (,0,f) (f,0,a) (f,1,b) (f,2,c)   b: (,0,f) (f,0,a) (f,1,x) (f,2,y)
    auto a = parse_lf("( f a b c )");
    auto b = parse_lf("( f a x y )");
    EXPECT_DOUBLE_EQ(smatch_directional(a, b), 2.0 / 4.0);
    EXPECT_DOUBLE_EQ(smatch_sim(a, b), 0.5);
    // Asymmetric sizes: a has 4 triples, c has 2, sharing (,0,f) and (f,0,a).
    auto c = parse_lf("( f a )");
    EXPECT_DOUBLE_EQ(smatch_directional(a, c), 2.0 / 4.0);
    EXPECT_DOUBLE_EQ(smatch_directional(c, a), 1.0);
    EXPECT_DOUBLE_EQ(smatch_sim(a, c), 0.75);
}

TEST(Smatch, VariablesAlignByType) {
    auto a = parse_lf("( and ( p $0 ) ( q $1 ) )");
    auto b = parse_lf("( and ( p $7 ) ( q $3 ) )");
    EXPECT_DOUBLE_EQ(smatch_directional(a, b), 1.0);
    auto c = parse_lf("( and ( p $x0 ) ( q $x1 ) )");
    EXPECT_LT(smatch_directional(a, c), 1.0);
    EXPECT_FALSE(is_slot_variable("$loc"));
    EXPECT_TRUE(is_slot_variable("$x12"));
    EXPECT_EQ(slot_variable_type("$x12"), "$x");
}

TEST(Smatch, TwoVariablePairsMatchExhaustive) {
    Rng rng(99);
    for (int i = 0; i < 100; ++i) {
        auto a = testing_util::random_tree(rng, 4, 3, 2);
        auto b = testing_util::random_tree(rng, 4, 3, 2);
        EXPECT_DOUBLE_EQ(smatch_directional(a, b), oracle::smatch_exhaustive(a, b))
            << serialize(a) << " vs " << serialize(b);
    }
}

TEST(Smatch, SymmetricOnRandomPairs) {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        auto a = testing_util::random_tree(rng, 4, 3, 3);
        auto b = testing_util::random_tree(rng, 4, 3, 3);
        const double s = smatch_sim(a, b);
        EXPECT_DOUBLE_EQ(s, smatch_sim(b, a));
        EXPECT_GE(s, 0.0);
        EXPECT_LE(s, 1.0);
    }
}

namespace {

std::vector<Template> as_templates(const std::vector<std::string>& texts) {
    std::vector<Template> out;
    for (const auto& t : texts) out.push_back(Template{parse_lf(t), {}});
    return out;
}

void expect_lossless(const std::vector<Template>& in, const NormalizedCorpus& out) {
    ASSERT_EQ(in.size(), out.corpus.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        EXPECT_EQ(out.dictionary.expand(out.corpus[i].lf), in[i].lf) << serialize(in[i].lf);
    }
}

}  // namespace

TEST(Normalize, IdenticalTemplatesCollapseToOneUnit) {
    auto corpus = as_templates({"( f ( g a ) b )", "( f ( g a ) b )", "( f ( g a ) b )"});
    auto out = normalize_templates(corpus, 2);
    ASSERT_EQ(out.dictionary.size(), 1u);
    for (const auto& t : out.corpus) {
        EXPECT_TRUE(t.lf.root.is_leaf());
        EXPECT_TRUE(out.dictionary.is_unit(t.lf.root.label));
    }
    expect_lossless(corpus, out);
}

TEST(Normalize, SupportAboveCorpusSizeIsNoop) {
    auto corpus = as_templates({"( f ( g a ) b )", "( f ( g a ) c )"});
    auto out = normalize_templates(corpus, 3);
    EXPECT_TRUE(out.dictionary.empty());
    for (std::size_t i = 0; i < corpus.size(); ++i) EXPECT_EQ(out.corpus[i].lf, corpus[i].lf);
}

TEST(Normalize, SharedSubtreeOfSupportFive) {
    // ( cnt ( rel x y ) ) is shared by five documents under distinct parents.
    auto corpus = as_templates({
        "( p1 ( cnt ( rel x y ) ) a )", "( p2 b ( cnt ( rel x y ) ) )", "( p3 ( cnt ( rel x y ) ) c )",
        "( p4 d ( cnt ( rel x y ) ) )", "( p5 ( cnt ( rel x y ) ) e )", "( p6 ( rel x z ) f )",
        "( p7 ( rel z y ) g )",
    });
    std::vector<LogicalForm> lfs;
    for (const auto& t : corpus) lfs.push_back(t.lf);
    const auto supports = oracle::subtree_supports(lfs);
    std::set<std::string> frequent;
    for (const auto& [k, s] : supports) {
        if (s >= 3) frequent.insert(k);
    }
    // The oracle sees the shared subtree and its inner part as the only frequent ones.
    ASSERT_EQ(frequent, (std::set<std::string>{"( cnt ( rel x y ) )", "( rel x y )"}));

    auto out = normalize_templates(corpus, 3);
    ASSERT_EQ(out.dictionary.size(), 1u);
    const auto& [token, pattern] = *out.dictionary.units().begin();
    EXPECT_EQ(pattern.str(), "( cnt ( rel x y ) )");
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        std::string expected = serialize(corpus[i].lf);
        const std::string shared = "( cnt ( rel x y ) )";
        if (auto pos = expected.find(shared); pos != std::string::npos) expected.replace(pos, shared.size(), token);
        EXPECT_EQ(serialize(out.corpus[i].lf), expected);
    }
    expect_lossless(corpus, out);
}

TEST(Normalize, FixedSiblingsFoldIntoParent) {
    auto corpus = as_templates({
        "( lambda $0 e ( p $0 ) )", "( lambda $0 e ( q $0 ) )", "( lambda $0 e ( r $0 a ) )",
    });
    auto out = normalize_templates(corpus, 2);
    // lambda always carries `$0 e`, so those fold into the parent and the body stays a child.
    for (const auto& t : out.corpus) {
        EXPECT_TRUE(out.dictionary.is_unit(t.lf.root.label));
        EXPECT_EQ(t.lf.root.children.size(), 1u);
    }
    expect_lossless(corpus, out);
}

TEST(Normalize, LosslessOnRandomCorpora) {
    Rng rng(17);
    for (int round = 0; round < 50; ++round) {
        std::vector<Template> corpus;
        for (int i = 0; i < 12; ++i) corpus.push_back(Template{testing_util::random_tree(rng, 4, 2, 1, 3), {}});
        auto out = normalize_templates(corpus, 2 + rng.uniform_index(3));
        expect_lossless(corpus, out);
    }
}

TEST(Normalize, UnitPrefixAvoidsExistingLabels) {
    auto corpus = as_templates({"( f @idiom0 ( g a ) )", "( h ( g a ) )"});
    auto out = normalize_templates(corpus, 2);
    ASSERT_EQ(out.dictionary.size(), 1u);
    EXPECT_EQ(out.dictionary.units().begin()->first, "@@idiom0");
    expect_lossless(corpus, out);
}
