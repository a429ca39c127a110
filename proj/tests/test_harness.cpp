#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "shelab/harness.hpp"

using namespace shelab;

namespace {

HarnessOptions quick(int playouts = 50) {
  HarnessOptions o;
  o.playouts = playouts;
  return o;
}

}  // namespace

TEST(Corpus, Counts) {
  EXPECT_EQ(gen_exhaustive(binary_vocabulary(), 2).family.members.size(), 18u);
  EXPECT_EQ(gen_exhaustive(Vocabulary{{{"P", 1}}, {}}, 1).family.members.size(), 2u);
  EXPECT_EQ(gen_exhaustive(Vocabulary{}, 3).family.members.size(), 3u);
  EXPECT_EQ(corpus_from_spec("exhaustive:const:2").family.members.size(), 2u + 8u);
  // unary function on {1,2}: 2^2 tables, on {1}: 1
  EXPECT_EQ(gen_exhaustive(Vocabulary{{}, {{"F", 1}}}, 2).family.members.size(), 5u);
}

TEST(Corpus, MembersAreValidAndDistinct) {
  const Corpus c = corpus_from_spec("exhaustive:bin:2");
  std::set<std::string> names;
  for (const auto& s : c.family.members) {
    EXPECT_FALSE(validate_structure(s));
    EXPECT_TRUE(names.insert(s.name).second);
  }
  for (std::size_t i = 0; i < c.family.members.size(); ++i)
    for (std::size_t j = i + 1; j < c.family.members.size(); ++j)
      EXPECT_FALSE(c.family.members[i].same_content(c.family.members[j]));
}

TEST(Corpus, Guards) {
  EXPECT_THROW(gen_exhaustive(binary_vocabulary(), 5), BudgetError);
  EXPECT_THROW(gen_exhaustive(Vocabulary{{{"P", 1}}, {}}, 30), BudgetError);
  EXPECT_THROW(corpus_from_spec("exhaustive:weird:2"), ParseError);
  EXPECT_THROW(corpus_from_spec("exhaustive:bin:x"), ParseError);
  EXPECT_EQ(corpus_from_spec("orders:4").family.members.size(), 4u);
}

TEST(Generators, LinearOrder) {
  const Structure l3 = gen_linear_order(3);
  EXPECT_EQ(l3.size(), 3u);
  EXPECT_EQ(l3.relations.at("<").size(), 3u);
  EXPECT_EQ(gen_alpha_order(4).relations.at("<").size(), 6u);
}

TEST(Generators, MnAlpha) {
  const Structure a = gen_m_n_alpha(1, 2, 1), b = gen_m_n_alpha(0, 2, 1);
  EXPECT_FALSE(validate_structure(a));
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a.functions.at("F1").at({"2"}), "2");
  EXPECT_EQ(a.functions.at("F0").at({"2"}), "0");
  EXPECT_EQ(b.functions.at("F0").at({"2"}), "2");
  EXPECT_TRUE(a.relations.at("<").contains({"0", "0"}));
  EXPECT_FALSE(isomorphic(a, b).isomorphic);
}

TEST(FactA12, PassesOnSmallGrid) {
  const Corpus c = corpus_from_spec("exhaustive:const:2");
  const SuiteReport r = check_fact_a12(c, Grid{GammaMode::bs, {1, 2}, {0, 1, 2}}, quick());
  EXPECT_TRUE(r.passed()) << to_text(r);
  EXPECT_GT(r.check("determinacy")->instances, 0u);
  EXPECT_GT(r.check("reduct")->instances, 0u);
}

TEST(FactA12, EmptyCorpusIsVacuous) {
  const SuiteReport r = check_fact_a12(Corpus{"empty", {}}, Grid{GammaMode::bs, {1}, {1}}, quick());
  EXPECT_TRUE(r.passed());
  for (const auto& c : r.checks) EXPECT_EQ(c.instances, 0u);
}

TEST(FactA12, MutationIsCaughtAndReplays) {
  HarnessOptions o = quick();
  o.rules.mutation = Mutation::collapse_side2_horizon;
  const SuiteReport r = check_fact_a12(corpus_from_spec("exhaustive:bin:2"),
                                       Grid{GammaMode::bs, {1, 2}, {0, 1, 2, 3}}, o);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.check("symmetry")->passed());
  for (const auto& c : r.checks)
    if (c.first) EXPECT_TRUE(replay_failure(c.first->transcript)) << c.name;
}

TEST(FactA12, ReportJson) {
  const SuiteReport r = check_fact_a12(corpus_from_spec("exhaustive:empty:2"), Grid{GammaMode::bs, {1}, {1}}, quick());
  const json j = to_json(r);
  EXPECT_EQ(j.at("suite"), "a12");
  EXPECT_TRUE(j.at("passed").get<bool>());
  EXPECT_EQ(j.at("checks").size(), 7u);
}

TEST(Compose, InitialTimesInitial) {
  const Game g1(gen_linear_order(2), gen_linear_order(3), GameConfig{GammaMode::bs, 2, Clock::fin(2)});
  const Game g2(gen_linear_order(1), gen_linear_order(2), GameConfig{GammaMode::bs, 2, Clock::fin(2)});
  const State p = compose_product_state(*g1.initial_state(), *g2.initial_state());
  const Game prod(direct_product(gen_linear_order(2), gen_linear_order(1)),
                  direct_product(gen_linear_order(3), gen_linear_order(2)), GameConfig{GammaMode::bs, 2, Clock::fin(2)});
  EXPECT_EQ(p, *prod.initial_state());
}

TEST(Compose, SingletonMatchedSets) {
  State s1, s2;
  s1.debt[0] = {0, kAbsent};
  s1.debt[1] = {kAbsent, 0};
  s1.g = {1, -1};
  s2.debt[0] = {kAbsent, 0, kAbsent};
  s2.debt[1] = {0, kAbsent};
  s2.g = {-1, 0, -1};
  s1.n = s2.n = 2;
  s1.beta = s2.beta = 1;
  const State p = compose_product_state(s1, s2);
  // left: (0,1) is index 0*3+1; right: (1,0) is index 1*2+0
  EXPECT_EQ(p.members(0), (std::vector<int>{1}));
  EXPECT_EQ(p.members(1), (std::vector<int>{2}));
  EXPECT_EQ(p.g[1], 2);
  EXPECT_EQ(p.matched_count(), 1);
}

TEST(Compose, DebtMaxRule) {
  State s1, s2;
  s1.debt[0] = {2};
  s1.debt[1] = {kAbsent};
  s1.g = {-1};
  s2.debt[0] = {5};
  s2.debt[1] = {kAbsent};
  s2.g = {-1};
  const State p = compose_product_state(s1, s2);
  EXPECT_EQ(p.debt[0][0], 5);
  s2.n = 1;
  EXPECT_THROW(compose_product_state(s1, s2), Error);
}

TEST(Compose, SumState) {
  State s1, s2;
  s1.debt[0] = {0};
  s1.debt[1] = {0, kAbsent};
  s1.g = {0};
  s2.debt[0] = {kAbsent, 3};
  s2.debt[1] = {kAbsent};
  s2.g = {-1, -1};
  s1.n = s2.n = 1;
  const State p = compose_sum_state(s1, s2);
  EXPECT_EQ(p.members(0), (std::vector<int>{0, 2}));
  EXPECT_EQ(p.members(1), (std::vector<int>{0}));
  EXPECT_EQ(p.g, (IndexMap{0, -1, -1}));
}

TEST(Products, IdenticalComponents) {
  const Structure m = fx::digraph("g", 2, {{0, 1}});
  EXPECT_EQ(solve(direct_product(m, m), direct_product(m, m), GameConfig{GammaMode::bs, 2, Clock::fin(2)}).winner,
            Player::iso);
}

TEST(Products, PlayoutsWinWithConstants) {
  // constants make the component verdicts non-trivial
  const Corpus c = corpus_from_spec("exhaustive:const:2");
  std::mt19937_64 rng(1);
  const GameConfig g{GammaMode::bs, 2, Clock::fin(2)};
  int played = 0;
  for (const auto& a : c.family.members)
    for (const auto& b : c.family.members) {
      if (solve(a, b, g).winner != Player::iso || played > 60) continue;
      const auto r = composed_playout(Composite::product, a, a, b, b, g, rng);
      EXPECT_TRUE(r.iso_won) << r.failure << " " << a.name << " " << b.name;
      ++played;
    }
  EXPECT_GT(played, 10);
}

TEST(Products, TheoremOnConstCorpus) {
  const SuiteReport r = check_product_theorem(corpus_from_spec("exhaustive:const:1"),
                                              Grid{GammaMode::bs, {1, 2}, {1, 2}}, quick(40));
  EXPECT_TRUE(r.passed()) << to_text(r);
  EXPECT_EQ(r.check("product-playouts")->instances, 40u);
}

TEST(Sums, TheoremOnUnaryCorpus) {
  const SuiteReport r = check_sum_theorem(corpus_from_spec("exhaustive:unary:2"),
                                          Grid{GammaMode::bs, {2}, {2}}, quick(40));
  EXPECT_TRUE(r.passed()) << to_text(r);
  EXPECT_GT(r.check("finite-index-sum")->instances, 0u);
}

TEST(Sums, SkippedWithConstants) {
  const SuiteReport r = check_sum_theorem(corpus_from_spec("exhaustive:const:1"), Grid{GammaMode::bs, {1}, {1}}, quick());
  ASSERT_EQ(r.checks.size(), 1u);
  EXPECT_FALSE(r.checks[0].note.empty());
}

TEST(Rigidity, SkipsLargeStructuresAndIsoPairsAreConsistent) {
  Corpus c{"copies", {}};
  std::mt19937_64 rng(2);
  const Structure l2 = gen_linear_order(2);
  c.family.members = {l2, relabel(l2, rng), gen_linear_order(3)};
  const SuiteReport r = check_rigidity(c, 2);
  EXPECT_TRUE(r.passed()) << to_text(r);
  EXPECT_EQ(r.checks[0].skipped, 3u);  // every pair with L3
  EXPECT_FALSE(r.checks[0].note.empty());
}

TEST(Bridge, HoldsOnSmallCorpora) {
  for (const char* spec : {"exhaustive:bin:2", "exhaustive:const:2"}) {
    const SuiteReport r = check_bridge(corpus_from_spec(spec), {0, 1, 2}, {1, 2});
    EXPECT_TRUE(r.passed()) << to_text(r);
  }
}

TEST(Relabel, IsIsomorphic) {
  std::mt19937_64 rng(4);
  for (const auto& m : corpus_from_spec("exhaustive:const:2").family.members) {
    const Structure r = relabel(m, rng);
    EXPECT_FALSE(validate_structure(r));
    EXPECT_TRUE(isomorphic(m, r).isomorphic);
  }
}
