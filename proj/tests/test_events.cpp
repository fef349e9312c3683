#include <gtest/gtest.h>

#include "llcount/events.hpp"
#include "llcount/oracle.hpp"
#include "test_support.hpp"

using namespace llc;
using llc::testing::Rng;

TEST(Dimacs, ParsesHeaderAndClauses) {
  auto f = parse_dimacs("p cnf 3 1\n1 2 3 0\n");
  EXPECT_EQ(f.variable_count, 3);
  ASSERT_EQ(f.clause_count(), 1);
  EXPECT_EQ(f.clauses[0].width(), 3);
  auto g = parse_dimacs("p cnf 2 2\n1 -2 0\n-1 2 0\n");
  EXPECT_EQ(g.clause_count(), 2);
  EXPECT_TRUE(g.clauses[0].literals[1].negated);
  EXPECT_EQ(g.clauses[0].literals[1].var, 1);
}

TEST(Dimacs, CommentsMultilineAndPercent) {
  auto f = parse_dimacs("c hello\np cnf 4 2\n1 2\n 3 0 -4\n 1 0\n%\n0\n");
  ASSERT_EQ(f.clause_count(), 2);
  EXPECT_EQ(f.clauses[0].width(), 3);
  EXPECT_EQ(f.clauses[1].width(), 2);
  EXPECT_FALSE(f.uniform());
  EXPECT_FALSE(f.warnings.empty());
}

TEST(Dimacs, Errors) {
  EXPECT_THROW(parse_dimacs("1 1 0"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 -1 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 3 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 2 2\n1 2 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 2 1\n0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 x 0\n"), ParseError);
  try {
    parse_dimacs("p cnf 3 2\n1 2 0\n3 3 0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Dimacs, EmptyFormula) {
  auto f = parse_dimacs("p cnf 4 0\n");
  EXPECT_EQ(f.variable_count, 4);
  EXPECT_EQ(f.clause_count(), 0);
}

TEST(CnfGraph, Examples) {
  EXPECT_EQ(cnf_dependency_graph(parse_dimacs("p cnf 6 3\n1 2 0\n3 4 0\n5 6 0\n")).edge_count(), 0u);
  auto p3 = cnf_dependency_graph(parse_dimacs("p cnf 4 3\n1 2 0\n2 3 0\n3 4 0\n"));
  EXPECT_EQ(p3.edge_count(), 2u);
  EXPECT_TRUE(p3.adjacent(0, 1) && p3.adjacent(1, 2) && !p3.adjacent(0, 2));
  auto k3 = cnf_dependency_graph(parse_dimacs("p cnf 4 3\n1 2 0\n1 3 0\n-1 4 0\n"));
  EXPECT_EQ(k3.edge_count(), 3u);
}

TEST(CnfWeight, Examples) {
  auto single = parse_dimacs("p cnf 5 1\n1 2 3 4 5 0\n");
  EXPECT_EQ(cnf_polymer_weight(single, {0}), -1.0 / 32);
  auto conflict = parse_dimacs("p cnf 3 2\n1 2 0\n-1 3 0\n");
  EXPECT_EQ(cnf_polymer_weight(conflict, {0, 1}), 0.0);
  auto shared = parse_dimacs("p cnf 3 2\n1 2 0\n1 3 0\n");
  EXPECT_EQ(cnf_polymer_weight(shared, {0, 1}), 1.0 / 8);
  EXPECT_EQ(cnf_polymer_weight_exact(shared, {0, 1}), Rational(1, 8));
}

TEST(CnfWeight, MatchesEnumerationOfFalsifyingAssignments) {
  Rng rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    auto f = llc::testing::random_cnf(rng, 8, 6, llc::testing::uniform_int(rng, 1, 4));
    auto g = cnf_dependency_graph(f);
    for (const auto& gamma : enumerate_connected_subgraphs(g, 4)) {
      const Rational sign = gamma.size() % 2 ? -1 : 1;
      EXPECT_EQ(cnf_polymer_weight_exact(f, gamma), sign * oracle::cnf_joint_falsify_enumerated(f, gamma));
      EXPECT_EQ(cnf_polymer_weight(f, gamma), static_cast<double>(cnf_polymer_weight_exact(f, gamma)));
    }
  }
}

TEST(KCondition, FormulaAndMargin) {
  Rng rng(1);
  auto f = llc::testing::ring_cnf(rng, 6, 12, 1);
  auto g = cnf_dependency_graph(f);
  auto col = greedy_coloring(g);
  EXPECT_EQ(col.colors_used, 2);
  auto k = k_condition(f, col, theorem_degree(g), 0.1);
  const double required = 2 / std::log(2.0) * (std::log(5.0) + 1.1);
  EXPECT_NEAR(k.required_k, required, 1e-12);
  EXPECT_NEAR(k.margin(), 12 - required, 1e-12);
  EXPECT_TRUE(k.passed());
  auto narrow = llc::testing::ring_cnf(rng, 6, 7, 1);
  EXPECT_FALSE(k_condition(narrow, greedy_coloring(cnf_dependency_graph(narrow)), 2, 0.1).passed());
}

TEST(ProbabilityIntersection, ZeroAndOneEvent) {
  EventOracle none{[](const VertexSet&) { return 0.0; }, std::vector<double>{}};
  ApplicationOptions opt;
  auto r0 = approx_probability_intersection(build_graph(0, {}), none, opt);
  EXPECT_EQ(r0.probability, 1.0);

  const double p = 0.01;
  EventOracle one{[p](const VertexSet&) { return p; }, std::vector<double>{p}};
  opt.delta = 1.0;
  auto r1 = approx_probability_intersection(build_graph(1, {}), one, opt);
  // the single-polymer series log(1-p) is cut after m terms
  EXPECT_NEAR(r1.probability, 1 - p, std::pow(p, r1.approx.truncation_order + 1));
  EXPECT_LE(std::abs(std::log(r1.probability) - std::log1p(-p)), r1.approx.additive_log_error_bound);
}

TEST(ProbabilityIntersection, IndependentEventsMultiply) {
  // no edges: Pr[∩ E_v] = ∏ (1 - p_v)
  std::vector<double> p{0.001, 0.002, 0.0005, 0.003};
  EventOracle ev{[&p](const VertexSet& s) { return p.at(s.at(0)); }, p};
  ApplicationOptions opt;
  opt.delta = 0.5;
  opt.epsilon = 0.01;
  auto r = approx_probability_intersection(build_graph(4, {}), ev, opt);
  double expect = 1;
  for (double x : p) expect *= 1 - x;
  EXPECT_NEAR(r.probability, expect, 1e-14);
  EXPECT_FALSE(r.conditional);
}

TEST(ProbabilityIntersection, WithoutPerEventListIsConditional) {
  EventOracle ev{[](const VertexSet& s) { return std::pow(1e-3, s.size()); }, std::nullopt};
  ApplicationOptions opt;
  opt.delta = 0.5;
  auto r = approx_probability_intersection(path_graph(3), ev, opt);
  EXPECT_TRUE(r.conditional);
  EXPECT_FALSE(r.hypothesis_checked);
}

TEST(ProbabilityIntersection, RejectsOutOfRangeProbability) {
  EventOracle ev{[](const VertexSet&) { return 1.5; }, std::nullopt};
  ApplicationOptions opt;
  opt.delta = 0.5;
  opt.force = true;
  EXPECT_THROW(approx_probability_intersection(path_graph(2), ev, opt), NumericError);
}

TEST(CountSatisfying, TrivialCases) {
  SatOptions opt;
  opt.delta = 0.1;
  auto empty = count_satisfying(parse_dimacs("p cnf 4 0\n"), opt);
  EXPECT_EQ(empty.count, 16.0);

  // one 3-clause: Pr = 7/8; the weight 1/8 needs δ <= ln(8/5)-1 < 0, so force
  auto one = parse_dimacs("p cnf 3 1\n1 2 3 0\n");
  opt.delta = 1.0;
  EXPECT_THROW(count_satisfying(one, opt), HypothesisError);
  opt.force = true;
  auto r = count_satisfying(one, opt);
  EXPECT_NEAR(r.count, 7.0, 7.0 * 0.01);
  EXPECT_FALSE(r.probability.approx.certified);
}

TEST(CountSatisfying, RingMatchesInclusionExclusion) {
  Rng rng(3);
  SatOptions opt;
  opt.delta = 1.0;
  for (int trial = 0; trial < 5; ++trial) {
    auto f = llc::testing::ring_cnf(rng, 6, 12, 1);
    VertexSet all{0, 1, 2, 3, 4, 5};
    const double exact = static_cast<double>(oracle::exact_inclusion_exclusion_probability(f, all));
    for (double eps : {0.1, 0.01}) {
      opt.epsilon = eps;
      auto r = count_satisfying(f, opt);
      EXPECT_LE(std::abs(r.probability.probability - exact) / exact, eps);
      EXPECT_NEAR(r.count, std::ldexp(r.probability.probability, f.variable_count), 1e-6);
    }
  }
}

TEST(CountSatisfying, ExactRationalAgreesWithDouble) {
  Rng rng(4);
  auto f = llc::testing::ring_cnf(rng, 6, 12, 2, false);
  SatOptions opt;
  opt.delta = 1.0;
  auto d = count_satisfying(f, opt);
  opt.exact_rational = true;
  auto e = count_satisfying(f, opt);
  ASSERT_TRUE(e.exact_log_probability.has_value());
  EXPECT_NEAR(static_cast<double>(*e.exact_log_probability), d.probability.approx.log_value.real(), 1e-15);
}

TEST(CountSatisfying, UserColoringChangesChi) {
  Rng rng(5);
  auto f = llc::testing::ring_cnf(rng, 6, 12, 1);
  SatOptions opt;
  opt.delta = 0.5;
  opt.coloring = make_coloring(cnf_dependency_graph(f), {0, 1, 2, 0, 1, 2});
  // three colours raise the required width to about 13.5 > 12
  EXPECT_THROW(count_satisfying(f, opt), HypothesisError);
  const auto k = k_condition(f, *opt.coloring, 2, opt.delta);
  EXPECT_EQ(k.chromatic, 3);
  EXPECT_NEAR(k.required_k, 3 / std::log(2.0) * (std::log(5.0) + 1.5), 1e-12);
  opt.force = true;
  auto r = count_satisfying(f, opt);
  EXPECT_EQ(r.probability.chromatic_bound, 3);
  EXPECT_FALSE(r.probability.approx.certified);
}
