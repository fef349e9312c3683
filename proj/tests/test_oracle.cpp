#include <gtest/gtest.h>

#include "llcount/oracle.hpp"
#include "test_support.hpp"

using namespace llc;
using namespace llc::oracle;
using llc::testing::Rng;

TEST(PolymerZ, Examples) {
  auto zero = [](const VertexSet&) { return Complex(0, 0); };
  EXPECT_EQ(brute_force_polymer_Z(path_graph(4), zero), Complex(1, 0));
  const Complex x(0.3, 0.1), y(-0.2, 0.05);
  auto single = [x](const VertexSet& s) { return s == VertexSet{0} ? x : Complex(0, 0); };
  EXPECT_EQ(brute_force_polymer_Z(build_graph(1, {}), single), 1.0 + x);
  auto two = [x, y](const VertexSet& s) {
    if (s == VertexSet{0}) return x;
    if (s == VertexSet{1}) return y;
    return Complex(0, 0);
  };
  EXPECT_NEAR(std::abs(brute_force_polymer_Z(build_graph(2, {}), two) - (1.0 + x + y + x * y)), 0, 1e-15);
  EXPECT_NEAR(std::abs(brute_force_polymer_Z(complete_graph(2), two) - (1.0 + x + y)), 0, 1e-15);
}

TEST(PolymerZ, HardcoreMatchesIndependentSetCount) {
  // singleton weights λ only: Z is the independence polynomial
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = llc::testing::random_bounded_graph(rng, 8, 3);
    const double lambda = 0.7;
    auto w = [lambda](const VertexSet& s) { return Complex(s.size() == 1 ? lambda : 0.0, 0); };
    double expect = 0;
    for (std::uint32_t m = 0; m < 256; ++m) {
      bool independent = true;
      for (const auto& [u, v] : g.edges())
        if ((m >> u & 1u) && (m >> v & 1u)) independent = false;
      if (independent) expect += std::pow(lambda, std::popcount(m));
    }
    EXPECT_NEAR(brute_force_polymer_Z(g, w).real(), expect, 1e-12);
  }
}

TEST(PolymerZ, Cap) {
  OracleBudget b;
  b.max_polymer_model_vertices = 4;
  EXPECT_THROW(brute_force_polymer_Z(path_graph(5), [](const VertexSet&) { return Complex(0, 0); }, b), ResourceError);
}

TEST(InclusionExclusion, Examples) {
  auto one = parse_dimacs("p cnf 3 1\n1 2 3 0\n");
  EXPECT_EQ(exact_inclusion_exclusion_probability(one, {}), Rational(1));
  EXPECT_EQ(exact_inclusion_exclusion_probability(one, {0}), Rational(7, 8));
  auto two = parse_dimacs("p cnf 4 2\n1 2 0\n3 -4 0\n");
  EXPECT_EQ(exact_inclusion_exclusion_probability(two, {0, 1}), Rational(9, 16));
  EXPECT_EQ(brute_force_sat_count(two), 9u);
}

TEST(InclusionExclusion, MatchesSatCountAndIsMonotone) {
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    auto f = llc::testing::random_cnf(rng, 10, 8, llc::testing::uniform_int(rng, 1, 4));
    VertexSet all(8);
    std::iota(all.begin(), all.end(), 0);
    const Rational p = exact_inclusion_exclusion_probability(f, all);
    EXPECT_EQ(p * Rational(1 << 10), Rational(brute_force_sat_count(f)));
    VertexSet sub{0, 2, 5};
    EXPECT_GE(exact_inclusion_exclusion_probability(f, sub), p);
  }
}

TEST(InclusionExclusion, GenericEventsFactorize) {
  auto g = path_graph(3);
  std::map<VertexSet, double> table{{{0}, 0.1}, {{1}, 0.2}, {{2}, 0.3}, {{0, 1}, 0.05}, {{1, 2}, 0.07}, {{0, 1, 2}, 0.01}};
  auto joint = factorized_joint(g, [&](const VertexSet& s) { return table.at(s); });
  EXPECT_NEAR(joint({0, 2}), 0.03, 1e-15);
  const double p = exact_inclusion_exclusion_probability(joint, {0, 1, 2});
  EXPECT_NEAR(p, 1 - 0.6 + (0.05 + 0.07 + 0.03) - 0.01, 1e-15);
}

TEST(SatCount, Examples) {
  EXPECT_EQ(brute_force_sat_count(parse_dimacs("p cnf 3 0\n")), 8u);
  EXPECT_EQ(brute_force_sat_count(parse_dimacs("p cnf 1 1\n1 0\n")), 1u);
  EXPECT_EQ(brute_force_sat_count(parse_dimacs("p cnf 2 2\n1 2 0\n-1 2 0\n")), 2u);
  OracleBudget b;
  b.max_variables = 2;
  EXPECT_THROW(brute_force_sat_count(parse_dimacs("p cnf 3 0\n"), b), ResourceError);
}

TEST(ExactDimension, Examples) {
  const auto none = exact_dimension_full_diagonalization(2, 3, {});
  EXPECT_EQ(none.normalized_dim, 1.0);
  EXPECT_EQ(none.nullity, 8);
  EXPECT_EQ(none.lambda_star, 0.0);
  const auto one = exact_dimension_full_diagonalization(2, 1, {llc::testing::diagonal_projector({0}, {0})});
  EXPECT_EQ(one.normalized_dim, 0.5);
  EXPECT_NEAR(one.lambda_star, 1.0, 1e-12);
}

TEST(ExactDimension, DiagonalClosedForm) {
  // a basis state is in the kernel iff no diagonal projector contains it
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<LocalProjector> v;
    for (int i = 0; i < 4; ++i) {
      const int lo = llc::testing::uniform_int(rng, 0, 4);
      v.push_back(llc::testing::random_diagonal_projector(rng, llc::testing::range_set(lo, lo + 3), llc::testing::uniform_int(rng, 1, 3)));
    }
    int kernel = 0;
    for (int x = 0; x < 128; ++x) {
      bool free = true;
      for (const auto& p : v) {
        int local = 0;
        for (int q : p.support) local = local * 2 + ((x >> (6 - q)) & 1);
        if (p.matrix(local, local).real() > 0.5) free = false;
      }
      kernel += free;
    }
    const auto ex = exact_dimension_full_diagonalization(2, 7, v);
    EXPECT_EQ(ex.nullity, kernel);
    EXPECT_DOUBLE_EQ(ex.normalized_dim, kernel / 128.0);
  }
}

TEST(ExactDimension, RealAndComplexPathsAgree) {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = llc::testing::random_projector(rng, {0, 1, 2}, 1, 2, true);
    auto b = llc::testing::random_projector(rng, {2, 3}, 1, 2, true);
    auto ex = exact_dimension_full_diagonalization(2, 4, {a, b});
    // same operators with a global phase on one eigenvector basis: complex storage
    LocalProjector ac = a;
    ac.matrix = a.matrix * Complex(1, 0);
    ac.matrix(0, 0) += Complex(0, 1e-300);
    auto ex2 = exact_dimension_full_diagonalization(2, 4, {ac, b});
    EXPECT_EQ(ex.nullity, ex2.nullity);
    EXPECT_NEAR(ex.lambda_star, ex2.lambda_star, 1e-10);
  }
}

TEST(DetectabilityTrace, SingleProjectorAndCommuting) {
  auto p = llc::testing::diagonal_projector({0, 1}, {1});
  const Coloring col{{0}, 1};
  for (int T : {1, 2, 5}) EXPECT_NEAR(exact_detectability_trace(2, {p}, col, T).real(), 0.75, 1e-14);

  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<LocalProjector> v;
    for (int i = 0; i < 3; ++i) {
      std::set<std::int64_t> s{llc::testing::uniform_int(rng, 0, 7)};
      v.push_back(llc::testing::x_basis_projector(llc::testing::range_set(i, i + 3), s));
    }
    ProjectorSet ps(2, 5, v);
    ASSERT_TRUE(ps.verify_commuting().passed);
    const auto col3 = greedy_coloring(support_dependency_graph(ps));
    const auto ex = exact_dimension_full_diagonalization(2, 5, v);
    for (int T : {1, 3}) EXPECT_NEAR(exact_detectability_trace(2, v, col3, T).real(), ex.normalized_dim, 1e-12);
  }
}

TEST(DetectabilityTrace, ErrorShrinksWithT) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<LocalProjector> v{llc::testing::random_projector(rng, {0, 1}, 1), llc::testing::random_projector(rng, {0, 1}, 1)};
    const auto col = make_coloring(complete_graph(2), {0, 1});
    const auto ex = exact_dimension_full_diagonalization(2, 2, v);
    const double e1 = std::abs(exact_detectability_trace(2, v, col, 1).real() - ex.normalized_dim);
    const double e4 = std::abs(exact_detectability_trace(2, v, col, 4).real() - ex.normalized_dim);
    EXPECT_LT(e4, e1);
    const double chi2 = 4.0;
    EXPECT_LE(e4, std::pow(1.0 / (1.0 + ex.lambda_star / chi2), 2.0) + 1e-12);
  }
}

TEST(UrsellOracle, Examples) {
  EXPECT_EQ(ursell_bruteforce(complete_graph(2)), Rational(-1, 2));
  EXPECT_EQ(ursell_bruteforce(complete_graph(3)), Rational(1, 3));
  EXPECT_EQ(ursell_bruteforce(build_graph(1, {})), Rational(1));
  EXPECT_EQ(ursell_bruteforce(build_graph(4, {{0, 1}, {2, 3}})), Rational(0));
  EXPECT_THROW(ursell_bruteforce(complete_graph(7)), ResourceError);
}

TEST(Budget, FromEnvironment) {
  setenv("LLCOUNT_ORACLE_MAX_EVENTS", "7", 1);
  setenv("LLCOUNT_MAX_QUDITS", "6", 1);
  const auto b = OracleBudget::from_env();
  EXPECT_EQ(b.max_events, 7);
  EXPECT_EQ(b.max_full_dim, 64);
  unsetenv("LLCOUNT_ORACLE_MAX_EVENTS");
  unsetenv("LLCOUNT_MAX_QUDITS");
}
