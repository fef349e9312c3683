#include <gtest/gtest.h>

#include "llcount/oracle.hpp"
#include "llcount/qsat.hpp"
#include "test_support.hpp"

using namespace llc;
using llc::testing::Rng;

namespace {

LocalProjector ket_projector(int q, double a, double b) {
  Eigen::VectorXcd v(2);
  v << a, b;
  return llc::testing::state_projector({q}, v);
}

// ε-level forced run for instances whose only polymers are far from the bound
ApplicationOptions precise_forced() {
  ApplicationOptions o;
  o.epsilon = 1e-6;
  o.delta = 0.7;
  o.force = true;
  return o;
}

}  // namespace

TEST(CommutingWeight, Examples) {
  ProjectorSet one(2, 1, {llc::testing::diagonal_projector({0}, {0})});
  EXPECT_EQ(commuting_weight(one, {0}), -0.5);
  ProjectorSet orth(2, 2, {llc::testing::diagonal_projector({0, 1}, {0}), llc::testing::diagonal_projector({0, 1}, {3})});
  EXPECT_EQ(commuting_weight(orth, {0, 1}), 0.0);
}

TEST(CommutingWeight, DiagonalPairsMatchEntryCount) {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    auto a = llc::testing::random_diagonal_projector(rng, {0, 1, 2}, llc::testing::uniform_int(rng, 1, 4));
    auto b = llc::testing::random_diagonal_projector(rng, {2, 3}, llc::testing::uniform_int(rng, 1, 3));
    ProjectorSet ps(2, 4, {a, b});
    // basis states of qubits 0..3 in both images
    int both = 0;
    for (int x = 0; x < 16; ++x) {
      const int ia = x >> 1, ib = x & 3;
      both += (a.matrix(ia, ia).real() > 0.5 && b.matrix(ib, ib).real() > 0.5);
    }
    EXPECT_DOUBLE_EQ(commuting_weight(ps, {0, 1}), both / 16.0);
  }
}

TEST(CommutingWeight, NonCommutingRaises) {
  ProjectorSet ps(2, 1, {ket_projector(0, 1, 0), ket_projector(0, 1, 1)});
  EXPECT_THROW(commuting_weight(ps, {0, 1}), NumericError);
}

TEST(ApproxDimCommuting, EmptyAndSingle) {
  ProjectorSet none(2, 3, {});
  auto r0 = approx_dim_commuting(none);
  EXPECT_EQ(r0.normalized_dim, 1.0);
  EXPECT_EQ(r0.absolute_dim, 8.0);

  ProjectorSet single(2, 3, {llc::testing::diagonal_projector({1}, {0})});
  EXPECT_THROW(approx_dim_commuting(single), HypothesisError);
  auto r = approx_dim_commuting(single, precise_forced());
  EXPECT_NEAR(r.normalized_dim, 0.5, 1e-6);
  EXPECT_NEAR(r.absolute_dim, 4.0, 1e-5);
  EXPECT_FALSE(r.approx.certified);
}

TEST(ApproxDimCommuting, RejectsNonCommuting) {
  ProjectorSet ps(2, 1, {ket_projector(0, 1, 0), ket_projector(0, 1, 1)});
  try {
    approx_dim_commuting(ps);
    FAIL();
  } catch (const HypothesisError& e) {
    EXPECT_NE(e.report().find("do not commute"), std::string::npos);
  }
}

TEST(ApproxDimCommuting, FiveDiagonalProjectorsMatchDiagonalization) {
  // Five rank-1 projectors on overlapping 4-qubit windows of 12 qubits. At this
  // size no overlapping family meets the rank bound, so the run is forced and
  // only accuracy is checked.
  Rng rng(22);
  ApplicationOptions opt;
  opt.epsilon = 0.05;
  opt.delta = 1.0;
  opt.force = true;
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<LocalProjector> v;
    for (int i = 0; i < 5; ++i) v.push_back(llc::testing::random_diagonal_projector(rng, llc::testing::range_set(2 * i, 2 * i + 4), 1));
    ProjectorSet ps(2, 12, v);
    auto r = approx_dim_commuting(ps, opt);
    const auto ex = oracle::exact_dimension_full_diagonalization(2, 12, ps.projectors());
    EXPECT_LE(std::abs(r.normalized_dim - ex.normalized_dim) / ex.normalized_dim, opt.epsilon);
    EXPECT_FALSE(r.approx.certified);
  }
}

TEST(ApproxDimCommuting, DisjointRankOneWithinBound) {
  // 1/16 <= 1/(e^{1+δ} 5) for δ <= ln(16/5) - 1 ≈ 0.163
  Rng rng(29);
  ApplicationOptions opt;
  opt.epsilon = 0.05;
  opt.delta = 0.16;
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<LocalProjector> v;
    for (int i = 0; i < 3; ++i) v.push_back(llc::testing::random_diagonal_projector(rng, llc::testing::range_set(4 * i, 4 * i + 4), 1));
    ProjectorSet ps(2, 12, v);
    auto r = approx_dim_commuting(ps, opt);
    EXPECT_TRUE(r.approx.certified);
    EXPECT_NEAR(r.normalized_dim, std::pow(15.0 / 16, 3), opt.epsilon * std::pow(15.0 / 16, 3));
  }
}

TEST(GeneralWeight, Examples) {
  ProjectorSet one(2, 1, {ket_projector(0, 1, 0)});
  EXPECT_EQ(general_ie_weight(one, {0}), -0.5);
  ProjectorSet pair(2, 1, {ket_projector(0, 1, 0), ket_projector(0, 1, 1)});
  EXPECT_EQ(general_ie_weight(pair, {0, 1}), 0.0);
}

TEST(GeneralWeight, EqualsCommutingWeightOnCommutingSets) {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<LocalProjector> v;
    const bool xbasis = trial % 2;
    for (int i = 0; i < 3; ++i) {
      const int lo = llc::testing::uniform_int(rng, 0, 2);
      std::set<std::int64_t> s;
      const int rank = llc::testing::uniform_int(rng, 1, 3);
      while (static_cast<int>(s.size()) < rank) s.insert(llc::testing::uniform_int(rng, 0, 7));
      auto sup = llc::testing::range_set(lo, lo + 3);
      v.push_back(xbasis ? llc::testing::x_basis_projector(sup, s) : llc::testing::diagonal_projector(sup, s));
    }
    ProjectorSet ps(2, 5, v);
    ASSERT_TRUE(ps.verify_commuting().passed);
    for (const auto& gamma : enumerate_connected_subgraphs(support_dependency_graph(ps), 3))
      EXPECT_NEAR(general_ie_weight(ps, gamma), commuting_weight(ps, gamma), 1e-12);
  }
}

TEST(StabilityCheck, Examples) {
  ProjectorSet zero(2, 2, {LocalProjector{{0, 1}, Matrix::Zero(4, 4)}, LocalProjector{{1}, Matrix::Zero(2, 2)}});
  const auto z = stability_check(zero, 2, 0.1);
  EXPECT_TRUE(z.passed());
  ProjectorSet big(2, 1, {ket_projector(0, 1, 0)});
  const auto b = stability_check(big, 1, 0.1);
  EXPECT_FALSE(b.passed());
  ASSERT_EQ(b.violations.size(), 1u);
  EXPECT_EQ(b.violations[0].magnitude, 0.5);
}

TEST(StabilityCheck, SumsMatchDiagonalizationOracle) {
  Rng rng(24);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<LocalProjector> v;
    for (int i = 0; i < 4; ++i) v.push_back(llc::testing::random_projector(rng, llc::testing::range_set(i, i + 3), 1));
    ProjectorSet ps(2, 6, v);
    const auto g = support_dependency_graph(ps);
    const auto rep = stability_check(ps, 3, 0.1);
    std::vector<double> max_root(3, 0.0);
    for (const auto& u : enumerate_connected_subgraphs(g, 3)) {
      const double sum = oracle::inclusion_exclusion_dimension_sum(2, ps.projectors(), u);
      EXPECT_NEAR(std::abs(general_ie_weight(ps, u)), std::abs(sum), 1e-12);
      max_root[u.size() - 1] = std::max(max_root[u.size() - 1], std::pow(std::abs(sum), 1.0 / u.size()));
    }
    for (int s = 0; s < 3; ++s) EXPECT_NEAR(rep.per_size[s].max_root, max_root[s], 1e-9);
  }
}

TEST(ApproxDimGeneral, SingleProjectorAndCommutingAgreement) {
  ProjectorSet single(2, 2, {ket_projector(1, 1, 1)});
  auto r = approx_dim_general(single, precise_forced());
  EXPECT_NEAR(r.normalized_dim, 0.5, 1e-6);

  Rng rng(25);
  ApplicationOptions opt;
  opt.epsilon = 0.05;
  opt.delta = 0.16;
  std::vector<LocalProjector> v;
  for (int i = 0; i < 3; ++i) v.push_back(llc::testing::random_diagonal_projector(rng, llc::testing::range_set(4 * i, 4 * i + 4), 1));
  ProjectorSet ps(2, 12, v);
  auto c = approx_dim_commuting(ps, opt);
  auto g = approx_dim_general(ps, opt);
  EXPECT_NEAR(c.normalized_dim, g.normalized_dim, 1e-12);
}

TEST(ApproxDimGeneral, ViolationIsReported) {
  ProjectorSet single(2, 1, {ket_projector(0, 1, 0)});
  ApplicationOptions opt;
  opt.delta = 1.0;
  try {
    approx_dim_general(single, opt);
    FAIL();
  } catch (const HypothesisError& e) {
    EXPECT_STREQ(e.what(), "stability condition violated");
    EXPECT_NE(e.report().find("violation"), std::string::npos);
  }
}

TEST(DetectabilityWeight, Examples) {
  ProjectorSet one(2, 1, {ket_projector(0, 1, 0)});
  const Coloring c1 = greedy_coloring(support_dependency_graph(one));
  EXPECT_NEAR(std::abs(detectability_weight(one, c1, 1, {0}) - Complex(-0.5, 0)), 0.0, 1e-15);
  // (v, τ=0) and (v, τ=1): Π² = Π with sign +1
  EXPECT_NEAR(std::abs(detectability_weight(one, c1, 2, {0, 1}) - Complex(0.5, 0)), 0.0, 1e-15);

  ProjectorSet pair(2, 1, {ket_projector(0, 1, 0), ket_projector(0, 1, 1)});
  const Coloring c2 = greedy_coloring(support_dependency_graph(pair));
  EXPECT_NEAR(std::abs(detectability_weight(pair, c2, 1, {0, 1}) - Complex(0.25, 0)), 0.0, 1e-15);
}

TEST(DetectabilityWeight, OrderFollowsRoundColourVertex) {
  // T = 2 on three vertices with colours {1, 0, 1}: (τ, colour, v)
  const Coloring col{{1, 0, 1}, 2};
  const VertexSet gamma{0, 1, 2, 3, 4, 5};  // v*2 + τ
  EXPECT_EQ(detectability_order(col, 2, gamma), (std::vector<int>{1, 0, 2, 1, 0, 2}));
}

TEST(ApproxDimDetectability, SingleProjectorAndCommuting) {
  ProjectorSet single(2, 1, {ket_projector(0, 1, 0)});
  DetectabilityParams p2{2, std::nullopt};
  auto r = approx_dim_detectability(single, p2, precise_forced());
  // clusters of (v,0),(v,1) form K2-blowups with weights ±1/2: slower tail
  EXPECT_NEAR(r.z, 0.5, 1e-5);
  EXPECT_EQ(r.lambda_star, 1.0);
  EXPECT_TRUE(r.lambda_exact);

  Rng rng(26);
  std::vector<LocalProjector> v;
  for (int i = 0; i < 3; ++i) v.push_back(llc::testing::random_diagonal_projector(rng, llc::testing::range_set(4 * i, 4 * i + 4), 1));
  ProjectorSet ps(2, 12, v);
  ApplicationOptions opt;
  opt.epsilon = 0.05;
  opt.delta = 0.16;
  auto a = approx_dim_detectability(ps, DetectabilityParams{1, 1.0}, opt);
  const auto ex = oracle::exact_dimension_full_diagonalization(2, 12, ps.projectors());
  EXPECT_LE(std::abs(a.z - ex.normalized_dim), opt.epsilon * ex.normalized_dim);
  EXPECT_FALSE(a.lambda_exact);
  EXPECT_NEAR(a.additive_part, 1.05 * std::pow(0.5, 0.5), 1e-15);
}

TEST(ApproxDimDetectability, RankConditionDependsOnT) {
  Rng rng(27);
  std::vector<LocalProjector> v;
  for (int i = 0; i < 3; ++i) v.push_back(llc::testing::random_diagonal_projector(rng, llc::testing::range_set(4 * i, 4 * i + 4), 1));
  ProjectorSet ps(2, 12, v);
  ApplicationOptions opt;
  opt.epsilon = 0.05;
  opt.delta = 0.1;
  EXPECT_THROW(approx_dim_detectability(ps, DetectabilityParams{2, 1.0}, opt), HypothesisError);
  const auto g = support_dependency_graph(ps);
  const auto h = detectability_rank_condition(ps, g, greedy_coloring(g), 2, 0.1);
  EXPECT_NEAR(h.bound, std::pow(1.0 / (std::exp(1.1) * 11.0), 2.0), 1e-15);
}

TEST(ApproxDimDetectability, AffineBoundOnNonCommutingPair) {
  // two overlapping rank-1 projectors on 6 qubits; forced, since no
  // instance of this size meets the rank condition
  Rng rng(28);
  std::vector<LocalProjector> v{llc::testing::random_projector(rng, llc::testing::range_set(0, 4), 1),
                                llc::testing::random_projector(rng, llc::testing::range_set(2, 6), 1)};
  ProjectorSet ps(2, 6, v);
  const auto ex = oracle::exact_dimension_full_diagonalization(2, 6, v);
  ApplicationOptions opt;
  opt.epsilon = 0.01;
  opt.delta = 0.5;
  opt.force = true;
  for (int T : {1, 2}) {
    auto r = approx_dim_detectability(ps, DetectabilityParams{T, std::nullopt}, opt);
    EXPECT_NEAR(r.lambda_star, ex.lambda_star, 1e-9);
    EXPECT_LE(std::abs(r.z - ex.normalized_dim), r.relative_coefficient * ex.normalized_dim + r.additive_part);
    const Complex tr = oracle::exact_detectability_trace(2, v, greedy_coloring(support_dependency_graph(ps)), T);
    EXPECT_NEAR(r.z, tr.real(), 0.02);
  }
}
