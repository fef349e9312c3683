#pragma once

// Dimension of ∩ ker Π_v for local projectors: commuting families, general
// families under the inclusion-exclusion stability condition, and the
// detectability-trace affine approximation.

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "llcount/cluster.hpp"
#include "llcount/graph.hpp"
#include "llcount/hypothesis.hpp"
#include "llcount/projector.hpp"

namespace llc {

struct DimensionResult {
  ApproxResult approx;
  VertexBoundReport hypothesis;  // rank condition (commuting); empty for stability mode
  std::optional<CommutationReport> commutation;
  int chromatic_bound = 0;
  int d = 2;
  int qudit_count = 0;
  double normalized_dim = 0.0;
  double absolute_dim = 0.0;  // normalized_dim * d^n
};

namespace detail {

inline double sign_of_size(std::size_t n) { return (n % 2) ? -1.0 : 1.0; }

inline std::vector<int> as_indices(const VertexSet& gamma) { return {gamma.begin(), gamma.end()}; }

inline void fill_dimensions(DimensionResult& r, const ProjectorSet& ps) {
  r.d = ps.d();
  r.qudit_count = ps.qudit_count();
  r.normalized_dim = r.approx.value.real();
  r.absolute_dim = r.normalized_dim * std::pow(static_cast<double>(ps.d()), ps.qudit_count());
}

inline ApproxOptions approx_options(const ApplicationOptions& opt) {
  ApproxOptions ao;
  ao.force = opt.force;
  ao.threads = opt.threads;
  ao.max_order = opt.max_order;
  return ao;
}

}  // namespace detail

/// (-1)^|γ| dim ∩_{v∈γ} im Π_v, normalized on supp(γ). For commuting
/// projectors the ordered product is the projector onto that intersection, so
/// its trace is an integer; a non-integral trace raises NumericError.
inline double commuting_weight(const ProjectorSet& ps, const VertexSet& gamma) {
  const auto idx = detail::as_indices(gamma);
  const double t = normalized_product_trace(ps, idx);
  const double dim = static_cast<double>(ipow(ps.d(), static_cast<int>(ps.support_of(idx).size())));
  const double scaled = t * dim;
  const double rounded = std::round(scaled);
  if (std::abs(scaled - rounded) > ps.tolerances().integrality)
    throw NumericError("product trace " + std::to_string(scaled) +
                       " is not an integer; the projectors do not commute");
  return detail::sign_of_size(gamma.size()) * rounded / dim;
}

/// Theorem hypothesis for commuting families: rank Π_v <= (1/(e^{1+δ}(2Δ+1)))^χ.
inline VertexBoundReport commuting_rank_condition(const ProjectorSet& ps, const DependencyGraph& g, const Coloring& col,
                                                  double delta) {
  std::vector<double> ranks;
  for (int v = 0; v < ps.size(); ++v) ranks.push_back(ps.rank_normalized(v));
  return check_vertex_bound("normalized rank", std::move(ranks), delta, 2.0 * theorem_degree(g) + 1.0, col.colors_used);
}

/// ε-approximation of the normalized dimension of ∩ ker Π_v for commuting projectors.
inline DimensionResult approx_dim_commuting(const ProjectorSet& ps, const ApplicationOptions& opt = {}) {
  DimensionResult r;
  const DependencyGraph g = support_dependency_graph(ps);
  const Coloring col = coloring_for(g, opt.coloring);
  r.chromatic_bound = col.colors_used;
  r.hypothesis = commuting_rank_condition(ps, g, col, opt.delta);
  r.commutation = ps.verify_commuting();
  if (!r.commutation->passed && !opt.force) {
    std::ostringstream os;
    os << "projectors " << r.commutation->worst_u << " and " << r.commutation->worst_v
       << " do not commute (deviation " << r.commutation->max_deviation << ")";
    throw HypothesisError("commutation check failed", os.str());
  }
  if (!r.hypothesis.passed() && !opt.force) throw HypothesisError("rank condition violated", r.hypothesis.describe());
  WeightOracle oracle([&ps](const VertexSet& gamma) { return Complex(commuting_weight(ps, gamma), 0.0); },
                      required_decay_base(opt.delta, theorem_degree(g)));
  r.approx = approx_partition_function(g, oracle, opt.epsilon, opt.delta, theorem_degree(g), detail::approx_options(opt));
  if (!r.hypothesis.passed() || !r.commutation->passed) r.approx.certified = false;
  detail::fill_dimensions(r, ps);
  return r;
}

/// Largest |γ| accepted by general_ie_weight (2^|γ| kernel computations).
inline constexpr int kMaxInclusionExclusionSize = 20;

/// (-1)^|γ| Σ_{T⊆γ} (-1)^|T| dim ∩_{v∈T} ker Π_v, normalized on supp(γ); the
/// empty T contributes 1. Summed exactly as integers over d^|supp(γ)|.
inline double general_ie_weight(const ProjectorSet& ps, const VertexSet& gamma) {
  const int n = static_cast<int>(gamma.size());
  if (n > kMaxInclusionExclusionSize)
    throw ResourceError("inclusion-exclusion over " + std::to_string(n) + " projectors exceeds the cap");
  const auto idx = detail::as_indices(gamma);
  const int s_gamma = static_cast<int>(ps.support_of(idx).size());
  const std::int64_t dim = ps.checked_dim(ps.support_of(idx));
  std::int64_t total = 0;
  std::vector<int> subset;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    subset.clear();
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) subset.push_back(idx[i]);
    const KernelDimension k = kernel_intersection(ps, subset);
    const std::int64_t term = k.nullity * ipow(ps.d(), s_gamma - k.support_size);
    total += (std::popcount(mask) % 2) ? -term : term;
  }
  return detail::sign_of_size(gamma.size()) * static_cast<double>(total) / static_cast<double>(dim);
}

/// Checks |Σ_{S⊆U} (-1)^|S| dim ∩_{v∈S} ker Π_v| <= (1/(e^{1+δ}(2Δ+1)))^|U| for
/// every connected U with |U| <= size_cap. Larger sets are assumed, not checked.
inline ConditionReport stability_check(const ProjectorSet& ps, int size_cap, double delta, ExecutionOptions exec = {}) {
  const DependencyGraph g = support_dependency_graph(ps);
  WeightOracle oracle([&ps](const VertexSet& gamma) { return Complex(general_ie_weight(ps, gamma), 0.0); });
  return check_weight_condition(g, oracle, size_cap, delta, theorem_degree(g), exec);
}

/// ε-approximation of the normalized kernel dimension under the stability
/// condition, checked on every connected set up to the truncation order.
inline DimensionResult approx_dim_general(const ProjectorSet& ps, const ApplicationOptions& opt = {}) {
  DimensionResult r;
  const DependencyGraph g = support_dependency_graph(ps);
  r.chromatic_bound = coloring_for(g, opt.coloring).colors_used;
  WeightOracle oracle([&ps](const VertexSet& gamma) { return Complex(general_ie_weight(ps, gamma), 0.0); },
                      required_decay_base(opt.delta, theorem_degree(g)));
  try {
    r.approx = approx_partition_function(g, oracle, opt.epsilon, opt.delta, theorem_degree(g),
                                         detail::approx_options(opt));
  } catch (const HypothesisError& e) {
    throw HypothesisError("stability condition violated", e.report());
  }
  detail::fill_dimensions(r, ps);
  return r;
}

struct DetectabilityParams {
  int T = 1;
  std::optional<double> lambda_star;  // computed by dense diagonalization when absent
};

/// z with |z - dim| <= ε dim + (1+ε)(1/(1+λ⋆/χ²))^{T/2}.
struct AffineResult {
  double z = 0.0;
  ApproxResult approx;  // on G ⊠ K_T
  VertexBoundReport hypothesis;
  int T = 1;
  int chromatic_bound = 0;
  int product_degree = 0;  // T(Δ+1) - 1
  double lambda_star = 0.0;
  bool lambda_exact = false;
  double epsilon = 0.0;
  double relative_coefficient = 0.0;  // relative part is this times the unknown dim
  double additive_part = 0.0;
  double worst_case_total = 0.0;      // using dim <= 1
  double max_weight_imaginary = 0.0;  // largest |Im w_γ| seen
  int d = 2;
  int qudit_count = 0;
  double absolute_z = 0.0;
};

inline double detectability_additive_part(double epsilon, double lambda_star, int chromatic, int T) {
  const double chi2 = static_cast<double>(chromatic) * chromatic;
  return (1.0 + epsilon) * std::pow(1.0 / (1.0 + lambda_star / chi2), T / 2.0);
}

/// Factor order of a polymer of G ⊠ K_T: vertex index v*T + tau, sorted by
/// (tau, colour of v, v). Returns the projector indices in that order.
inline std::vector<int> detectability_order(const Coloring& col, int T, const VertexSet& gamma) {
  struct Key {
    int tau, color, v;
  };
  std::vector<Key> keys;
  for (int x : gamma) {
    const int v = x / T;
    keys.push_back({x % T, col.class_of.at(static_cast<std::size_t>(v)), v});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    return std::tie(a.tau, a.color, a.v) < std::tie(b.tau, b.color, b.v);
  });
  std::vector<int> order;
  for (const auto& k : keys) order.push_back(k.v);
  return order;
}

/// (-1)^|γ| tr[∏ Π_v] / d^|supp γ| with factors in (τ, i, v) order.
inline Complex detectability_weight(const ProjectorSet& ps, const Coloring& col, int T, const VertexSet& gamma) {
  if (T < 1) throw InvalidArgument("T must be >= 1");
  return detail::sign_of_size(gamma.size()) * normalized_product_trace_complex(ps, detectability_order(col, T, gamma));
}

/// Rank condition rank Π_v <= (1/(e^{1+δ}(2T(Δ+1)-1)))^{Tχ}.
inline VertexBoundReport detectability_rank_condition(const ProjectorSet& ps, const DependencyGraph& g,
                                                      const Coloring& col, int T, double delta) {
  std::vector<double> ranks;
  for (int v = 0; v < ps.size(); ++v) ranks.push_back(ps.rank_normalized(v));
  const double factor = 2.0 * T * (theorem_degree(g) + 1.0) - 1.0;
  return check_vertex_bound("normalized rank", std::move(ranks), delta, factor,
                            static_cast<double>(T) * col.colors_used);
}

/// Approximates the detectability trace tr[(∏_i ∏_{v∈C_i}(I-Π_v))^T]
/// (normalized) with the cluster expansion on G ⊠ K_T.
inline AffineResult approx_dim_detectability(const ProjectorSet& ps, const DetectabilityParams& params,
                                             const ApplicationOptions& opt = {}) {
  if (params.T < 1) throw InvalidArgument("T must be >= 1");
  AffineResult r;
  r.T = params.T;
  r.epsilon = opt.epsilon;
  r.d = ps.d();
  r.qudit_count = ps.qudit_count();
  const DependencyGraph g = support_dependency_graph(ps);
  const Coloring col = coloring_for(g, opt.coloring);
  r.chromatic_bound = col.colors_used;
  r.hypothesis = detectability_rank_condition(ps, g, col, params.T, opt.delta);
  if (!r.hypothesis.passed() && !opt.force) throw HypothesisError("rank condition violated", r.hypothesis.describe());

  if (params.lambda_star) {
    if (*params.lambda_star < 0) throw InvalidArgument("lambda_star must be >= 0");
    r.lambda_star = *params.lambda_star;
  } else {
    try {
      r.lambda_star = spectral_gap(ps).gap;
    } catch (const ResourceError& e) {
      throw ResourceError(std::string(e.what()) + "; supply a certified lower bound on the spectral gap");
    }
    r.lambda_exact = true;
  }

  const DependencyGraph gt = strong_product_with_complete(g, params.T);
  r.product_degree = params.T * (theorem_degree(g) + 1) - 1;
  std::mutex mu;
  double max_imag = 0.0;
  WeightOracle oracle(
      [&](const VertexSet& gamma) {
        const Complex w = detectability_weight(ps, col, params.T, gamma);
        std::lock_guard lock(mu);
        max_imag = std::max(max_imag, std::abs(w.imag()));
        return w;
      },
      required_decay_base(opt.delta, r.product_degree));
  r.approx = approx_partition_function(gt, oracle, opt.epsilon, opt.delta, r.product_degree, detail::approx_options(opt));
  if (!r.hypothesis.passed()) r.approx.certified = false;
  r.max_weight_imaginary = max_imag;
  r.z = r.approx.value.real();
  r.absolute_z = r.z * std::pow(static_cast<double>(ps.d()), ps.qudit_count());
  r.relative_coefficient = opt.epsilon;
  r.additive_part = detectability_additive_part(opt.epsilon, r.lambda_star, std::max(1, col.colors_used), params.T);
  r.worst_case_total = opt.epsilon + r.additive_part;
  return r;
}

}  // namespace llc
