#pragma once

// Per-vertex hypotheses of the form  q_v <= (1/(e^{1+δ} D))^p,  where q_v is a
// probability or a normalized rank, D is 2Δ+1 (or 2T(Δ+1)-1 on G ⊠ K_T) and p
// is the colour count (times T).

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "llcount/graph.hpp"

namespace llc {

struct VertexBoundReport {
  std::string quantity;  // what q_v is, for messages
  double delta = 0.0;
  double degree_factor = 0.0;  // D
  double power = 0.0;          // p
  double bound = 0.0;          // (1/(e^{1+δ} D))^p
  std::vector<double> values;
  std::vector<int> violating;
  int worst_vertex = -1;
  double worst_value = 0.0;

  bool passed() const noexcept { return violating.empty(); }

  /// bound - worst value (negative on failure).
  double margin() const noexcept { return bound - worst_value; }

  std::string describe() const {
    std::ostringstream os;
    os << quantity << " <= (1/(e^(1+delta)*" << degree_factor << "))^" << power << " = " << bound
       << " with delta = " << delta << ": " << (passed() ? "pass" : "FAIL") << "\n";
    if (worst_vertex >= 0)
      os << "  worst vertex " << worst_vertex << ": " << worst_value << " (margin " << margin() << ")\n";
    for (int v : violating) os << "  violation at vertex " << v << ": " << values[v] << " > " << bound << "\n";
    return os.str();
  }
};

/// Knobs shared by the counting applications.
struct ApplicationOptions {
  double epsilon = 0.01;
  double delta = 0.1;
  bool force = false;       // run even when a hypothesis fails (no certificate)
  unsigned threads = 1;
  int max_order = 0;        // 0: default cap
  std::optional<Coloring> coloring;  // greedy colouring when absent
};

inline Coloring coloring_for(const DependencyGraph& g, const std::optional<Coloring>& given) {
  if (!given) return greedy_coloring(g);
  if (static_cast<int>(given->class_of.size()) != g.vertex_count())
    throw InvalidArgument("colouring has " + std::to_string(given->class_of.size()) + " entries for " +
                          std::to_string(g.vertex_count()) + " vertices");
  if (!is_proper(g, *given)) throw InvalidArgument("supplied colouring is not proper");
  return *given;
}

inline double vertex_bound(double delta, double degree_factor, double power) {
  return std::pow(1.0 / (std::exp(1.0 + delta) * degree_factor), power);
}

inline VertexBoundReport check_vertex_bound(std::string quantity, std::vector<double> values, double delta,
                                            double degree_factor, double power) {
  VertexBoundReport r;
  r.quantity = std::move(quantity);
  r.delta = delta;
  r.degree_factor = degree_factor;
  r.power = power;
  r.bound = vertex_bound(delta, degree_factor, power);
  r.values = std::move(values);
  for (int v = 0; v < static_cast<int>(r.values.size()); ++v) {
    if (r.worst_vertex < 0 || r.values[v] > r.worst_value) {
      r.worst_vertex = v;
      r.worst_value = r.values[v];
    }
    if (r.values[v] > r.bound * (1 + 1e-12)) r.violating.push_back(v);
  }
  return r;
}

/// Largest δ with worst <= (1/(e^{1+δ} D))^p, i.e. -ln(worst)/p - ln D - 1.
/// Infinite when worst is 0; may be <= 0 when no positive δ works.
inline double max_feasible_delta(double worst, double degree_factor, double power) {
  if (worst <= 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(worst) / power - std::log(degree_factor) - 1.0;
}

}  // namespace llc
