#pragma once

// Probability that every event of a family occurs, and its k-CNF special case
// (counting satisfying assignments). The events sit on the vertices of a
// strong dependency graph G; the polymer weight of a connected γ is
// (-1)^|γ| Pr[all events of γ fail].

#include <cmath>
#include <functional>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "llcount/cluster.hpp"
#include "llcount/errors.hpp"
#include "llcount/graph.hpp"
#include "llcount/hypothesis.hpp"

namespace llc {

struct Literal {
  int var = 0;  // 0-based
  bool negated = false;
  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Literals sorted by variable, each variable at most once.
struct Clause {
  std::vector<Literal> literals;
  int width() const noexcept { return static_cast<int>(literals.size()); }
};

struct CnfFormula {
  int variable_count = 0;
  std::vector<Clause> clauses;
  std::vector<std::string> warnings;

  int clause_count() const noexcept { return static_cast<int>(clauses.size()); }
  int min_width() const {
    int k = 0;
    for (std::size_t i = 0; i < clauses.size(); ++i) k = i ? std::min(k, clauses[i].width()) : clauses[i].width();
    return k;
  }
  bool uniform() const {
    for (const auto& c : clauses)
      if (c.width() != clauses.front().width()) return false;
    return true;
  }
};

/// Builds a clause from DIMACS-style signed 1-based literals.
inline Clause make_clause(const std::vector<int>& dimacs_literals, int line = 0) {
  Clause c;
  for (int lit : dimacs_literals) {
    if (lit == 0) throw ParseError("literal 0 inside a clause", line);
    c.literals.push_back(Literal{std::abs(lit) - 1, lit < 0});
  }
  std::sort(c.literals.begin(), c.literals.end(), [](const Literal& a, const Literal& b) { return a.var < b.var; });
  for (std::size_t i = 1; i < c.literals.size(); ++i)
    if (c.literals[i].var == c.literals[i - 1].var)
      throw ParseError("variable " + std::to_string(c.literals[i].var + 1) + " repeated in a clause", line);
  return c;
}

/// DIMACS CNF. The "p cnf n m" header is optional; without it n is the
/// largest variable seen. Lines starting with 'c' are comments and a line
/// starting with '%' ends the input. A clause repeating a variable (in either
/// polarity) is rejected; clauses of different widths produce a warning.
inline CnfFormula parse_dimacs(std::istream& in) {
  CnfFormula f;
  std::optional<int> declared_vars, declared_clauses;
  std::vector<int> pending;
  int pending_line = 0;
  int max_var = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const char lead = line[first];
    if (lead == 'c') continue;
    if (lead == '%') break;
    if (lead == 'p') {
      if (declared_vars) throw ParseError("duplicate problem line", lineno);
      if (!f.clauses.empty() || !pending.empty()) throw ParseError("problem line after clauses", lineno);
      std::istringstream ps(line.substr(first + 1));
      std::string fmt;
      long long n = -1, m = -1;
      std::string extra;
      if (!(ps >> fmt >> n >> m) || fmt != "cnf" || n < 0 || m < 0 || (ps >> extra))
        throw ParseError("malformed problem line, expected 'p cnf <vars> <clauses>'", lineno);
      declared_vars = static_cast<int>(n);
      declared_clauses = static_cast<int>(m);
      continue;
    }
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(tok, &used);
      } catch (const std::exception&) {
        throw ParseError("unexpected token '" + tok + "'", lineno);
      }
      if (used != tok.size()) throw ParseError("unexpected token '" + tok + "'", lineno);
      if (v == 0) {
        if (pending.empty()) throw ParseError("empty clause", lineno);
        f.clauses.push_back(make_clause(pending, pending_line));
        pending.clear();
        continue;
      }
      const long long a = v < 0 ? -v : v;
      if (declared_vars && a > *declared_vars)
        throw ParseError("variable " + std::to_string(a) + " exceeds declared count " + std::to_string(*declared_vars),
                         lineno);
      if (a > 1'000'000'000) throw ParseError("variable index out of range", lineno);
      if (pending.empty()) pending_line = lineno;
      pending.push_back(static_cast<int>(v));
      max_var = std::max(max_var, static_cast<int>(a));
    }
  }
  if (!pending.empty()) {
    f.clauses.push_back(make_clause(pending, pending_line));
    f.warnings.push_back("last clause not terminated by 0");
  }
  f.variable_count = declared_vars.value_or(max_var);
  if (declared_clauses && *declared_clauses != f.clause_count())
    throw ParseError("problem line declares " + std::to_string(*declared_clauses) + " clauses, found " +
                     std::to_string(f.clause_count()));
  if (!f.uniform())
    f.warnings.push_back("clauses have different widths; the k-condition uses the smallest width " +
                         std::to_string(f.min_width()));
  return f;
}

inline CnfFormula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

/// One vertex per clause, an edge when two clauses share a variable.
inline DependencyGraph cnf_dependency_graph(const CnfFormula& f) {
  std::vector<std::vector<int>> by_var(static_cast<std::size_t>(f.variable_count));
  for (int c = 0; c < f.clause_count(); ++c)
    for (const auto& l : f.clauses[c].literals) {
      if (l.var < 0 || l.var >= f.variable_count) throw InvalidArgument("literal variable out of range");
      by_var[l.var].push_back(c);
    }
  std::vector<std::pair<int, int>> edges;
  for (const auto& cs : by_var)
    for (std::size_t i = 0; i < cs.size(); ++i)
      for (std::size_t j = i + 1; j < cs.size(); ++j) edges.emplace_back(cs[i], cs[j]);
  return DependencyGraph(f.clause_count(), edges);
}

namespace detail {

/// Number of variables fixed by falsifying every clause of γ, or -1 if the
/// forced values conflict.
inline int forced_variable_count(const CnfFormula& f, const VertexSet& gamma) {
  std::unordered_map<int, bool> forced;
  for (int c : gamma)
    for (const auto& l : f.clauses.at(static_cast<std::size_t>(c)).literals) {
      // Falsifying a literal sets x = false for x and x = true for ¬x.
      const bool value = l.negated;
      auto [it, fresh] = forced.emplace(l.var, value);
      if (!fresh && it->second != value) return -1;
    }
  return static_cast<int>(forced.size());
}

}  // namespace detail

/// (-1)^|γ| 2^{-|vars(γ)|} when the falsifying assignments of the clauses of γ
/// agree, otherwise 0.
inline double cnf_polymer_weight(const CnfFormula& f, const VertexSet& gamma) {
  const int vars = detail::forced_variable_count(f, gamma);
  if (vars < 0) return 0.0;
  const double mag = std::ldexp(1.0, -vars);
  return (gamma.size() % 2) ? -mag : mag;
}

inline Rational cnf_polymer_weight_exact(const CnfFormula& f, const VertexSet& gamma) {
  const int vars = detail::forced_variable_count(f, gamma);
  if (vars < 0) return Rational(0);
  Rational mag(BigInt(1), BigInt(1) << vars);
  return (gamma.size() % 2) ? Rational(-mag) : mag;
}

/// Pr[all events in U fail], for U a connected vertex set of the dependency
/// graph. `per_event` optionally lists Pr[E_v fails] for the hypothesis check;
/// without it the result is marked conditional.
struct EventOracle {
  std::function<double(const VertexSet&)> joint_complement_probability;
  std::optional<std::vector<double>> per_event;
};

struct ProbabilityResult {
  ApproxResult approx;
  VertexBoundReport hypothesis;
  bool hypothesis_checked = false;
  int chromatic_bound = 0;
  double probability = 0.0;
  bool conditional = false;
};

namespace detail {

inline ProbabilityResult run_probability(const DependencyGraph& g, WeightFunction weight,
                                         const std::optional<std::vector<double>>& per_event,
                                         const ApplicationOptions& opt, std::string quantity = "Pr[not E_v]") {
  ProbabilityResult r;
  const Coloring col = coloring_for(g, opt.coloring);
  const int deg = theorem_degree(g);
  r.chromatic_bound = col.colors_used;
  if (per_event) {
    if (static_cast<int>(per_event->size()) != g.vertex_count())
      throw InvalidArgument("per-event probability list does not match the vertex count");
    r.hypothesis = check_vertex_bound(std::move(quantity), *per_event, opt.delta, 2.0 * deg + 1.0, col.colors_used);
    r.hypothesis_checked = true;
    if (!r.hypothesis.passed() && !opt.force)
      throw HypothesisError("per-event probability bound violated", r.hypothesis.describe());
  } else {
    r.conditional = true;
  }
  WeightOracle oracle(std::move(weight), required_decay_base(opt.delta, deg));
  ApproxOptions ao;
  ao.force = opt.force;
  ao.threads = opt.threads;
  ao.max_order = opt.max_order;
  r.approx = approx_partition_function(g, oracle, opt.epsilon, opt.delta, deg, ao);
  r.probability = r.approx.value.real();
  if (r.hypothesis_checked && !r.hypothesis.passed()) r.approx.certified = false;
  return r;
}

}  // namespace detail

/// ε-approximation of Pr[∩ E_v] for events with strong dependency graph g.
/// Hypothesis: Pr[not E_v] <= (1/(e^{1+δ}(2Δ+1)))^χ with χ the colour count.
inline ProbabilityResult approx_probability_intersection(const DependencyGraph& g, const EventOracle& events,
                                                         const ApplicationOptions& opt = {}) {
  if (!events.joint_complement_probability) throw InvalidArgument("event oracle has no probability function");
  auto fn = events.joint_complement_probability;
  WeightFunction w = [fn](const VertexSet& gamma) {
    const double p = fn(gamma);
    if (!(p >= 0.0 && p <= 1.0)) throw NumericError("event oracle returned a value outside [0, 1]");
    return Complex((gamma.size() % 2) ? -p : p, 0.0);
  };
  return detail::run_probability(g, std::move(w), events.per_event, opt);
}

/// k ≥ (χ/ln 2)(ln(2Δ+1) + 1 + δ), with k the smallest clause width.
struct KConditionReport {
  int k = 0;
  int chromatic = 0;
  int degree = 0;
  double delta = 0.0;
  double required_k = 0.0;
  double margin() const noexcept { return k - required_k; }
  bool passed() const noexcept { return k >= required_k * (1 - 1e-12); }

  std::string describe() const {
    std::ostringstream os;
    os << "k-condition: k = " << k << " >= (chi/ln 2)(ln(2*Delta+1)+1+delta) = " << required_k << " (chi = " << chromatic
       << ", Delta = " << degree << ", delta = " << delta << "): " << (passed() ? "pass" : "FAIL") << ", margin "
       << margin() << "\n";
    return os.str();
  }
};

inline KConditionReport k_condition(const CnfFormula& f, const Coloring& col, int degree, double delta) {
  KConditionReport r;
  r.k = f.min_width();
  r.chromatic = col.colors_used;
  r.degree = degree;
  r.delta = delta;
  r.required_k = col.colors_used / std::log(2.0) * (std::log(2.0 * degree + 1.0) + 1.0 + delta);
  return r;
}

struct SatCountResult {
  ProbabilityResult probability;
  KConditionReport k_condition;
  int variable_count = 0;
  double count = 0.0;       // 2^n times the probability
  double log2_count = 0.0;
  std::optional<Rational> exact_log_probability;  // T_m in exact arithmetic
};

struct SatOptions : ApplicationOptions {
  bool exact_rational = false;
};

/// ε-approximation of the number of satisfying assignments of a k-CNF.
inline SatCountResult count_satisfying(const CnfFormula& f, const SatOptions& opt = {}) {
  SatCountResult r;
  r.variable_count = f.variable_count;
  const DependencyGraph g = cnf_dependency_graph(f);
  const Coloring col = coloring_for(g, opt.coloring);
  r.k_condition = k_condition(f, col, theorem_degree(g), opt.delta);
  if (f.clause_count() > 0 && !r.k_condition.passed() && !opt.force)
    throw HypothesisError("k-condition violated", r.k_condition.describe());

  std::vector<double> per_event;
  for (const auto& c : f.clauses) per_event.push_back(std::ldexp(1.0, -c.width()));
  ApplicationOptions ao = opt;
  ao.coloring = col;
  r.probability = detail::run_probability(
      g, [&f](const VertexSet& gamma) { return Complex(cnf_polymer_weight(f, gamma), 0.0); }, per_event, ao,
      "Pr[clause falsified]");

  if (opt.exact_rational) {
    const Rational t = truncated_expansion_exact(
        g, [&f](const VertexSet& gamma) { return cnf_polymer_weight_exact(f, gamma); },
        r.probability.approx.truncation_order, ExecutionOptions{opt.threads});
    r.exact_log_probability = t;
    const double lt = static_cast<double>(t);
    r.probability.approx.log_value = Complex(lt, 0.0);
    r.probability.approx.value = Complex(std::exp(lt), 0.0);
    r.probability.probability = std::exp(lt);
  }
  const double lp = r.probability.approx.log_value.real();
  r.log2_count = f.variable_count + lp / std::log(2.0);
  r.count = std::ldexp(r.probability.probability, f.variable_count);
  return r;
}

}  // namespace llc
