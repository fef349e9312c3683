#pragma once

// Exact brute-force counterparts of every approximation path. These share no
// numeric kernels with the engine: subsets are bitmasks, connectivity is
// union-find, operators are embedded by explicit digit strides and spectra
// come from a full dense eigensolve.

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "llcount/errors.hpp"
#include "llcount/events.hpp"
#include "llcount/graph.hpp"
#include "llcount/projector.hpp"
#include "llcount/ursell.hpp"

namespace llc::oracle {

struct OracleBudget {
  int max_events = 24;           // inclusion-exclusion over 2^max_events subsets
  int max_variables = 26;        // exhaustive assignments
  std::int64_t max_full_dim = std::int64_t{1} << 14;  // dense diagonalization rows
  int max_polymer_model_vertices = 20;

  /// Defaults with LLCOUNT_ORACLE_MAX_EVENTS, LLCOUNT_ORACLE_MAX_VARIABLES,
  /// LLCOUNT_MAX_QUDITS (qubit-equivalent: rows <= 2^value) and
  /// LLCOUNT_ORACLE_MAX_VERTICES applied.
  static OracleBudget from_env() {
    OracleBudget b;
    auto read = [](const char* name, auto& field) {
      if (const char* env = std::getenv(name)) {
        const long long v = std::atoll(env);
        if (v > 0) field = static_cast<std::remove_reference_t<decltype(field)>>(v);
      }
    };
    read("LLCOUNT_ORACLE_MAX_EVENTS", b.max_events);
    read("LLCOUNT_ORACLE_MAX_VARIABLES", b.max_variables);
    read("LLCOUNT_ORACLE_MAX_VERTICES", b.max_polymer_model_vertices);
    if (const char* env = std::getenv("LLCOUNT_MAX_QUDITS")) {
      const int q = std::atoi(env);
      if (q > 0 && q < 40) b.max_full_dim = std::int64_t{1} << q;
    }
    return b;
  }
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

inline std::vector<std::uint64_t> adjacency_masks(const DependencyGraph& g) {
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(g.vertex_count()), 0);
  for (auto [u, v] : g.edges()) {
    adj[u] |= std::uint64_t{1} << v;
    adj[v] |= std::uint64_t{1} << u;
  }
  return adj;
}

/// Connected components of the induced subgraph on `mask`.
inline std::vector<std::uint64_t> mask_components(const std::vector<std::uint64_t>& adj, std::uint64_t mask) {
  std::vector<std::uint64_t> comps;
  while (mask) {
    std::uint64_t comp = mask & (~mask + 1);
    std::uint64_t frontier = comp;
    while (frontier) {
      std::uint64_t next = 0;
      for (std::uint64_t f = frontier; f; f &= f - 1) next |= adj[std::countr_zero(f)];
      next &= mask & ~comp;
      comp |= next;
      frontier = next;
    }
    comps.push_back(comp);
    mask &= ~comp;
  }
  return comps;
}

inline VertexSet mask_to_set(std::uint64_t m) {
  VertexSet s;
  for (; m; m &= m - 1) s.push_back(std::countr_zero(m));
  return s;
}

}  // namespace detail

/// Z = Σ over admissible polymer sets of ∏ w. Admissible sets of connected
/// polymers are in bijection with vertex subsets S (the polymers being the
/// components of G[S]), so Z = Σ_S ∏_{components C of G[S]} w(C).
inline std::complex<double> brute_force_polymer_Z(const DependencyGraph& g,
                                                  const std::function<std::complex<double>(const VertexSet&)>& weight,
                                                  const OracleBudget& budget = {}) {
  const int n = g.vertex_count();
  if (n > budget.max_polymer_model_vertices || n > 30)
    throw ResourceError("polymer model with " + std::to_string(n) + " vertices exceeds the oracle cap");
  const auto adj = detail::adjacency_masks(g);
  std::map<std::uint64_t, std::complex<double>> memo;
  auto w = [&](std::uint64_t comp) {
    auto it = memo.find(comp);
    if (it != memo.end()) return it->second;
    const auto v = weight(detail::mask_to_set(comp));
    memo.emplace(comp, v);
    return v;
  };
  std::complex<double> z = 0.0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    std::complex<double> term = 1.0;
    for (std::uint64_t c : detail::mask_components(adj, s)) term *= w(c);
    z += term;
  }
  return z;
}

/// φ(H) from the definition: every edge subset, kept when spanning and
/// connected, signed by its size, divided by |H|!. Disconnected H gives 0.
inline Rational ursell_bruteforce(const DependencyGraph& h) {
  const auto edges = h.edges();
  const int n = h.vertex_count();
  if (n == 0) throw InvalidArgument("Ursell function of the empty graph");
  if (edges.size() > 20) throw ResourceError("ursell_bruteforce limited to 20 edges");
  BigInt sum = 0;
  const std::uint32_t subsets = 1u << edges.size();
  for (std::uint32_t s = 0; s < subsets; ++s) {
    detail::UnionFind uf(n);
    int merges = 0;
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (s & (1u << e))
        if (uf.unite(edges[e].first, edges[e].second)) ++merges;
    if (merges == n - 1) sum += (std::popcount(s) % 2) ? -1 : 1;
  }
  BigInt fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  return Rational(sum, fact);
}

namespace detail {

/// Per clause: variable list and the value each variable takes when the
/// clause is falsified.
struct FalsifyingAssignment {
  std::vector<int> vars;
  std::vector<char> values;
};

inline std::vector<FalsifyingAssignment> falsifying_assignments(const CnfFormula& f) {
  std::vector<FalsifyingAssignment> out;
  for (const auto& c : f.clauses) {
    FalsifyingAssignment a;
    for (const auto& l : c.literals) {
      a.vars.push_back(l.var);
      a.values.push_back(l.negated ? 1 : 0);
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace detail

/// Σ_{S⊆U} (-1)^|S| Pr[every clause in S is falsified] under the uniform
/// distribution: the exact probability that every clause of U is satisfied.
inline Rational exact_inclusion_exclusion_probability(const CnfFormula& f, const VertexSet& subset,
                                                      const OracleBudget& budget = {}) {
  if (static_cast<int>(subset.size()) > budget.max_events)
    throw ResourceError("inclusion-exclusion over " + std::to_string(subset.size()) + " events exceeds the oracle cap");
  const auto fa = detail::falsifying_assignments(f);
  std::vector<signed char> value(static_cast<std::size_t>(f.variable_count), -1);
  // signed count of subsets by number of fixed variables
  std::map<int, long long> by_fixed;
  std::function<void(std::size_t, int, int)> walk = [&](std::size_t i, int fixed, int parity) {
    if (i == subset.size()) {
      by_fixed[fixed] += parity ? -1 : 1;
      return;
    }
    walk(i + 1, fixed, parity);
    const auto& a = fa.at(static_cast<std::size_t>(subset[i]));
    std::vector<int> newly;
    bool ok = true;
    for (std::size_t j = 0; j < a.vars.size(); ++j) {
      signed char& cur = value[a.vars[j]];
      if (cur < 0) {
        cur = a.values[j];
        newly.push_back(a.vars[j]);
      } else if (cur != a.values[j]) {
        ok = false;
        break;
      }
    }
    if (ok) walk(i + 1, fixed + static_cast<int>(newly.size()), parity ^ 1);
    for (int v : newly) value[v] = -1;
  };
  walk(0, 0, 0);
  Rational p = 0;
  for (auto [fixed, count] : by_fixed) p += Rational(BigInt(count), BigInt(1) << fixed);
  return p;
}

/// Same sum for a generic event family. `joint` must accept any vertex set;
/// events in different components of G[S] are independent by assumption, so
/// callers with connected-set tables may pass `factorized_joint` below.
inline double exact_inclusion_exclusion_probability(const std::function<double(const VertexSet&)>& joint,
                                                    const VertexSet& subset, const OracleBudget& budget = {}) {
  if (static_cast<int>(subset.size()) > budget.max_events)
    throw ResourceError("inclusion-exclusion over " + std::to_string(subset.size()) + " events exceeds the oracle cap");
  double p = 0.0;
  VertexSet s;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << subset.size()); ++m) {
    s.clear();
    for (std::size_t i = 0; i < subset.size(); ++i)
      if (m & (std::uint64_t{1} << i)) s.push_back(subset[i]);
    std::sort(s.begin(), s.end());
    p += ((std::popcount(m) % 2) ? -1.0 : 1.0) * (s.empty() ? 1.0 : joint(s));
  }
  return p;
}

/// Extends a probability table on connected sets to all sets by independence
/// across components of G[S].
inline std::function<double(const VertexSet&)> factorized_joint(const DependencyGraph& g,
                                                                std::function<double(const VertexSet&)> connected) {
  auto adj = detail::adjacency_masks(g);
  return [adj, connected](const VertexSet& s) {
    std::uint64_t mask = 0;
    for (int v : s) mask |= std::uint64_t{1} << v;
    double p = 1.0;
    for (std::uint64_t c : detail::mask_components(adj, mask)) p *= connected(detail::mask_to_set(c));
    return p;
  };
}

/// Satisfying assignments by exhaustive enumeration.
inline std::uint64_t brute_force_sat_count(const CnfFormula& f, const OracleBudget& budget = {}) {
  const int n = f.variable_count;
  if (n > budget.max_variables || n > 40)
    throw ResourceError("exhaustive count over " + std::to_string(n) + " variables exceeds the oracle cap");
  std::vector<std::uint64_t> pos, neg;
  for (const auto& c : f.clauses) {
    std::uint64_t p = 0, q = 0;
    for (const auto& l : c.literals) (l.negated ? q : p) |= std::uint64_t{1} << l.var;
    pos.push_back(p);
    neg.push_back(q);
  }
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    bool sat = true;
    for (std::size_t c = 0; c < pos.size() && sat; ++c) sat = (x & pos[c]) || (~x & neg[c]);
    count += sat;
  }
  return count;
}

/// Pr[every clause of γ falsified] by enumerating the assignments of the
/// variables of γ.
inline Rational cnf_joint_falsify_enumerated(const CnfFormula& f, const VertexSet& gamma) {
  std::vector<int> vars;
  for (int c : gamma)
    for (const auto& l : f.clauses.at(static_cast<std::size_t>(c)).literals) vars.push_back(l.var);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  if (vars.size() > 26) throw ResourceError("too many variables to enumerate");
  std::uint64_t hits = 0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << vars.size()); ++x) {
    bool all_false = true;
    for (int c : gamma) {
      for (const auto& l : f.clauses[static_cast<std::size_t>(c)].literals) {
        const auto pos = std::lower_bound(vars.begin(), vars.end(), l.var) - vars.begin();
        const bool bit = (x >> pos) & 1;
        if (bit != l.negated) {  // literal true
          all_false = false;
          break;
        }
      }
      if (!all_false) break;
    }
    hits += all_false;
  }
  return Rational(BigInt(hits), BigInt(1) << vars.size());
}

namespace detail {

/// Full-space operator of a local matrix: qudits `space` (sorted), support
/// `support` (sorted subset). Composite index digits by ascending qudit, most
/// significant first.
template <class Mat>
void add_embedded(int d, const std::vector<int>& space, const std::vector<int>& support, const Mat& local, Mat& full) {
  const int n = static_cast<int>(space.size());
  const int s = static_cast<int>(support.size());
  std::vector<std::int64_t> stride(static_cast<std::size_t>(s));
  for (int k = 0; k < s; ++k) {
    const auto pos = std::lower_bound(space.begin(), space.end(), support[k]) - space.begin();
    std::int64_t st = 1;
    for (int j = static_cast<int>(pos) + 1; j < n; ++j) st *= d;
    stride[k] = st;
  }
  const std::int64_t dim = full.rows();
  const std::int64_t ldim = local.rows();
  // offset[l] = Σ digit_k(l) * stride[k]
  std::vector<std::int64_t> offset(static_cast<std::size_t>(ldim), 0);
  for (std::int64_t l = 0; l < ldim; ++l) {
    std::int64_t rem = l, off = 0;
    for (int k = s - 1; k >= 0; --k) {
      off += (rem % d) * stride[k];
      rem /= d;
    }
    offset[l] = off;
  }
  for (std::int64_t i = 0; i < dim; ++i) {
    std::int64_t li = 0, base = i;
    for (int k = 0; k < s; ++k) {
      const std::int64_t digit = (i / stride[k]) % d;
      li = li * d + digit;
      base -= digit * stride[k];
    }
    for (std::int64_t lj = 0; lj < ldim; ++lj) full(i, base + offset[lj]) += local(li, lj);
  }
}

inline bool is_real(const Matrix& m) { return m.imag().cwiseAbs().maxCoeff() == 0.0; }

inline bool is_diagonal(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) != 0.0) return false;
  return true;
}

/// Eigenvalues of Σ Π_v (embedded on `space`) for the projectors in `group`.
inline Eigen::VectorXd sum_spectrum(int d, const std::vector<int>& space, const std::vector<LocalProjector>& ps,
                                    const std::vector<int>& group, std::int64_t cap) {
  std::int64_t dim = 1;
  for (std::size_t i = 0; i < space.size(); ++i) {
    dim *= d;
    if (dim > cap) throw ResourceError("full-space dimension exceeds the oracle cap");
  }
  bool diagonal = true, real = true;
  for (int v : group) {
    diagonal = diagonal && is_diagonal(ps[v].matrix);
    real = real && is_real(ps[v].matrix);
  }
  if (diagonal) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
    // Σ Π_v is diagonal too, so its spectrum is its diagonal.
    for (int v : group) {
      const Eigen::VectorXd local = ps[v].matrix.diagonal().real();
      const int s = static_cast<int>(ps[v].support.size());
      std::vector<std::int64_t> stride(static_cast<std::size_t>(s));
      for (int k = 0; k < s; ++k) {
        const auto pos = std::lower_bound(space.begin(), space.end(), ps[v].support[k]) - space.begin();
        std::int64_t st = 1;
        for (std::size_t j = static_cast<std::size_t>(pos) + 1; j < space.size(); ++j) st *= d;
        stride[k] = st;
      }
      for (std::int64_t i = 0; i < dim; ++i) {
        std::int64_t li = 0;
        for (int k = 0; k < s; ++k) li = li * d + (i / stride[k]) % d;
        diag(i) += local(li);
      }
    }
    std::sort(diag.data(), diag.data() + diag.size());
    return diag;
  }
  if (real) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int v : group) {
      const Eigen::MatrixXd local = ps[v].matrix.real();
      add_embedded(d, space, ps[v].support, local, h);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
  Matrix h = Matrix::Zero(dim, dim);
  for (int v : group) add_embedded(d, space, ps[v].support, ps[v].matrix, h);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace detail

struct ExactDimension {
  double normalized_dim = 1.0;
  std::int64_t nullity = 1;  // absolute, on the full space
  double lambda_star = 0.0;  // smallest nonzero eigenvalue of Σ Π_v (0 if none)
};

/// Kernel of Σ Π_v on the full space. The sum splits over support-connected
/// groups (kernels tensor, gaps take the minimum); qudits outside every
/// support contribute a full identity factor.
inline ExactDimension exact_dimension_full_diagonalization(int d, int qudit_count,
                                                           const std::vector<LocalProjector>& ps,
                                                           const OracleBudget& budget = {},
                                                           double threshold = 1e-9) {
  ExactDimension r;
  const int n = static_cast<int>(ps.size());
  detail::UnionFind uf(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const auto& sa = ps[a].support;
      const auto& sb = ps[b].support;
      if (std::find_first_of(sa.begin(), sa.end(), sb.begin(), sb.end()) != sa.end()) uf.unite(a, b);
    }
  std::map<int, std::vector<int>> groups;
  for (int v = 0; v < n; ++v) groups[uf.find(v)].push_back(v);
  std::vector<char> covered(static_cast<std::size_t>(qudit_count), 0);
  double normalized = 1.0;
  std::int64_t nullity = 1;
  for (const auto& [root, group] : groups) {
    std::vector<int> space;
    for (int v : group) space.insert(space.end(), ps[v].support.begin(), ps[v].support.end());
    std::sort(space.begin(), space.end());
    space.erase(std::unique(space.begin(), space.end()), space.end());
    for (int q : space) covered.at(static_cast<std::size_t>(q)) = 1;
    const Eigen::VectorXd ev = detail::sum_spectrum(d, space, ps, group, budget.max_full_dim);
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    std::int64_t zeros = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (ev(i) <= threshold * scale)
        ++zeros;
      else if (r.lambda_star == 0.0 || ev(i) < r.lambda_star)
        r.lambda_star = ev(i);
    }
    nullity *= zeros;
    normalized *= static_cast<double>(zeros) / static_cast<double>(ev.size());
  }
  for (int q = 0; q < qudit_count; ++q)
    if (!covered[q]) nullity *= d;
  r.nullity = nullity;
  r.normalized_dim = normalized;
  return r;
}

/// tr[(∏_{i} ∏_{v∈C_i} (I-Π_v))^T] / d^n with colour classes ascending and
/// vertices ascending inside a class, by dense matrix products on the union
/// of all supports.
inline std::complex<double> exact_detectability_trace(int d, const std::vector<LocalProjector>& ps,
                                                      const Coloring& coloring, int T,
                                                      const OracleBudget& budget = {}) {
  if (T < 1) throw InvalidArgument("T must be >= 1");
  std::vector<int> space;
  for (const auto& p : ps) space.insert(space.end(), p.support.begin(), p.support.end());
  std::sort(space.begin(), space.end());
  space.erase(std::unique(space.begin(), space.end()), space.end());
  std::int64_t dim = 1;
  for (std::size_t i = 0; i < space.size(); ++i) {
    dim *= d;
    if (dim > budget.max_full_dim) throw ResourceError("full-space dimension exceeds the oracle cap");
  }
  std::vector<int> order(ps.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return coloring.class_of.at(a) < coloring.class_of.at(b); });
  Matrix star = Matrix::Identity(dim, dim);
  for (int v : order) {
    Matrix p = Matrix::Zero(dim, dim);
    detail::add_embedded(d, space, ps[v].support, ps[v].matrix, p);
    star = star * (Matrix::Identity(dim, dim) - p);
  }
  Matrix power = Matrix::Identity(dim, dim);
  for (int t = 0; t < T; ++t) power = power * star;
  return power.trace() / static_cast<double>(dim);
}

/// Spectral gap and kernel of Σ Π_v; convenience wrapper.
inline double exact_spectral_gap(int d, int qudit_count, const std::vector<LocalProjector>& ps,
                                 const OracleBudget& budget = {}) {
  return exact_dimension_full_diagonalization(d, qudit_count, ps, budget).lambda_star;
}

/// Σ_{S⊆U} (-1)^|S| dim ∩_{v∈S} ker Π_v on supp(U), normalized, by full
/// diagonalization of each partial sum.
inline double inclusion_exclusion_dimension_sum(int d, const std::vector<LocalProjector>& ps, const VertexSet& u,
                                                const OracleBudget& budget = {}) {
  double total = 0.0;
  std::vector<int> space;
  for (int v : u) space.insert(space.end(), ps[v].support.begin(), ps[v].support.end());
  std::sort(space.begin(), space.end());
  space.erase(std::unique(space.begin(), space.end()), space.end());
  std::vector<LocalProjector> local;
  for (int v : u) local.push_back(ps[v]);
  for (std::uint32_t m = 0; m < (1u << u.size()); ++m) {
    std::vector<LocalProjector> chosen;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (m & (1u << i)) chosen.push_back(local[i]);
    // Kernel on `space`: qudits outside the chosen supports stay free.
    const double dim = exact_dimension_full_diagonalization(d, static_cast<int>(space.size()), [&] {
                         std::vector<LocalProjector> remapped = chosen;
                         for (auto& p : remapped)
                           for (auto& q : p.support)
                             q = static_cast<int>(std::lower_bound(space.begin(), space.end(), q) - space.begin());
                         return remapped;
                       }(), budget).normalized_dim;
    total += ((std::popcount(m) % 2) ? -1.0 : 1.0) * dim;
  }
  return total;
}

}  // namespace llc::oracle
