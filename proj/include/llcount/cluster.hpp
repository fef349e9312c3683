#pragma once

// Abstract polymer models whose polymers are connected induced subgraphs of a
// host graph G, two polymers being compatible iff they are vertex-disjoint and
// no edge of G joins them. Provides cluster listing, the truncated cluster
// expansion T_m(Z) of log Z and the resulting approximation of Z.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "llcount/errors.hpp"
#include "llcount/graph.hpp"
#include "llcount/parallel.hpp"
#include "llcount/ursell.hpp"

namespace llc {

using Complex = std::complex<double>;

struct Polymer {
  VertexSet vertices;
  int size() const noexcept { return static_cast<int>(vertices.size()); }
  friend bool operator==(const Polymer&, const Polymer&) = default;
};

namespace detail {

inline bool sorted_intersect(const std::vector<int>& a, const std::vector<int>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j)
      ++i;
    else
      ++j;
  }
  return false;
}

inline VertexSet closed_neighborhood(const DependencyGraph& g, const VertexSet& s) {
  VertexSet out = s;
  for (int v : s)
    for (int u : g.neighbors(v)) out.push_back(u);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// True iff the polymers share a vertex or an edge of g joins them. Every
/// polymer is incompatible with itself.
inline bool incompatible(const Polymer& a, const Polymer& b, const DependencyGraph& g) {
  if (detail::sorted_intersect(a.vertices, b.vertices)) return true;
  for (int v : a.vertices)
    for (int u : g.neighbors(v))
      if (std::binary_search(b.vertices.begin(), b.vertices.end(), u)) return true;
  return false;
}

/// Incompatibility graph H of an ordered tuple of polymers.
inline DependencyGraph incompatibility_graph(const std::vector<Polymer>& tuple, const DependencyGraph& g) {
  std::vector<std::pair<int, int>> e;
  const int n = static_cast<int>(tuple.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (incompatible(tuple[i], tuple[j], g)) e.emplace_back(i, j);
  return DependencyGraph(n, e);
}

using WeightFunction = std::function<Complex(const VertexSet&)>;

/// Polymer weights with a synchronised memo keyed by the canonical vertex set.
/// `decay_base` is the oracle's own claim that |w| <= decay_base^|polymer|
/// (0 when it makes no claim).
class WeightOracle {
 public:
  explicit WeightOracle(WeightFunction fn, double decay_base = 0.0) : fn_(std::move(fn)), decay_base_(decay_base) {}

  Complex operator()(const VertexSet& polymer) const {
    {
      std::lock_guard lock(mu_);
      auto it = memo_.find(polymer);
      if (it != memo_.end()) return it->second;
    }
    const Complex w = fn_(polymer);
    std::lock_guard lock(mu_);
    memo_.emplace(polymer, w);
    return w;
  }

  double decay_base() const noexcept { return decay_base_; }

 private:
  WeightFunction fn_;
  double decay_base_;
  mutable std::mutex mu_;
  mutable std::map<VertexSet, Complex> memo_;
};

/// Unordered multiset of polymers (sorted ids into a polymer list) whose
/// incompatibility graph is connected.
struct Cluster {
  std::vector<std::uint32_t> members;
  int total_size = 0;
};

/// Number of distinct orderings of the multiset: n! / prod(multiplicity!).
inline std::uint64_t ordering_count(const Cluster& c) {
  std::uint64_t r = 1;
  std::size_t i = 0;
  int placed = 0;
  while (i < c.members.size()) {
    std::size_t j = i;
    while (j < c.members.size() && c.members[j] == c.members[i]) ++j;
    // Multiply by C(placed + run, run) incrementally.
    for (std::size_t r_i = 1; r_i <= j - i; ++r_i) {
      ++placed;
      r = r * static_cast<std::uint64_t>(placed) / r_i;
    }
    i = j;
  }
  return r;
}

struct ClusterEnumeration {
  std::vector<Polymer> polymers;  // canonical order
  std::vector<Cluster> clusters;  // by total size, then member ids
};

namespace detail {

/// Polymers of size <= m, indexed for fast incompatibility queries.
struct PolymerIndex {
  std::vector<VertexSet> sets;
  std::vector<VertexSet> closed;                // closed neighbourhoods
  std::vector<std::vector<std::uint32_t>> by_vertex;  // vertex -> polymer ids containing it

  PolymerIndex(const DependencyGraph& g, std::vector<VertexSet> polymer_sets) : sets(std::move(polymer_sets)) {
    closed.reserve(sets.size());
    by_vertex.assign(static_cast<std::size_t>(g.vertex_count()), {});
    for (std::uint32_t id = 0; id < sets.size(); ++id) {
      closed.push_back(closed_neighborhood(g, sets[id]));
      for (int v : sets[id]) by_vertex[v].push_back(id);
    }
  }

  bool incompatible(std::uint32_t a, std::uint32_t b) const { return sorted_intersect(sets[a], closed[b]); }
  int size_of(std::uint32_t id) const { return static_cast<int>(sets[id].size()); }
};

/// Builds the typed incompatibility graph of a sorted multiset.
inline TypedGraph typed_graph(const PolymerIndex& idx, const std::vector<std::uint32_t>& members,
                              std::vector<std::uint32_t>* distinct_out = nullptr) {
  std::vector<std::uint32_t> distinct;
  TypedGraph h;
  for (std::size_t i = 0; i < members.size();) {
    std::size_t j = i;
    while (j < members.size() && members[j] == members[i]) ++j;
    distinct.push_back(members[i]);
    h.multiplicity.push_back(static_cast<int>(j - i));
    i = j;
  }
  const std::size_t t = distinct.size();
  if (t > 32) throw ResourceError("cluster has more than 32 distinct polymers");
  h.adjacency.assign(t, 0);
  for (std::size_t a = 0; a < t; ++a)
    for (std::size_t b = a + 1; b < t; ++b)
      if (idx.incompatible(distinct[a], distinct[b])) {
        h.adjacency[a] |= (1u << b);
        h.adjacency[b] |= (1u << a);
      }
  if (distinct_out) *distinct_out = std::move(distinct);
  return h;
}

/// Cap on clusters held in memory during generation; LLCOUNT_MAX_CLUSTERS overrides it.
inline std::size_t max_pending_clusters() {
  if (const char* env = std::getenv("LLCOUNT_MAX_CLUSTERS")) {
    const long long v = std::atoll(env);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::size_t{20'000'000};
}

/// Level-by-level cluster generation over the polymers listed in `active`
/// (ids into idx). Every connected multiset of total size s > 1 has a member
/// whose removal leaves a connected multiset (a leaf of a spanning tree of H),
/// so extending every cluster of size s' < s by one incompatible polymer and
/// deduplicating reaches every cluster of size s exactly once.
/// `on_level(s, clusters)` receives the finished, sorted level s.
template <class OnLevel>
void generate_clusters(const PolymerIndex& idx, const std::vector<std::uint32_t>& active, int m, unsigned threads,
                       OnLevel&& on_level) {
  using Multiset = std::vector<std::uint32_t>;
  std::vector<std::vector<Multiset>> buckets(static_cast<std::size_t>(m) + 1);
  std::vector<char> is_active(idx.sets.size(), 0);
  for (auto id : active) is_active[id] = 1;
  for (auto id : active) {
    const int s = idx.size_of(id);
    if (s <= m) buckets[s].push_back({id});
  }

  for (int s = 1; s <= m; ++s) {
    auto& level = buckets[s];
    std::sort(level.begin(), level.end());
    level.erase(std::unique(level.begin(), level.end()), level.end());
    on_level(s, static_cast<const std::vector<Multiset>&>(level));
    if (s == m) break;

    const std::size_t workers = worker_count(level.size(), threads);
    std::vector<std::vector<std::vector<Multiset>>> local(workers,
                                                          std::vector<std::vector<Multiset>>(static_cast<std::size_t>(m) + 1));
    parallel_chunks(level.size(), threads, [&](std::size_t w, std::size_t lo, std::size_t hi) {
      std::vector<int> near;
      std::vector<std::uint32_t> candidates;
      for (std::size_t c = lo; c < hi; ++c) {
        const Multiset& cl = level[c];
        near.clear();
        for (std::size_t i = 0; i < cl.size(); ++i) {
          if (i > 0 && cl[i] == cl[i - 1]) continue;
          near.insert(near.end(), idx.closed[cl[i]].begin(), idx.closed[cl[i]].end());
        }
        std::sort(near.begin(), near.end());
        near.erase(std::unique(near.begin(), near.end()), near.end());
        candidates.clear();
        for (int v : near)
          for (auto p : idx.by_vertex[v])
            if (is_active[p] && idx.size_of(p) <= m - s) candidates.push_back(p);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        for (auto p : candidates) {
          Multiset next = cl;
          next.insert(std::upper_bound(next.begin(), next.end(), p), p);
          local[w][static_cast<std::size_t>(s + idx.size_of(p))].push_back(std::move(next));
        }
      }
    });
    std::size_t pending = 0;
    for (auto& lw : local)
      for (int t = s + 1; t <= m; ++t) {
        auto& dst = buckets[t];
        auto& src = lw[t];
        dst.insert(dst.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end()));
      }
    for (int t = s + 1; t <= m; ++t) pending += buckets[t].size();
    if (pending > max_pending_clusters())
      throw ResourceError("cluster enumeration holds " + std::to_string(pending) + " clusters at size " +
                          std::to_string(s + 1) + ", above the cap " + std::to_string(max_pending_clusters()) +
                          " (LLCOUNT_MAX_CLUSTERS)");
    std::vector<Multiset>().swap(level);
  }
}

inline std::vector<VertexSet> polymer_sets(const DependencyGraph& g, int m) {
  return enumerate_connected_subgraphs(g, m);
}

/// Compensated summation, applied to real and imaginary parts separately.
struct KahanComplex {
  double re = 0, im = 0, cre = 0, cim = 0;
  void add(Complex x) {
    const double yr = x.real() - cre;
    const double tr = re + yr;
    cre = (tr - re) - yr;
    re = tr;
    const double yi = x.imag() - cim;
    const double ti = im + yi;
    cim = (ti - im) - yi;
    im = ti;
  }
  Complex value() const { return {re, im}; }
};

inline long double factorial_ld(int n) {
  long double r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace detail

/// Every cluster of total size <= m over all polymers of g, each exactly once.
inline ClusterEnumeration enumerate_clusters(const DependencyGraph& g, int m, ExecutionOptions exec = {}) {
  if (m < 1) throw InvalidArgument("cluster size bound must be >= 1");
  detail::PolymerIndex idx(g, detail::polymer_sets(g, m));
  std::vector<std::uint32_t> all(idx.sets.size());
  std::iota(all.begin(), all.end(), 0u);
  ClusterEnumeration out;
  for (auto& s : idx.sets) out.polymers.push_back(Polymer{s});
  detail::generate_clusters(idx, all, m, exec.threads, [&](int s, const std::vector<std::vector<std::uint32_t>>& level) {
    for (const auto& ms : level) out.clusters.push_back(Cluster{ms, s});
  });
  return out;
}

/// T_m split by cluster size: by_size[s] is the sum of all cluster terms with
/// |Γ| = s (index 0 is unused and zero).
struct ExpansionResult {
  Complex value;
  std::vector<Complex> by_size;
  std::size_t polymer_count = 0;   // polymers of size <= m with nonzero weight
  std::size_t cluster_count = 0;   // clusters over those polymers

  /// T_k for k <= m, summed in size order.
  Complex partial(int k) const {
    detail::KahanComplex acc;
    for (int s = 1; s <= k && s < static_cast<int>(by_size.size()); ++s) acc.add(by_size[s]);
    return acc.value();
  }
};

namespace detail {

/// Evaluates weights of every polymer of size <= m (in parallel, in canonical
/// order) and keeps the nonzero ones.
struct WeightedPolymers {
  PolymerIndex index;
  std::vector<Complex> weights;
  std::vector<std::uint32_t> active;
};

inline WeightedPolymers weigh_polymers(const DependencyGraph& g, const WeightOracle& oracle, int m, unsigned threads) {
  WeightedPolymers wp{PolymerIndex(g, polymer_sets(g, m)), {}, {}};
  wp.weights = parallel_map(wp.index.sets.size(), threads, [&](std::size_t i) { return oracle(wp.index.sets[i]); });
  for (std::uint32_t id = 0; id < wp.weights.size(); ++id) {
    const Complex w = wp.weights[id];
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
      throw NumericError("non-finite polymer weight");
    if (w != Complex(0.0, 0.0)) wp.active.push_back(id);
  }
  return wp;
}

inline ExpansionResult expand_weighted(const WeightedPolymers& wp, int m, unsigned threads) {
  ExpansionResult r;
  r.by_size.assign(static_cast<std::size_t>(m) + 1, Complex{});
  r.polymer_count = wp.active.size();
  generate_clusters(wp.index, wp.active, m, threads, [&](int s, const std::vector<std::vector<std::uint32_t>>& level) {
    const std::size_t workers = worker_count(level.size(), threads);
    std::vector<UrsellCache> caches(workers);
    std::vector<Complex> terms(level.size());
    parallel_chunks(level.size(), threads, [&](std::size_t w, std::size_t lo, std::size_t hi) {
      std::vector<std::uint32_t> distinct;
      for (std::size_t c = lo; c < hi; ++c) {
        const TypedGraph h = typed_graph(wp.index, level[c], &distinct);
        const __int128 signed_count = caches[w].signed_count(h);
        // multiplicity * phi = (n!/prod k!) * C/n! = C / prod k!
        long double coef = static_cast<long double>(signed_count);
        Complex prod(1.0, 0.0);
        for (std::size_t t = 0; t < distinct.size(); ++t) {
          coef /= factorial_ld(h.multiplicity[t]);
          const Complex wt = wp.weights[distinct[t]];
          for (int k = 0; k < h.multiplicity[t]; ++k) prod *= wt;
        }
        terms[c] = static_cast<double>(coef) * prod;
      }
    });
    KahanComplex acc;
    for (const auto& t : terms) acc.add(t);
    r.by_size[s] = acc.value();
    r.cluster_count += level.size();
  });
  r.value = r.partial(m);
  return r;
}

}  // namespace detail

/// Truncated cluster expansion with per-size partial sums.
inline ExpansionResult expand(const DependencyGraph& g, const WeightOracle& oracle, int m, ExecutionOptions exec = {}) {
  if (m < 1) throw InvalidArgument("truncation order must be >= 1");
  return detail::expand_weighted(detail::weigh_polymers(g, oracle, m, exec.threads), m, exec.threads);
}

/// T_m(Z): sum over clusters with |Γ| <= m of φ(H_Γ) ∏ w_γ.
inline Complex truncated_expansion(const DependencyGraph& g, const WeightOracle& oracle, int m,
                                   ExecutionOptions exec = {}) {
  return expand(g, oracle, m, exec).value;
}

using ExactWeightFunction = std::function<Rational(const VertexSet&)>;

/// T_m(Z) in exact rational arithmetic, for weights that are themselves
/// rational (e.g. the dyadic CNF weights).
inline Rational truncated_expansion_exact(const DependencyGraph& g, const ExactWeightFunction& weight, int m,
                                          ExecutionOptions exec = {}) {
  if (m < 1) throw InvalidArgument("truncation order must be >= 1");
  detail::PolymerIndex idx(g, detail::polymer_sets(g, m));
  std::vector<Rational> weights =
      parallel_map(idx.sets.size(), exec.threads, [&](std::size_t i) { return weight(idx.sets[i]); });
  std::vector<std::uint32_t> active;
  for (std::uint32_t id = 0; id < weights.size(); ++id)
    if (weights[id] != 0) active.push_back(id);
  Rational total = 0;
  detail::generate_clusters(idx, active, m, exec.threads, [&](int, const std::vector<std::vector<std::uint32_t>>& level) {
    const std::size_t workers = worker_count(level.size(), exec.threads);
    std::vector<UrsellCache> caches(workers);
    std::vector<Rational> terms(level.size());
    parallel_chunks(level.size(), exec.threads, [&](std::size_t w, std::size_t lo, std::size_t hi) {
      std::vector<std::uint32_t> distinct;
      for (std::size_t c = lo; c < hi; ++c) {
        const TypedGraph h = detail::typed_graph(idx, level[c], &distinct);
        Rational term = to_rational(caches[w].signed_count(h));
        for (std::size_t t = 0; t < distinct.size(); ++t) {
          term /= Rational(factorial(h.multiplicity[t]));
          for (int k = 0; k < h.multiplicity[t]; ++k) term *= weights[distinct[t]];
        }
        terms[c] = std::move(term);
      }
    });
    for (auto& t : terms) total += t;
  });
  return total;
}

/// Degree parameter used by the applications: their statements fix Δ >= 2
/// for graphs of maximum degree at most Δ.
inline int theorem_degree(const DependencyGraph& g) { return std::max(2, g.max_degree()); }

/// Decay base 1/(e^{1+δ}(2Δ+1)) required of |w_γ|^{1/|γ|}.
inline double required_decay_base(double delta, int max_degree) {
  return 1.0 / (std::exp(1.0 + delta) * (2.0 * max_degree + 1.0));
}

/// ((Δ+1)/(2Δ+1)) |G| e^{-δm}: certified bound on |T_m - log Z|.
inline double convergence_bound(int vertex_count, int max_degree, double delta, int m) {
  const double c = (max_degree + 1.0) / (2.0 * max_degree + 1.0);
  return c * vertex_count * std::exp(-delta * m);
}

/// Smallest m >= 1 with convergence_bound(...) <= ln(1+ε).
inline int choose_truncation_order(int vertex_count, int max_degree, double delta, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in (0, 1]");
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (vertex_count < 0 || max_degree < 0) throw InvalidArgument("negative graph size or degree");
  if (vertex_count == 0) return 1;
  const double c = (max_degree + 1.0) / (2.0 * max_degree + 1.0);
  const double target = std::log1p(epsilon);
  const double x = std::log(c * vertex_count / target) / delta;
  // Absorb rounding when the bound is met with equality.
  int m = static_cast<int>(std::ceil(x - 1e-9));
  m = std::max(m, 1);
  while (convergence_bound(vertex_count, max_degree, delta, m) > target * (1 + 1e-12)) ++m;
  return m;
}

struct SizeCondition {
  int size = 0;
  std::size_t polymers = 0;  // polymers of this size that were checked
  double max_root = 0.0;     // max |w|^{1/size}
  VertexSet worst;           // polymer attaining max_root
};

struct WeightViolation {
  VertexSet polymer;
  double magnitude = 0.0;
  double bound = 0.0;
};

/// Outcome of checking |w_γ| <= η^{|γ|} for every polymer up to a size.
/// Polymers beyond `checked_up_to` are not examined; the global condition is
/// an assumption carried by the application-level hypotheses.
struct ConditionReport {
  double required_decay = 0.0;
  int checked_up_to = 0;
  double declared_decay = 0.0;
  std::vector<SizeCondition> per_size;
  std::size_t violation_count = 0;
  std::vector<WeightViolation> violations;  // first few, for reporting

  bool passed() const noexcept { return violation_count == 0; }

  /// Smallest ratio η / max_root over sizes (> 1 means slack).
  double min_margin() const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : per_size)
      if (s.max_root > 0) best = std::min(best, required_decay / s.max_root);
    return best;
  }

  std::string describe() const {
    std::ostringstream os;
    os << "weight condition |w| <= " << required_decay << "^|polymer|, verified up to size " << checked_up_to
       << (passed() ? ": pass" : ": FAIL") << "\n";
    for (const auto& s : per_size)
      os << "  size " << s.size << ": " << s.polymers << " polymers, max |w|^(1/size) = " << s.max_root << "\n";
    for (const auto& v : violations) {
      os << "  violation: polymer {";
      for (std::size_t i = 0; i < v.polymer.size(); ++i) os << (i ? "," : "") << v.polymer[i];
      os << "} |w| = " << v.magnitude << " > " << v.bound << "\n";
    }
    if (violation_count > violations.size())
      os << "  ... " << (violation_count - violations.size()) << " more violations\n";
    return os.str();
  }
};

namespace detail {

inline constexpr std::size_t kReportedViolations = 16;
inline constexpr double kBoundTolerance = 1e-12;

inline ConditionReport condition_from_weights(const std::vector<VertexSet>& sets, const std::vector<Complex>& weights,
                                              int m, double eta) {
  ConditionReport rep;
  rep.required_decay = eta;
  rep.checked_up_to = m;
  rep.per_size.resize(static_cast<std::size_t>(m));
  for (int s = 1; s <= m; ++s) rep.per_size[s - 1].size = s;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const int s = static_cast<int>(sets[i].size());
    if (s > m) continue;
    auto& entry = rep.per_size[s - 1];
    ++entry.polymers;
    const double mag = std::abs(weights[i]);
    const double root = std::pow(mag, 1.0 / s);
    if (root > entry.max_root || entry.worst.empty()) {
      entry.max_root = std::max(entry.max_root, root);
      if (root >= entry.max_root) entry.worst = sets[i];
    }
    const double bound = std::pow(eta, s);
    if (mag > bound * (1 + kBoundTolerance)) {
      ++rep.violation_count;
      if (rep.violations.size() < kReportedViolations) rep.violations.push_back({sets[i], mag, bound});
    }
  }
  return rep;
}

}  // namespace detail

/// Checks |w_γ| <= (1/(e^{1+δ}(2Δ+1)))^{|γ|} for every polymer of size <= m.
/// Δ defaults to the maximum degree of g.
inline ConditionReport check_weight_condition(const DependencyGraph& g, const WeightOracle& oracle, int m, double delta,
                                              std::optional<int> max_degree = std::nullopt,
                                              ExecutionOptions exec = {}) {
  if (m < 1) throw InvalidArgument("check size bound must be >= 1");
  const int deg = max_degree.value_or(g.max_degree());
  const auto sets = detail::polymer_sets(g, m);
  const auto weights = parallel_map(sets.size(), exec.threads, [&](std::size_t i) { return oracle(sets[i]); });
  auto rep = detail::condition_from_weights(sets, weights, m, required_decay_base(delta, deg));
  rep.declared_decay = oracle.decay_base();
  return rep;
}

struct ApproxOptions {
  bool force = false;      // compute even when the weight condition fails
  unsigned threads = 1;
  int max_order = 0;       // 0: default_max_order()
};

/// Default cap on the truncation order; LLCOUNT_MAX_ORDER overrides it.
inline int default_max_order() {
  if (const char* env = std::getenv("LLCOUNT_MAX_ORDER")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 24;
}

struct ApproxResult {
  Complex value;
  Complex log_value;
  int truncation_order = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  int max_degree = 0;
  int vertex_count = 0;
  double additive_log_error_bound = 0.0;     // bound on |T_m - log Z|
  double multiplicative_error_bound = 0.0;   // e^{bound} - 1 >= |Ẑ/Z - 1|
  ConditionReport condition;
  bool certified = false;                     // condition held at every checked size
  bool forced = false;                        // computed despite a failed condition
  std::size_t polymer_count = 0;
  std::size_t cluster_count = 0;
  std::chrono::duration<double> elapsed{};

  /// Lower bound on |Z| implied by the certified tail (meaningful when certified).
  double magnitude_lower_bound() const { return std::abs(value) * std::exp(-additive_log_error_bound); }
};

/// Approximates Z(C, w) to multiplicative error ε, assuming the decay bound
/// |w_γ| <= (1/(e^{1+δ}(2Δ+1)))^{|γ|} for every polymer. The bound is checked
/// on every polymer of size <= m; a failure raises HypothesisError unless
/// options.force is set, in which case the result carries no certificate.
inline ApproxResult approx_partition_function(const DependencyGraph& g, const WeightOracle& oracle, double epsilon,
                                              double delta, std::optional<int> max_degree = std::nullopt,
                                              const ApproxOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  const int deg = max_degree.value_or(g.max_degree());
  if (deg < g.max_degree()) throw InvalidArgument("declared maximum degree is below the graph's maximum degree");
  ApproxResult r;
  r.epsilon = epsilon;
  r.delta = delta;
  r.max_degree = deg;
  r.vertex_count = g.vertex_count();
  r.truncation_order = choose_truncation_order(g.vertex_count(), deg, delta, epsilon);
  const int cap = options.max_order > 0 ? options.max_order : default_max_order();
  if (r.truncation_order > cap)
    throw ResourceError("truncation order " + std::to_string(r.truncation_order) + " exceeds the cap " +
                        std::to_string(cap) + " (increase delta or epsilon, or raise the cap)");
  const int m = r.truncation_order;

  const auto wp = detail::weigh_polymers(g, oracle, m, options.threads);
  r.condition = detail::condition_from_weights(wp.index.sets, wp.weights, m, required_decay_base(delta, deg));
  r.condition.declared_decay = oracle.decay_base();
  r.certified = r.condition.passed();
  if (!r.certified) {
    if (!options.force) throw HypothesisError("polymer weight condition violated", r.condition.describe());
    r.forced = true;
  }

  const auto ex = detail::expand_weighted(wp, m, options.threads);
  r.log_value = ex.value;
  r.value = std::exp(ex.value);
  r.polymer_count = ex.polymer_count;
  r.cluster_count = ex.cluster_count;
  if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
    throw NumericError("non-finite partition function estimate");
  r.additive_log_error_bound = convergence_bound(g.vertex_count(), deg, delta, m);
  r.multiplicative_error_bound = std::expm1(r.additive_log_error_bound);
  r.elapsed = std::chrono::steady_clock::now() - start;
  return r;
}

}  // namespace llc
