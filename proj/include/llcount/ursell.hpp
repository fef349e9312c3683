#pragma once

// Ursell function of a graph,
//   phi(H) = (1/|H|!) * sum over spanning connected edge sets S of (-1)^|S|.
//
// The signed sum C(H) is computed with a vertex-subset recurrence instead of
// edge-subset enumeration. Let A(X) = sum over all edge subsets of H[X] of
// (-1)^|F|, which is 1 when H[X] has no edges and 0 otherwise. Splitting off
// the component of a fixed vertex gives A(S) = sum_T C(T) A(S \ T), and
// hence C(S) = A(S) - sum_{T proper} C(T) A(S \ T).
//
// Clusters often repeat a polymer, so H is a "blow-up" of a small type graph:
// each type t is a clique of size k_t (a polymer is incompatible with itself)
// and two types are fully joined when incompatible. The recurrence runs over
// count vectors instead of vertex subsets, with binomial weights for which
// copies go into the fixed vertex's component. With all counts equal to one
// it is exactly the subset recurrence.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "llcount/errors.hpp"
#include "llcount/graph.hpp"

namespace llc {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Largest number of polymers in a single cluster the engine accepts. Each
/// recurrence term is bounded by (n-1)! and there are fewer than 2^(n-1) of
/// them, so partial sums stay inside a 128-bit integer.
inline constexpr int kMaxClusterPolymers = 24;

/// A small graph on "types" with a multiplicity per type. Row t of
/// `adjacency` is a bitmask of the other types t is joined to (no self bits).
struct TypedGraph {
  std::vector<std::uint32_t> adjacency;
  std::vector<int> multiplicity;

  int total() const { return std::accumulate(multiplicity.begin(), multiplicity.end(), 0); }
  friend bool operator<(const TypedGraph& a, const TypedGraph& b) {
    if (a.multiplicity != b.multiplicity) return a.multiplicity < b.multiplicity;
    return a.adjacency < b.adjacency;
  }
};

namespace detail {

inline __int128 binomial128(int n, int k) {
  if (k < 0 || k > n) return 0;
  __int128 r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

/// C(H) = sum over spanning connected edge sets of the blown-up graph of
/// (-1)^|S|. Exact. Throws ResourceError when the blown-up graph exceeds
/// kMaxClusterPolymers vertices.
inline __int128 signed_connected_count(const TypedGraph& h) {
  const int types = static_cast<int>(h.multiplicity.size());
  if (types == 0) throw InvalidArgument("signed_connected_count of an empty graph");
  if (types > 32) throw ResourceError("too many distinct polymer types in one cluster");
  if (h.total() > kMaxClusterPolymers)
    throw ResourceError("cluster with " + std::to_string(h.total()) + " polymers exceeds the limit of " +
                        std::to_string(kMaxClusterPolymers));

  // Mixed-radix indexing of count vectors 0 <= k_t <= multiplicity_t.
  std::vector<std::size_t> radix(types), stride(types);
  std::size_t states = 1;
  for (int t = 0; t < types; ++t) {
    radix[t] = static_cast<std::size_t>(h.multiplicity[t]) + 1;
    stride[t] = states;
    states *= radix[t];
  }
  auto digits_of = [&](std::size_t idx, std::vector<int>& k) {
    for (int t = 0; t < types; ++t) {
      k[t] = static_cast<int>(idx % radix[t]);
      idx /= radix[t];
    }
  };

  // A(k): 1 iff the blown-up graph on counts k has no edge.
  std::vector<char> edgeless(states, 0);
  std::vector<int> k(types), j(types);
  for (std::size_t s = 0; s < states; ++s) {
    digits_of(s, k);
    std::uint32_t present = 0;
    bool ok = true;
    for (int t = 0; t < types && ok; ++t) {
      if (k[t] >= 2) ok = false;
      if (k[t] >= 1) present |= (1u << t);
    }
    for (int t = 0; t < types && ok; ++t)
      if (k[t] >= 1 && (h.adjacency[t] & present)) ok = false;
    edgeless[s] = ok ? 1 : 0;
  }

  std::vector<__int128> connected(states, 0);
  // States are visited in increasing index; every proper sub-vector has a
  // smaller index, so its value is already final.
  for (std::size_t s = 1; s < states; ++s) {
    digits_of(s, k);
    int pivot = 0;
    while (k[pivot] == 0) ++pivot;
    __int128 acc = edgeless[s];
    // Enumerate sub-vectors j of k with j[pivot] >= 1 and j != k.
    std::fill(j.begin(), j.end(), 0);
    j[pivot] = 1;
    for (;;) {
      std::size_t js = 0, rest = 0;
      for (int t = 0; t < types; ++t) {
        js += static_cast<std::size_t>(j[t]) * stride[t];
        rest += static_cast<std::size_t>(k[t] - j[t]) * stride[t];
      }
      if (js != s && edgeless[rest]) {
        // Choose which copies join the pivot's component: the pivot copy is fixed.
        __int128 ways = detail::binomial128(k[pivot] - 1, j[pivot] - 1);
        for (int t = 0; t < types; ++t)
          if (t != pivot) ways *= detail::binomial128(k[t], j[t]);
        acc -= ways * connected[js];
      }
      // Next sub-vector (odometer; pivot digit runs from 1).
      int t = 0;
      for (; t < types; ++t) {
        const int lo = (t == pivot) ? 1 : 0;
        if (j[t] < k[t]) {
          ++j[t];
          break;
        }
        j[t] = lo;
      }
      if (t == types) break;
    }
    connected[s] = acc;
  }
  return connected[states - 1];
}

/// Builds the one-copy-per-vertex TypedGraph of H. Requires |H| <= 32.
inline TypedGraph typed_graph_of(const DependencyGraph& h) {
  const int n = h.vertex_count();
  if (n > 32) throw ResourceError("Ursell function limited to 32 vertices");
  TypedGraph t;
  t.adjacency.assign(static_cast<std::size_t>(n), 0);
  t.multiplicity.assign(static_cast<std::size_t>(n), 1);
  for (int v = 0; v < n; ++v)
    for (int u : h.neighbors(v)) t.adjacency[v] |= (1u << u);
  return t;
}

inline BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline Rational to_rational(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  BigInt b = static_cast<std::uint64_t>(u >> 64);
  b <<= 64;
  b += static_cast<std::uint64_t>(u);
  if (neg) b = -b;
  return Rational(b);
}

/// Exact Ursell function. Throws InvalidArgument for an empty or disconnected H.
inline Rational ursell(const DependencyGraph& h) {
  const int n = h.vertex_count();
  if (n == 0) throw InvalidArgument("Ursell function of the empty graph");
  VertexSet all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  if (!is_connected_subset(h, all)) throw InvalidArgument("Ursell function requested for a disconnected graph");
  return to_rational(signed_connected_count(typed_graph_of(h))) / Rational(factorial(n));
}

/// Memo of signed connected counts keyed by typed graph. Not synchronised;
/// give each worker its own.
class UrsellCache {
 public:
  __int128 signed_count(const TypedGraph& h) {
    auto it = cache_.find(h);
    if (it != cache_.end()) return it->second;
    const __int128 v = signed_connected_count(h);
    cache_.emplace(h, v);
    return v;
  }
  std::size_t size() const { return cache_.size(); }

 private:
  std::map<TypedGraph, __int128> cache_;
};

}  // namespace llc
