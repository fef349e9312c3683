#pragma once

// Finite simple graphs with dense integer vertices, plus the enumeration,
// colouring and product primitives the polymer machinery is built on.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <istream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "llcount/errors.hpp"

namespace llc {

/// Sorted list of vertex indices; the canonical identity of a vertex subset.
using VertexSet = std::vector<int>;

/// Simple undirected graph. Immutable after construction.
class DependencyGraph {
 public:
  DependencyGraph() = default;

  /// Builds a graph on `n` vertices. Duplicate edges (in either orientation)
  /// are merged. Throws InvalidArgument on a self-loop or an endpoint outside [0, n).
  DependencyGraph(int n, const std::vector<std::pair<int, int>>& edges) : adjacency_(check_count(n)) {
    for (const auto& [u, v] : edges) {
      if (u < 0 || v < 0 || u >= n || v >= n)
        throw InvalidArgument("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                              ") has an endpoint outside [0, " + std::to_string(n) + ")");
      if (u == v) throw InvalidArgument("self-loop at vertex " + std::to_string(u));
      adjacency_[u].push_back(v);
      adjacency_[v].push_back(u);
    }
    for (auto& nb : adjacency_) {
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
  }

  int vertex_count() const noexcept { return static_cast<int>(adjacency_.size()); }

  std::size_t edge_count() const noexcept {
    std::size_t twice = 0;
    for (const auto& nb : adjacency_) twice += nb.size();
    return twice / 2;
  }

  const std::vector<int>& neighbors(int v) const { return adjacency_.at(static_cast<std::size_t>(v)); }
  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

  int max_degree() const noexcept {
    std::size_t best = 0;
    for (const auto& nb : adjacency_) best = std::max(best, nb.size());
    return static_cast<int>(best);
  }

  bool adjacent(int u, int v) const {
    const auto& nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < vertex_count(); ++u)
      for (int v : adjacency_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  /// Optional opaque identifiers carried through I/O only.
  std::vector<std::string> vertex_labels;

  friend bool operator==(const DependencyGraph& a, const DependencyGraph& b) {
    return a.adjacency_ == b.adjacency_;
  }

 private:
  static std::size_t check_count(int n) {
    if (n < 0) throw InvalidArgument("negative vertex count");
    return static_cast<std::size_t>(n);
  }

  std::vector<std::vector<int>> adjacency_;
};

inline DependencyGraph build_graph(int n, const std::vector<std::pair<int, int>>& edges) {
  return DependencyGraph(n, edges);
}

inline DependencyGraph complete_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return DependencyGraph(n, e);
}

inline DependencyGraph path_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return DependencyGraph(n, e);
}

inline DependencyGraph cycle_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  if (n > 2) e.emplace_back(n - 1, 0);
  return DependencyGraph(n, e);
}

/// Proper vertex colouring: class_of[v] in [0, colors_used).
struct Coloring {
  std::vector<int> class_of;
  int colors_used = 0;

  /// Vertices of each colour class, ascending.
  std::vector<std::vector<int>> classes() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(colors_used));
    for (std::size_t v = 0; v < class_of.size(); ++v) out[static_cast<std::size_t>(class_of[v])].push_back(static_cast<int>(v));
    return out;
  }
};

inline bool is_proper(const DependencyGraph& g, const Coloring& c) {
  if (static_cast<int>(c.class_of.size()) != g.vertex_count()) return false;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (c.class_of[v] < 0 || c.class_of[v] >= c.colors_used) return false;
    for (int u : g.neighbors(v))
      if (c.class_of[u] == c.class_of[v]) return false;
  }
  return true;
}

/// Smallest-available-colour greedy colouring in ascending vertex order.
/// Uses at most max_degree + 1 colours. An empty graph gets colors_used = 0.
inline Coloring greedy_coloring(const DependencyGraph& g) {
  Coloring c;
  const int n = g.vertex_count();
  c.class_of.assign(static_cast<std::size_t>(n), -1);
  std::vector<char> taken;
  for (int v = 0; v < n; ++v) {
    taken.assign(static_cast<std::size_t>(g.degree(v)) + 1, 0);
    for (int u : g.neighbors(v)) {
      const int cu = c.class_of[u];
      if (cu >= 0 && cu < static_cast<int>(taken.size())) taken[cu] = 1;
    }
    int color = 0;
    while (taken[color]) ++color;
    c.class_of[v] = color;
    c.colors_used = std::max(c.colors_used, color + 1);
  }
  return c;
}

/// Validates a user-supplied colouring and normalises colors_used.
inline Coloring make_coloring(const DependencyGraph& g, std::vector<int> class_of) {
  Coloring c;
  c.colors_used = class_of.empty() ? 0 : *std::max_element(class_of.begin(), class_of.end()) + 1;
  c.class_of = std::move(class_of);
  if (!is_proper(g, c)) throw InvalidArgument("colouring is not proper for this graph");
  return c;
}

/// Strong product G ⊠ K_T. Vertex (v, tau) maps to index v * T + tau.
inline DependencyGraph strong_product_with_complete(const DependencyGraph& g, int copies) {
  if (copies < 1) throw InvalidArgument("strong product needs T >= 1");
  const int n = g.vertex_count();
  std::vector<std::pair<int, int>> e;
  auto id = [copies](int v, int tau) { return v * copies + tau; };
  for (int v = 0; v < n; ++v) {
    for (int a = 0; a < copies; ++a)
      for (int b = a + 1; b < copies; ++b) e.emplace_back(id(v, a), id(v, b));
    for (int u : g.neighbors(v)) {
      if (u < v) continue;
      for (int a = 0; a < copies; ++a)
        for (int b = 0; b < copies; ++b) e.emplace_back(id(v, a), id(u, b));
    }
  }
  return DependencyGraph(n * copies, e);
}

namespace detail {

// ESU-style growth: every connected set whose smallest vertex is `root` is
// reached exactly once.
inline void extend_connected(const DependencyGraph& g, int root, int max_size, std::vector<int>& current,
                             std::vector<int> extension, std::vector<char>& in_current,
                             std::vector<char>& near_current,
                             const std::function<void(const VertexSet&)>& emit) {
  VertexSet sorted = current;
  std::sort(sorted.begin(), sorted.end());
  emit(sorted);
  if (static_cast<int>(current.size()) == max_size) return;
  while (!extension.empty()) {
    const int w = extension.back();
    extension.pop_back();
    // Exclusive neighbours of w: above the root, not in or adjacent to the current set.
    std::vector<int> next_ext = extension;
    std::vector<int> marked;
    for (int u : g.neighbors(w)) {
      if (u > root && !in_current[u] && !near_current[u]) {
        next_ext.push_back(u);
        near_current[u] = 1;
        marked.push_back(u);
      }
    }
    // w itself becomes a member; its neighbours are now "near".
    current.push_back(w);
    in_current[w] = 1;
    extend_connected(g, root, max_size, current, std::move(next_ext), in_current, near_current, emit);
    in_current[w] = 0;
    current.pop_back();
    for (int u : marked) near_current[u] = 0;
  }
}

}  // namespace detail

/// Calls `emit` once for every connected induced subgraph with 1..max_size
/// vertices (sorted vertex set). Emission order: by smallest vertex, then
/// growth order.
inline void for_each_connected_subgraph(const DependencyGraph& g, int max_size,
                                        const std::function<void(const VertexSet&)>& emit) {
  if (max_size < 1) throw InvalidArgument("subgraph size bound must be >= 1");
  const int n = g.vertex_count();
  std::vector<char> in_current(static_cast<std::size_t>(n), 0);
  std::vector<char> near_current(static_cast<std::size_t>(n), 0);
  for (int root = 0; root < n; ++root) {
    std::vector<int> current{root};
    in_current[root] = 1;
    near_current[root] = 1;
    std::vector<int> ext;
    for (int u : g.neighbors(root)) {
      if (u > root) {
        ext.push_back(u);
        near_current[u] = 1;
      }
    }
    detail::extend_connected(g, root, max_size, current, ext, in_current, near_current, emit);
    for (int u : g.neighbors(root)) near_current[u] = 0;
    near_current[root] = 0;
    in_current[root] = 0;
  }
}

/// Canonical total order on vertex sets: by size, then lexicographically.
inline bool canonical_less(const VertexSet& a, const VertexSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

/// All connected induced subgraphs of order 1..max_size in canonical order.
inline std::vector<VertexSet> enumerate_connected_subgraphs(const DependencyGraph& g, int max_size) {
  std::vector<VertexSet> out;
  for_each_connected_subgraph(g, max_size, [&](const VertexSet& s) { out.push_back(s); });
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

/// Maximal connected components of G[S], each sorted, ordered by smallest vertex.
inline std::vector<VertexSet> induced_components(const DependencyGraph& g, const VertexSet& subset) {
  std::vector<VertexSet> out;
  if (subset.empty()) return out;
  const int n = g.vertex_count();
  std::vector<char> member(static_cast<std::size_t>(n), 0), seen(static_cast<std::size_t>(n), 0);
  for (int v : subset) {
    if (v < 0 || v >= n) throw InvalidArgument("vertex " + std::to_string(v) + " not in graph");
    member[v] = 1;
  }
  VertexSet sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  for (int start : sorted) {
    if (seen[start]) continue;
    VertexSet comp{start};
    seen[start] = 1;
    for (std::size_t head = 0; head < comp.size(); ++head)
      for (int u : g.neighbors(comp[head]))
        if (member[u] && !seen[u]) {
          seen[u] = 1;
          comp.push_back(u);
        }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

inline bool is_connected_subset(const DependencyGraph& g, const VertexSet& subset) {
  return !subset.empty() && induced_components(g, subset).size() == 1;
}

/// Reads the edge-list format: a header "n m" followed by m lines "u v".
/// Blank lines and lines starting with '#' or 'c ' are ignored.
inline DependencyGraph read_edge_list(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::optional<std::pair<long long, long long>> header;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line[first] == 'c' && (first + 1 == line.size() || line[first + 1] == ' ')) continue;
    std::istringstream ls(line);
    long long a = 0, b = 0;
    if (!(ls >> a >> b)) throw ParseError("expected two integers", line_no);
    std::string rest;
    if (ls >> rest) throw ParseError("trailing token '" + rest + "'", line_no);
    if (!header) {
      if (a < 0 || b < 0) throw ParseError("negative count in header", line_no);
      header = {a, b};
      continue;
    }
    if (a < 0 || b < 0 || a >= header->first || b >= header->first)
      throw ParseError("endpoint out of range", line_no);
    if (a == b) throw ParseError("self-loop", line_no);
    edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
  }
  if (!header) throw ParseError("missing 'n m' header");
  if (static_cast<long long>(edges.size()) != header->second)
    throw ParseError("header declares " + std::to_string(header->second) + " edges, found " +
                     std::to_string(edges.size()));
  return DependencyGraph(static_cast<int>(header->first), edges);
}

}  // namespace llc
