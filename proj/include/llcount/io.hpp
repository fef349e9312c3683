#pragma once

// Input formats. All structured specs are JSON documents.
//
// projector spec:
//   {"d": 2, "qudit_count": 3,
//    "projectors": [{"support": [0, 2], "matrix": [[re, im], ...]}]}
//   `matrix` lists the d^|support| x d^|support| entries row-major, each as a
//   [re, im] pair (a bare number is read as a real entry).
//
// events spec:
//   {"graph": GRAPH, "max_set_size": k,
//    "probabilities": [{"set": [0, 1], "p": 0.001}, ...]}
//   `p` is Pr[every event in the set fails]; every connected vertex set of
//   size <= k must be listed.
//
// polymer spec:
//   {"graph": GRAPH, "max_degree": D (optional),
//    "weights": [{"polymer": [0, 1], "w": 0.01 | [re, im]}, ...]}
//   Unlisted polymers have weight 0.
//
// GRAPH is {"vertex_count": n, "edges": [[u, v], ...]} or
// {"edge_list_file": "path"} (edge-list text, resolved relative to the spec).

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "llcount/cluster.hpp"
#include "llcount/errors.hpp"
#include "llcount/events.hpp"
#include "llcount/graph.hpp"
#include "llcount/projector.hpp"

namespace llc::io {

using json = nlohmann::json;

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw ParseError(std::string("invalid JSON: ") + e.what(), line);
  }
}

namespace detail {

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(where + ": field '" + key + "' has the wrong type");
  }
}

inline VertexSet vertex_set(const json& j, int n, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of vertices");
  VertexSet s;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw ParseError(where + ": vertex is not an integer");
    const int v = x.get<int>();
    if (v < 0 || v >= n) throw ParseError(where + ": vertex " + std::to_string(v) + " out of range");
    s.push_back(v);
  }
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw ParseError(where + ": repeated vertex");
  return s;
}

inline Complex complex_value(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ParseError(where + ": expected a number or a [re, im] pair");
}

inline std::string set_string(const VertexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

}  // namespace detail

inline DependencyGraph parse_graph_block(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ParseError("graph: expected an object");
  if (j.contains("edge_list_file")) {
    const auto rel = detail::get<std::string>(j, "edge_list_file", "graph");
    std::ifstream in(base_dir / rel);
    if (!in) throw ParseError("graph: cannot open edge list " + (base_dir / rel).string());
    return read_edge_list(in);
  }
  const int n = detail::get<int>(j, "vertex_count", "graph");
  if (n < 0) throw ParseError("graph: negative vertex_count");
  std::vector<std::pair<int, int>> edges;
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) throw ParseError("graph: 'edges' must be an array");
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
        throw ParseError("graph: each edge must be a pair of integers");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
  }
  try {
    return build_graph(n, edges);
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("graph: ") + e.what());
  }
}

struct ProjectorSpec {
  int d = 2;
  int qudit_count = 0;
  std::vector<LocalProjector> projectors;
};

inline ProjectorSpec parse_projector_spec(const std::string& text) {
  const json j = parse_json(text);
  ProjectorSpec spec;
  spec.d = detail::get<int>(j, "d", "projector spec");
  spec.qudit_count = detail::get<int>(j, "qudit_count", "projector spec");
  if (spec.d < 2) throw ParseError("projector spec: d must be >= 2");
  if (spec.qudit_count < 0) throw ParseError("projector spec: negative qudit_count");
  if (!j.contains("projectors") || !j["projectors"].is_array())
    throw ParseError("projector spec: missing 'projectors' array");
  int idx = 0;
  for (const auto& pj : j["projectors"]) {
    const std::string where = "projector " + std::to_string(idx++);
    LocalProjector p;
    p.support = detail::vertex_set(detail::get<json>(pj, "support", where), spec.qudit_count, where + " support");
    const json& m = detail::get<json>(pj, "matrix", where);
    if (!m.is_array()) throw ParseError(where + ": 'matrix' must be an array");
    const std::int64_t side = ipow(spec.d, static_cast<int>(p.support.size()));
    if (static_cast<std::int64_t>(m.size()) != side * side)
      throw ParseError(where + ": matrix has " + std::to_string(m.size()) + " entries, expected " +
                       std::to_string(side * side));
    p.matrix.resize(side, side);
    for (std::int64_t r = 0; r < side; ++r)
      for (std::int64_t c = 0; c < side; ++c) p.matrix(r, c) = detail::complex_value(m[r * side + c], where);
    spec.projectors.push_back(std::move(p));
  }
  return spec;
}

inline json projector_spec_to_json(const ProjectorSpec& spec) {
  json j;
  j["d"] = spec.d;
  j["qudit_count"] = spec.qudit_count;
  j["projectors"] = json::array();
  for (const auto& p : spec.projectors) {
    json pj;
    pj["support"] = p.support;
    json m = json::array();
    for (Eigen::Index r = 0; r < p.matrix.rows(); ++r)
      for (Eigen::Index c = 0; c < p.matrix.cols(); ++c) m.push_back({p.matrix(r, c).real(), p.matrix(r, c).imag()});
    pj["matrix"] = std::move(m);
    j["projectors"].push_back(std::move(pj));
  }
  return j;
}

/// Event family given by a table of joint failure probabilities.
struct EventSpec {
  DependencyGraph graph{0, {}};
  int max_set_size = 1;
  std::map<VertexSet, double> table;

  /// Table lookup; sets beyond the table raise ResourceError.
  double joint(const VertexSet& s) const {
    auto it = table.find(s);
    if (it == table.end()) {
      if (static_cast<int>(s.size()) > max_set_size)
        throw ResourceError("events table covers sets up to size " + std::to_string(max_set_size) + ", set " +
                            detail::set_string(s) + " requested");
      throw ParseError("events table has no entry for " + detail::set_string(s));
    }
    return it->second;
  }

  EventOracle oracle() const {
    EventOracle o;
    o.joint_complement_probability = [this](const VertexSet& s) { return joint(s); };
    std::vector<double> per;
    for (int v = 0; v < graph.vertex_count(); ++v) per.push_back(joint({v}));
    o.per_event = std::move(per);
    return o;
  }
};

inline EventSpec parse_event_spec(const std::string& text, const std::filesystem::path& base_dir = ".") {
  const json j = parse_json(text);
  EventSpec spec;
  spec.graph = parse_graph_block(detail::get<json>(j, "graph", "events spec"), base_dir);
  spec.max_set_size = detail::get<int>(j, "max_set_size", "events spec");
  if (spec.max_set_size < 1) throw ParseError("events spec: max_set_size must be >= 1");
  const json& rows = detail::get<json>(j, "probabilities", "events spec");
  if (!rows.is_array()) throw ParseError("events spec: 'probabilities' must be an array");
  const int n = spec.graph.vertex_count();
  int idx = 0;
  for (const auto& row : rows) {
    const std::string where = "probability entry " + std::to_string(idx++);
    VertexSet s = detail::vertex_set(detail::get<json>(row, "set", where), n, where);
    if (s.empty()) throw ParseError(where + ": empty set");
    if (!is_connected_subset(spec.graph, s)) throw ParseError(where + ": set " + detail::set_string(s) + " is not connected");
    const double p = detail::get<double>(row, "p", where);
    if (!(p >= 0.0 && p <= 1.0)) throw ParseError(where + ": probability outside [0, 1]");
    if (!spec.table.emplace(std::move(s), p).second) throw ParseError(where + ": duplicate set");
  }
  for (const auto& s : enumerate_connected_subgraphs(spec.graph, spec.max_set_size))
    if (!spec.table.count(s)) throw ParseError("events spec: missing probability for connected set " + detail::set_string(s));
  return spec;
}

struct PolymerSpec {
  DependencyGraph graph{0, {}};
  std::optional<int> max_degree;
  std::map<VertexSet, Complex> weights;

  Complex weight(const VertexSet& s) const {
    auto it = weights.find(s);
    return it == weights.end() ? Complex{} : it->second;
  }
};

inline PolymerSpec parse_polymer_spec(const std::string& text, const std::filesystem::path& base_dir = ".") {
  const json j = parse_json(text);
  PolymerSpec spec;
  spec.graph = parse_graph_block(detail::get<json>(j, "graph", "polymer spec"), base_dir);
  if (j.contains("max_degree")) {
    spec.max_degree = detail::get<int>(j, "max_degree", "polymer spec");
    if (*spec.max_degree < spec.graph.max_degree())
      throw ParseError("polymer spec: max_degree is below the graph's maximum degree");
  }
  if (j.contains("weights")) {
    if (!j["weights"].is_array()) throw ParseError("polymer spec: 'weights' must be an array");
    int idx = 0;
    for (const auto& row : j["weights"]) {
      const std::string where = "weight entry " + std::to_string(idx++);
      VertexSet s = detail::vertex_set(detail::get<json>(row, "polymer", where), spec.graph.vertex_count(), where);
      if (s.empty() || !is_connected_subset(spec.graph, s))
        throw ParseError(where + ": polymer " + detail::set_string(s) + " is not a connected vertex set");
      if (!row.contains("w")) throw ParseError(where + ": missing field 'w'");
      if (!spec.weights.emplace(std::move(s), detail::complex_value(row["w"], where)).second)
        throw ParseError(where + ": duplicate polymer");
    }
  }
  return spec;
}

/// Whitespace-separated colour per vertex; '#' starts a comment.
inline std::vector<int> parse_coloring(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      int c = 0;
      try {
        c = std::stoi(tok, &used);
      } catch (const std::exception&) {
        throw ParseError("colouring: bad token '" + tok + "'", lineno);
      }
      if (used != tok.size() || c < 0) throw ParseError("colouring: bad token '" + tok + "'", lineno);
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace llc::io
