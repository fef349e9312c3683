#pragma once

// JSON rendering of results. Timings are kept out of these objects; callers
// attach them under a separate "timing" key so reports can be compared
// byte-for-byte.

#include <json.hpp>

#include <cmath>
#include <string>

#include "llcount/cluster.hpp"
#include "llcount/events.hpp"
#include "llcount/hypothesis.hpp"
#include "llcount/qsat.hpp"

namespace llc::report {

using json = nlohmann::json;

inline json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

inline json complex_pair(Complex z) { return json::array({number(z.real()), number(z.imag())}); }

inline json to_json(const ConditionReport& c) {
  json j;
  j["required_decay"] = number(c.required_decay);
  j["checked_up_to"] = c.checked_up_to;
  j["passed"] = c.passed();
  j["min_margin"] = number(c.min_margin());
  j["violation_count"] = c.violation_count;
  j["per_size"] = json::array();
  for (const auto& s : c.per_size)
    j["per_size"].push_back({{"size", s.size}, {"polymers", s.polymers}, {"max_root", number(s.max_root)}});
  j["violations"] = json::array();
  for (const auto& v : c.violations)
    j["violations"].push_back({{"polymer", v.polymer}, {"magnitude", number(v.magnitude)}, {"bound", number(v.bound)}});
  j["assumption"] = "weight bound verified for polymers up to size " + std::to_string(c.checked_up_to) +
                    "; larger polymers are covered only by the application hypotheses";
  return j;
}

inline json to_json(const VertexBoundReport& h) {
  json j;
  j["quantity"] = h.quantity;
  j["bound"] = number(h.bound);
  j["degree_factor"] = number(h.degree_factor);
  j["power"] = number(h.power);
  j["delta"] = number(h.delta);
  j["passed"] = h.passed();
  j["worst_vertex"] = h.worst_vertex;
  j["worst_value"] = number(h.worst_value);
  j["margin"] = number(h.margin());
  j["violating"] = h.violating;
  return j;
}

inline json to_json(const ApproxResult& r) {
  json j;
  j["value"] = complex_pair(r.value);
  j["log_value"] = complex_pair(r.log_value);
  j["m"] = r.truncation_order;
  j["epsilon"] = number(r.epsilon);
  j["delta"] = number(r.delta);
  j["max_degree"] = r.max_degree;
  j["vertex_count"] = r.vertex_count;
  j["error_bound"] = {{"additive_log", number(r.additive_log_error_bound)},
                      {"multiplicative", number(r.multiplicative_error_bound)}};
  j["certified"] = r.certified;
  j["forced"] = r.forced;
  j["polymers"] = r.polymer_count;
  j["clusters"] = r.cluster_count;
  j["condition"] = to_json(r.condition);
  return j;
}

inline json to_json(const KConditionReport& k) {
  return {{"k", k.k},
          {"chi", k.chromatic},
          {"max_degree", k.degree},
          {"delta", number(k.delta)},
          {"required_k", number(k.required_k)},
          {"margin", number(k.margin())},
          {"passed", k.passed()}};
}

inline json to_json(const ProbabilityResult& p) {
  json j;
  j["probability"] = number(p.probability);
  j["chi"] = p.chromatic_bound;
  j["conditional"] = p.conditional;
  if (p.hypothesis_checked) j["hypothesis"] = to_json(p.hypothesis);
  j["approx"] = to_json(p.approx);
  return j;
}

inline json to_json(const SatCountResult& s) {
  json j;
  j["count"] = number(s.count);
  j["log2_count"] = number(s.log2_count);
  j["variables"] = s.variable_count;
  j["k_condition"] = to_json(s.k_condition);
  j["probability"] = to_json(s.probability);
  if (s.exact_log_probability) j["exact_log_probability"] = s.exact_log_probability->str();
  return j;
}

inline json to_json(const CommutationReport& c) {
  return {{"pairs_checked", c.pairs_checked},
          {"max_deviation", number(c.max_deviation)},
          {"passed", c.passed},
          {"worst_pair", json::array({c.worst_u, c.worst_v})}};
}

inline json to_json(const DimensionResult& d) {
  json j;
  j["normalized_dim"] = number(d.normalized_dim);
  j["absolute_dim"] = number(d.absolute_dim);
  j["d"] = d.d;
  j["qudits"] = d.qudit_count;
  j["chi"] = d.chromatic_bound;
  if (!d.hypothesis.quantity.empty()) j["hypothesis"] = to_json(d.hypothesis);
  if (d.commutation) j["commutation"] = to_json(*d.commutation);
  j["approx"] = to_json(d.approx);
  return j;
}

inline json to_json(const AffineResult& a) {
  json j;
  j["z"] = number(a.z);
  j["absolute_z"] = number(a.absolute_z);
  j["T"] = a.T;
  j["chi"] = a.chromatic_bound;
  j["product_max_degree"] = a.product_degree;
  j["lambda_star"] = number(a.lambda_star);
  j["lambda_star_source"] = a.lambda_exact ? "dense diagonalization" : "user bound";
  j["error"] = {{"relative_part", "epsilon * dim"},
                {"relative_coefficient", number(a.relative_coefficient)},
                {"additive_part", number(a.additive_part)},
                {"worst_case_total", number(a.worst_case_total)}};
  j["max_weight_imaginary"] = number(a.max_weight_imaginary);
  j["hypothesis"] = to_json(a.hypothesis);
  j["approx"] = to_json(a.approx);
  return j;
}

}  // namespace llc::report
