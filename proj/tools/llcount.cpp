// llcount: approximate counting in local lemma regimes via truncated cluster
// expansions. See README.md for the input formats and the report schema.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "llcount/io.hpp"
#include "llcount/llcount.hpp"
#include "llcount/report.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace llc;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kHypothesis = 2, kParse = 3, kResource = 4, kNumeric = 5 };

struct RunConfig {
  std::string input;
  double epsilon = 0.01;
  std::string delta = "auto";
  int T = 1;
  std::optional<double> lambda_star;
  std::string coloring_path;
  bool force = false;
  bool exact_rational = false;
  unsigned threads = 1;
  int max_order = 0;
  std::string format = "human";
  std::string mode = "stability";
  int size_cap = 0;
};

/// Slightly below the largest admissible δ so the bound holds after rounding.
constexpr double kAutoDeltaShrink = 1.0 - 1e-9;
constexpr double kAutoDeltaCap = 8.0;
constexpr double kFallbackDelta = 0.1;

struct DeltaChoice {
  double value = kFallbackDelta;
  std::string source;
};

DeltaChoice resolve_delta(const RunConfig& cfg, double worst, double degree_factor, double power) {
  DeltaChoice c;
  if (cfg.delta != "auto") {
    try {
      std::size_t used = 0;
      c.value = std::stod(cfg.delta, &used);
      if (used != cfg.delta.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InvalidArgument("--delta must be a positive number or 'auto'");
    }
    if (!(c.value > 0)) throw InvalidArgument("--delta must be positive");
    c.source = "user";
    return c;
  }
  const double best = max_feasible_delta(worst, degree_factor, power);
  if (best > 0) {
    c.value = std::min(best * kAutoDeltaShrink, kAutoDeltaCap);
    c.source = "auto: largest delta satisfying the per-vertex hypothesis";
  } else {
    c.value = kFallbackDelta;
    c.source = "auto: no positive delta satisfies the hypothesis; using " + std::to_string(kFallbackDelta);
  }
  return c;
}

ApplicationOptions app_options(const RunConfig& cfg, double delta, const DependencyGraph& g) {
  ApplicationOptions o;
  o.epsilon = cfg.epsilon;
  o.delta = delta;
  o.force = cfg.force;
  o.threads = cfg.threads;
  o.max_order = cfg.max_order;
  if (!cfg.coloring_path.empty()) o.coloring = make_coloring(g, io::parse_coloring(io::read_file(cfg.coloring_path)));
  return o;
}

Coloring coloring_of(const RunConfig& cfg, const DependencyGraph& g) {
  return coloring_for(g, app_options(cfg, kFallbackDelta, g).coloring);
}

bool looks_like_json(const std::string& text) {
  const auto p = text.find_first_not_of(" \t\r\n");
  return p != std::string::npos && text[p] == '{';
}

ProjectorSet load_projectors(const RunConfig& cfg) {
  auto spec = io::parse_projector_spec(io::read_file(cfg.input));
  return ProjectorSet(spec.d, spec.qudit_count, std::move(spec.projectors));
}

double max_rank(const ProjectorSet& ps) {
  double r = 0;
  for (int v = 0; v < ps.size(); ++v) r = std::max(r, ps.rank_normalized(v));
  return r;
}

/// Output sink: one JSON line or human-readable text.
struct Output {
  const RunConfig& cfg;
  std::string command;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void emit(const json& result, const std::string& human, const json& extra = json::object()) const {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cfg.format == "json") {
      json line;
      line["command"] = command;
      line["input"] = cfg.input;
      line["result"] = result;
      for (auto it = extra.begin(); it != extra.end(); ++it) line[it.key()] = it.value();
      line["timing"] = {{"elapsed_seconds", secs}};
      std::cout << line.dump() << "\n";
    } else {
      std::cout << human;
      std::cout << "elapsed: " << secs << " s\n";
    }
  }
};

std::string approx_summary(const ApproxResult& a) {
  std::ostringstream os;
  os.precision(12);
  os << "truncation order m = " << a.truncation_order << " (epsilon = " << a.epsilon << ", delta = " << a.delta
     << ", Delta = " << a.max_degree << ")\n";
  os << "log value = " << a.log_value.real();
  if (a.log_value.imag() != 0.0) os << " + " << a.log_value.imag() << "i";
  os << "\ncertified |T_m - log Z| <= " << a.additive_log_error_bound << "  (relative error <= "
     << a.multiplicative_error_bound << ")" << (a.certified ? "" : "  [NOT CERTIFIED: hypothesis failed, forced run]")
     << "\n";
  os << "polymers: " << a.polymer_count << ", clusters: " << a.cluster_count << "\n";
  os << a.condition.describe();
  return os.str();
}

int cmd_count_sat(const RunConfig& cfg, Output& out) {
  std::ifstream in(cfg.input);
  if (!in) throw ParseError("cannot open " + cfg.input);
  const CnfFormula f = parse_dimacs(in);
  const DependencyGraph g = cnf_dependency_graph(f);
  const Coloring col = coloring_of(cfg, g);
  const DeltaChoice dc = resolve_delta(cfg, f.clause_count() ? std::ldexp(1.0, -f.min_width()) : 0.0,
                                       2.0 * theorem_degree(g) + 1.0, std::max(1, col.colors_used));
  SatOptions opt;
  static_cast<ApplicationOptions&>(opt) = app_options(cfg, dc.value, g);
  opt.coloring = col;
  opt.exact_rational = cfg.exact_rational;
  const SatCountResult r = count_satisfying(f, opt);
  std::ostringstream os;
  os.precision(12);
  os << "variables: " << f.variable_count << ", clauses: " << f.clause_count() << "\n";
  for (const auto& w : f.warnings) os << "warning: " << w << "\n";
  os << "satisfying assignments ~ " << r.count << "  (log2 = " << r.log2_count << ")\n";
  os << "probability ~ " << r.probability.probability << "\n";
  os << "delta = " << dc.value << " (" << dc.source << ")\n";
  os << r.k_condition.describe() << approx_summary(r.probability.approx);
  if (r.exact_log_probability) os << "exact T_m = " << r.exact_log_probability->str() << "\n";
  json extra = {{"warnings", f.warnings}, {"delta_source", dc.source}};
  out.emit(report::to_json(r), os.str(), extra);
  return kOk;
}

int cmd_prob_intersection(const RunConfig& cfg, Output& out) {
  const io::EventSpec spec = io::parse_event_spec(io::read_file(cfg.input), fs::path(cfg.input).parent_path());
  const EventOracle oracle = spec.oracle();
  const Coloring col = coloring_of(cfg, spec.graph);
  double worst = 0;
  for (double p : *oracle.per_event) worst = std::max(worst, p);
  const DeltaChoice dc = resolve_delta(cfg, worst, 2.0 * theorem_degree(spec.graph) + 1.0, std::max(1, col.colors_used));
  ApplicationOptions opt = app_options(cfg, dc.value, spec.graph);
  opt.coloring = col;
  const ProbabilityResult r = approx_probability_intersection(spec.graph, oracle, opt);
  std::ostringstream os;
  os.precision(12);
  os << "events: " << spec.graph.vertex_count() << "\n";
  os << "Pr[all events occur] ~ " << r.probability << "\n";
  os << "delta = " << dc.value << " (" << dc.source << ")\n";
  if (r.hypothesis_checked) os << r.hypothesis.describe();
  os << "note: independence across the dependency graph is assumed, not verified\n";
  os << approx_summary(r.approx);
  out.emit(report::to_json(r), os.str(), {{"delta_source", dc.source}});
  return kOk;
}

std::string dimension_summary(const DimensionResult& r) {
  std::ostringstream os;
  os.precision(12);
  os << "normalized dim ~ " << r.normalized_dim << ", absolute dim ~ " << r.absolute_dim << " (d = " << r.d
     << ", qudits = " << r.qudit_count << ")\n";
  if (!r.hypothesis.quantity.empty()) os << r.hypothesis.describe();
  if (r.commutation)
    os << "commutation: " << r.commutation->pairs_checked << " overlapping pairs, max deviation "
       << r.commutation->max_deviation << (r.commutation->passed ? " (pass)" : " (FAIL)") << "\n";
  os << approx_summary(r.approx);
  return os.str();
}

int cmd_qsat_commuting(const RunConfig& cfg, Output& out) {
  const ProjectorSet ps = load_projectors(cfg);
  const DependencyGraph g = support_dependency_graph(ps);
  const Coloring col = coloring_of(cfg, g);
  const DeltaChoice dc = resolve_delta(cfg, max_rank(ps), 2.0 * theorem_degree(g) + 1.0, std::max(1, col.colors_used));
  ApplicationOptions opt = app_options(cfg, dc.value, g);
  opt.coloring = col;
  const DimensionResult r = approx_dim_commuting(ps, opt);
  out.emit(report::to_json(r), "delta = " + std::to_string(dc.value) + " (" + dc.source + ")\n" + dimension_summary(r),
           {{"delta_source", dc.source}});
  return kOk;
}

int cmd_qsat_general(const RunConfig& cfg, Output& out) {
  const ProjectorSet ps = load_projectors(cfg);
  const DependencyGraph g = support_dependency_graph(ps);
  const Coloring col = coloring_of(cfg, g);
  if (cfg.mode == "stability") {
    // auto δ from the size-1 sums (the ranks); larger sets are checked during the run
    const DeltaChoice dc = resolve_delta(cfg, max_rank(ps), 2.0 * theorem_degree(g) + 1.0, 1.0);
    ApplicationOptions opt = app_options(cfg, dc.value, g);
    opt.coloring = col;
    const DimensionResult r = approx_dim_general(ps, opt);
    out.emit(report::to_json(r),
             "delta = " + std::to_string(dc.value) + " (" + dc.source + ")\n" + dimension_summary(r),
             {{"delta_source", dc.source}, {"mode", "stability"}});
    return kOk;
  }
  if (cfg.mode != "detectability") throw InvalidArgument("--mode must be 'stability' or 'detectability'");
  const double factor = 2.0 * cfg.T * (theorem_degree(g) + 1.0) - 1.0;
  const DeltaChoice dc = resolve_delta(cfg, max_rank(ps), factor, static_cast<double>(cfg.T) * std::max(1, col.colors_used));
  ApplicationOptions opt = app_options(cfg, dc.value, g);
  opt.coloring = col;
  DetectabilityParams params;
  params.T = cfg.T;
  params.lambda_star = cfg.lambda_star;
  const AffineResult r = approx_dim_detectability(ps, params, opt);
  std::ostringstream os;
  os.precision(12);
  os << "detectability trace z ~ " << r.z << " (absolute " << r.absolute_z << "), T = " << r.T << ", chi = "
     << r.chromatic_bound << "\n";
  os << "lambda* = " << r.lambda_star << " (" << (r.lambda_exact ? "dense diagonalization" : "user bound") << ")\n";
  os << "|z - dim| <= " << r.relative_coefficient << " * dim + " << r.additive_part << "  (<= " << r.worst_case_total
     << " using dim <= 1)\n";
  os << "max |Im w| over polymers: " << r.max_weight_imaginary << "\n";
  os << "delta = " << dc.value << " (" << dc.source << ")\n";
  os << r.hypothesis.describe() << approx_summary(r.approx);
  out.emit(report::to_json(r), os.str(), {{"delta_source", dc.source}, {"mode", "detectability"}});
  return kOk;
}

double max_weight_root(const io::PolymerSpec& spec) {
  double worst = 0;
  for (const auto& [s, w] : spec.weights) worst = std::max(worst, std::pow(std::abs(w), 1.0 / s.size()));
  return worst;
}

int cmd_polymer_z(const RunConfig& cfg, Output& out) {
  const io::PolymerSpec spec = io::parse_polymer_spec(io::read_file(cfg.input), fs::path(cfg.input).parent_path());
  const int deg = spec.max_degree.value_or(spec.graph.max_degree());
  const DeltaChoice dc = resolve_delta(cfg, max_weight_root(spec), 2.0 * deg + 1.0, 1.0);
  WeightOracle oracle([&spec](const VertexSet& s) { return spec.weight(s); });
  ApproxOptions ao;
  ao.force = cfg.force;
  ao.threads = cfg.threads;
  ao.max_order = cfg.max_order;
  const ApproxResult r = approx_partition_function(spec.graph, oracle, cfg.epsilon, dc.value, deg, ao);
  std::ostringstream os;
  os.precision(12);
  os << "Z ~ " << r.value.real();
  if (r.value.imag() != 0.0) os << " + " << r.value.imag() << "i";
  os << "\ndelta = " << dc.value << " (" << dc.source << ")\n" << approx_summary(r);
  out.emit(report::to_json(r), os.str(), {{"delta_source", dc.source}});
  return kOk;
}

/// Hypothesis report only; exit 2 when it fails.
int cmd_check(const RunConfig& cfg, Output& out) {
  const std::string text = io::read_file(cfg.input);
  json result;
  std::ostringstream os;
  os.precision(12);
  bool passed = true;
  if (!looks_like_json(text)) {
    const CnfFormula f = parse_dimacs(text);
    const DependencyGraph g = cnf_dependency_graph(f);
    const Coloring col = coloring_of(cfg, g);
    const DeltaChoice dc = resolve_delta(cfg, f.clause_count() ? std::ldexp(1.0, -f.min_width()) : 0.0,
                                         2.0 * theorem_degree(g) + 1.0, std::max(1, col.colors_used));
    const KConditionReport k = k_condition(f, col, theorem_degree(g), dc.value);
    passed = f.clause_count() == 0 || k.passed();
    result = {{"kind", "cnf"}, {"k_condition", report::to_json(k)}, {"delta_source", dc.source}};
    for (const auto& w : f.warnings) os << "warning: " << w << "\n";
    os << k.describe();
  } else {
    const json j = io::parse_json(text);
    if (j.contains("projectors")) {
      const ProjectorSet ps = load_projectors(cfg);
      const DependencyGraph g = support_dependency_graph(ps);
      const Coloring col = coloring_of(cfg, g);
      result["kind"] = "projectors";
      if (cfg.mode == "detectability") {
        const double factor = 2.0 * cfg.T * (theorem_degree(g) + 1.0) - 1.0;
        const DeltaChoice dc = resolve_delta(cfg, max_rank(ps), factor, static_cast<double>(cfg.T) * std::max(1, col.colors_used));
        const auto h = detectability_rank_condition(ps, g, col, cfg.T, dc.value);
        passed = h.passed();
        result["rank_condition"] = report::to_json(h);
        os << h.describe();
      } else if (cfg.mode == "stability") {
        const DeltaChoice dc = resolve_delta(cfg, max_rank(ps), 2.0 * theorem_degree(g) + 1.0, 1.0);
        const int cap = cfg.size_cap > 0 ? cfg.size_cap
                                         : choose_truncation_order(g.vertex_count(), theorem_degree(g), dc.value, cfg.epsilon);
        const ConditionReport c = stability_check(ps, cap, dc.value, ExecutionOptions{cfg.threads});
        passed = c.passed();
        result["stability"] = report::to_json(c);
        os << "inclusion-exclusion stability (connected sets up to size " << cap
           << "; larger sets are assumed):\n" << c.describe();
      } else {
        const DeltaChoice dc = resolve_delta(cfg, max_rank(ps), 2.0 * theorem_degree(g) + 1.0, std::max(1, col.colors_used));
        const auto h = commuting_rank_condition(ps, g, col, dc.value);
        const auto comm = ps.verify_commuting();
        passed = h.passed() && comm.passed;
        result["rank_condition"] = report::to_json(h);
        result["commutation"] = report::to_json(comm);
        os << h.describe() << "commutation: max deviation " << comm.max_deviation << (comm.passed ? " (pass)" : " (FAIL)")
           << "\n";
      }
    } else if (j.contains("probabilities")) {
      const io::EventSpec spec = io::parse_event_spec(text, fs::path(cfg.input).parent_path());
      const Coloring col = coloring_of(cfg, spec.graph);
      const auto oracle = spec.oracle();
      double worst = 0;
      for (double p : *oracle.per_event) worst = std::max(worst, p);
      const DeltaChoice dc =
          resolve_delta(cfg, worst, 2.0 * theorem_degree(spec.graph) + 1.0, std::max(1, col.colors_used));
      const auto h = check_vertex_bound("Pr[not E_v]", *oracle.per_event, dc.value, 2.0 * theorem_degree(spec.graph) + 1.0,
                                        col.colors_used);
      passed = h.passed();
      result = {{"kind", "events"}, {"hypothesis", report::to_json(h)}};
      os << h.describe();
    } else if (j.contains("weights") || j.contains("graph")) {
      const io::PolymerSpec spec = io::parse_polymer_spec(text, fs::path(cfg.input).parent_path());
      const int deg = spec.max_degree.value_or(spec.graph.max_degree());
      const DeltaChoice dc = resolve_delta(cfg, max_weight_root(spec), 2.0 * deg + 1.0, 1.0);
      const int cap = cfg.size_cap > 0 ? cfg.size_cap
                                       : choose_truncation_order(spec.graph.vertex_count(), deg, dc.value, cfg.epsilon);
      WeightOracle oracle([&spec](const VertexSet& s) { return spec.weight(s); });
      const ConditionReport c = check_weight_condition(spec.graph, oracle, cap, dc.value, deg, ExecutionOptions{cfg.threads});
      passed = c.passed();
      result = {{"kind", "polymer"}, {"condition", report::to_json(c)}};
      os << c.describe();
    } else {
      throw ParseError("cannot tell the kind of spec: expected 'projectors', 'probabilities' or 'weights'");
    }
  }
  result["passed"] = passed;
  out.emit(result, os.str());
  return passed ? kOk : kHypothesis;
}

int cmd_oracle(const std::string& which, const RunConfig& cfg, Output& out) {
  const auto budget = oracle::OracleBudget::from_env();
  std::ostringstream os;
  os.precision(15);
  json result;
  if (which == "sat-count") {
    const CnfFormula f = parse_dimacs(io::read_file(cfg.input));
    const auto n = oracle::brute_force_sat_count(f, budget);
    result = {{"count", n}};
    os << "satisfying assignments = " << n << "\n";
  } else if (which == "ie-prob") {
    const std::string text = io::read_file(cfg.input);
    if (looks_like_json(text)) {
      const io::EventSpec spec = io::parse_event_spec(text, fs::path(cfg.input).parent_path());
      VertexSet all(static_cast<std::size_t>(spec.graph.vertex_count()));
      std::iota(all.begin(), all.end(), 0);
      const double p = oracle::exact_inclusion_exclusion_probability(
          oracle::factorized_joint(spec.graph, [&spec](const VertexSet& s) { return spec.joint(s); }), all, budget);
      result = {{"probability", p}};
      os << "Pr[all events occur] = " << p << "\n";
    } else {
      const CnfFormula f = parse_dimacs(text);
      VertexSet all(static_cast<std::size_t>(f.clause_count()));
      std::iota(all.begin(), all.end(), 0);
      const Rational p = oracle::exact_inclusion_exclusion_probability(f, all, budget);
      const Rational count = p * Rational(BigInt(1) << f.variable_count);
      result = {{"probability", static_cast<double>(p)}, {"probability_exact", p.str()}, {"count_exact", count.str()}};
      os << "Pr[all clauses satisfied] = " << p.str() << " = " << static_cast<double>(p) << "\n";
      os << "satisfying assignments = " << count.str() << "\n";
    }
  } else if (which == "polymer-z") {
    const io::PolymerSpec spec = io::parse_polymer_spec(io::read_file(cfg.input), fs::path(cfg.input).parent_path());
    const auto z = oracle::brute_force_polymer_Z(spec.graph, [&spec](const VertexSet& s) { return spec.weight(s); }, budget);
    result = {{"Z", report::complex_pair(z)}};
    os << "Z = " << z.real() << (z.imag() != 0.0 ? " + " + std::to_string(z.imag()) + "i" : "") << "\n";
  } else if (which == "dim" || which == "detectability") {
    const auto spec = io::parse_projector_spec(io::read_file(cfg.input));
    const auto ex = oracle::exact_dimension_full_diagonalization(spec.d, spec.qudit_count, spec.projectors, budget);
    result = {{"normalized_dim", ex.normalized_dim}, {"absolute_dim", ex.nullity}, {"lambda_star", ex.lambda_star}};
    os << "normalized dim = " << ex.normalized_dim << ", absolute dim = " << ex.nullity << ", lambda* = " << ex.lambda_star
       << "\n";
    if (which == "detectability") {
      const ProjectorSet ps(spec.d, spec.qudit_count, spec.projectors);
      const Coloring col = coloring_of(cfg, support_dependency_graph(ps));
      const auto tr = oracle::exact_detectability_trace(spec.d, spec.projectors, col, cfg.T, budget);
      result["T"] = cfg.T;
      result["trace"] = report::complex_pair(tr);
      result["trace_minus_dim"] = tr.real() - ex.normalized_dim;
      os << "detectability trace (T = " << cfg.T << ") = " << tr.real() << ", minus dim = " << tr.real() - ex.normalized_dim
         << "\n";
    }
  } else if (which == "ursell") {
    const std::string text = io::read_file(cfg.input);
    DependencyGraph h(0, {});
    if (looks_like_json(text)) {
      const json j = io::parse_json(text);
      h = io::parse_graph_block(j.contains("graph") ? j["graph"] : j, fs::path(cfg.input).parent_path());
    } else {
      std::istringstream in(text);
      h = read_edge_list(in);
    }
    const Rational phi = oracle::ursell_bruteforce(h);
    result = {{"ursell", phi.str()}};
    os << "phi(H) = " << phi.str() << "\n";
  } else {
    throw InvalidArgument("unknown oracle '" + which + "'");
  }
  out.emit(result, os.str(), {{"oracle", which}});
  return kOk;
}

int report_error(const RunConfig& cfg, const std::string& command, const std::string& kind, const std::string& message,
                 const std::string& detail, int code) {
  if (cfg.format == "json") {
    json line = {{"command", command},
                 {"input", cfg.input},
                 {"error", {{"kind", kind}, {"message", message}, {"report", detail}}},
                 {"exit_code", code}};
    std::cout << line.dump() << "\n";
  } else {
    std::cerr << "error (" << kind << "): " << message << "\n";
    if (!detail.empty()) std::cerr << detail;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate counting in local lemma regimes via truncated cluster expansion"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string oracle_name;

  auto common = [&](CLI::App* sub, bool numeric) {
    sub->add_option("input", cfg.input, "input file")->required();
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"human", "json"}));
    sub->add_option("--threads", cfg.threads, "worker threads (0: all cores)");
    sub->add_option("--coloring", cfg.coloring_path, "file with one colour per vertex");
    if (!numeric) return;
    sub->add_option("--epsilon", cfg.epsilon, "target relative error, in (0, 1]")->check(CLI::Range(1e-300, 1.0));
    sub->add_option("--delta", cfg.delta, "decay slack delta > 0, or 'auto'");
    sub->add_flag("--force", cfg.force, "run even when a hypothesis fails (no certificate)");
    sub->add_option("--max-order", cfg.max_order, "cap on the truncation order");
  };

  auto* count_sat = app.add_subcommand("count-sat", "approximate number of satisfying assignments of a k-CNF");
  common(count_sat, true);
  count_sat->add_flag("--exact-rational", cfg.exact_rational, "evaluate the truncated expansion in exact rationals");

  auto* prob = app.add_subcommand("prob-intersection", "approximate Pr[all events occur] from an events spec");
  common(prob, true);

  auto* commuting = app.add_subcommand("qsat-commuting", "kernel dimension of commuting projectors");
  common(commuting, true);

  auto* general = app.add_subcommand("qsat-general", "kernel dimension of general projectors");
  common(general, true);
  general->add_option("--mode", cfg.mode, "stability | detectability")->check(CLI::IsMember({"stability", "detectability"}));
  general->add_option("--T", cfg.T, "detectability power T >= 1")->check(CLI::PositiveNumber);
  general->add_option("--lambda-star", cfg.lambda_star, "certified lower bound on the spectral gap");

  auto* polymer = app.add_subcommand("polymer-z", "partition function of an explicit polymer model");
  common(polymer, true);

  auto* check = app.add_subcommand("check", "hypothesis report only");
  common(check, true);
  check->add_option("--mode", cfg.mode, "projectors: commuting | stability | detectability")
      ->check(CLI::IsMember({"commuting", "stability", "detectability"}));
  check->add_option("--T", cfg.T, "detectability power T >= 1")->check(CLI::PositiveNumber);
  check->add_option("--size-cap", cfg.size_cap, "largest set size to check (default: the truncation order)");

  auto* oracle_cmd = app.add_subcommand("oracle", "exact brute-force computations (desk scale)");
  oracle_cmd->add_option("which", oracle_name, "sat-count | ie-prob | polymer-z | dim | detectability | ursell")
      ->required()
      ->check(CLI::IsMember({"sat-count", "ie-prob", "polymer-z", "dim", "detectability", "ursell"}));
  common(oracle_cmd, false);
  oracle_cmd->add_option("--T", cfg.T, "detectability power")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (check->parsed() && cfg.mode == "stability" && !check->count("--mode")) cfg.mode = "commuting";
  if (cfg.threads == 0) cfg.threads = std::max(1u, std::thread::hardware_concurrency());

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  Output out{cfg, command};
  try {
    if (command == "count-sat") return cmd_count_sat(cfg, out);
    if (command == "prob-intersection") return cmd_prob_intersection(cfg, out);
    if (command == "qsat-commuting") return cmd_qsat_commuting(cfg, out);
    if (command == "qsat-general") return cmd_qsat_general(cfg, out);
    if (command == "polymer-z") return cmd_polymer_z(cfg, out);
    if (command == "check") return cmd_check(cfg, out);
    if (command == "oracle") return cmd_oracle(oracle_name, cfg, out);
  } catch (const HypothesisError& e) {
    return report_error(cfg, command, "hypothesis", e.what(), e.report(), kHypothesis);
  } catch (const ParseError& e) {
    return report_error(cfg, command, "parse", e.what(), "", kParse);
  } catch (const InvalidArgument& e) {
    return report_error(cfg, command, "input", e.what(), "", kParse);
  } catch (const ResourceError& e) {
    return report_error(cfg, command, "resource", e.what(), "", kResource);
  } catch (const NumericError& e) {
    return report_error(cfg, command, "numeric", e.what(), "", kNumeric);
  }
  return kUsage;
}
