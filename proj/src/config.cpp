#include "ipds/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ipds/errors.hpp"
#include "ipds/libsvm.hpp"
#include "ipds/synthetic.hpp"

namespace ipds {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double as_double(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') throw ConfigError(key + ": not a number: '" + value + "'");
  return v;
}

long long as_int(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0') throw ConfigError(key + ": not an integer: '" + value + "'");
  return v;
}

std::uint64_t as_seed(const std::string& key, const std::string& value) {
  long long v = as_int(key, value);
  if (v < 0) throw ConfigError(key + ": seed must be >= 0");
  return static_cast<std::uint64_t>(v);
}

bool as_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

}  // namespace

std::string RunConfig::derived_run_id() const {
  std::ostringstream id;
  id << algo << "_" << to_string(problem_kind) << "_" << to_string(graph_kind) << "_m" << m;
  return id.str();
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  std::map<std::string, std::string> kv;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    auto eq = stripped.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", origin, lineno);
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", origin, lineno);
    if (value.empty()) throw ParseError("empty value for key '" + key + "'", origin, lineno);
    if (kv.count(key)) throw ParseError("duplicate key '" + key + "'", origin, lineno);
    kv[key] = value;
  }
  cfg.raw = kv;

  auto take = [&](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (auto* v = take("problem.kind")) cfg.problem_kind = objective_from_string(*v);
  if (auto* v = take("problem.data")) cfg.data_path = *v;
  if (auto* v = take("problem.synthetic")) cfg.synthetic = as_bool("problem.synthetic", *v);
  if (auto* v = take("problem.n")) cfg.synth_n = static_cast<int>(as_int("problem.n", *v));
  if (auto* v = take("problem.d")) cfg.synth_d = static_cast<int>(as_int("problem.d", *v));
  if (auto* v = take("problem.feature_scale")) cfg.feature_scale = as_double("problem.feature_scale", *v);
  if (auto* v = take("problem.rows_per_node")) cfg.rows_per_node = static_cast<int>(as_int("problem.rows_per_node", *v));
  if (auto* v = take("problem.l_max")) cfg.l_max = as_double("problem.l_max", *v);
  if (auto* v = take("problem.x_ref_scale")) cfg.x_ref_scale = as_double("problem.x_ref_scale", *v);
  if (auto* v = take("problem.seed")) cfg.problem_seed = as_seed("problem.seed", *v);
  if (auto* v = take("problem.mu")) cfg.mu = as_double("problem.mu", *v);
  if (auto* v = take("problem.sigma")) cfg.sigma = as_double("problem.sigma", *v);

  if (auto* v = take("graph.kind")) cfg.graph_kind = topology_from_string(*v);
  if (auto* v = take("graph.m")) cfg.m = static_cast<int>(as_int("graph.m", *v));
  if (auto* v = take("graph.p")) cfg.edge_p = as_double("graph.p", *v);
  if (auto* v = take("graph.seed")) cfg.graph_seed = as_seed("graph.seed", *v);

  if (auto* v = take("constraint.kind")) cfg.set_kind = set_kind_from_string(*v);
  if (auto* v = take("constraint.radius")) cfg.radius = as_double("constraint.radius", *v);
  if (auto* v = take("constraint.lo")) cfg.box_lo = as_double("constraint.lo", *v);
  if (auto* v = take("constraint.hi")) cfg.box_hi = as_double("constraint.hi", *v);

  if (auto* v = take("algo.name")) cfg.algo = *v;
  if (auto* v = take("algo.N")) cfg.N = static_cast<int>(as_int("algo.N", *v));
  if (auto* v = take("algo.iters")) cfg.iters = static_cast<int>(as_int("algo.iters", *v));
  if (auto* v = take("algo.R")) cfg.R = as_double("algo.R", *v);
  if (auto* v = take("algo.c_const")) cfg.c_const = as_double("algo.c_const", *v);
  if (auto* v = take("algo.lo_mode")) cfg.lo.mode = lo_mode_from_string(*v);
  if (auto* v = take("algo.epsilon")) cfg.lo.epsilon = as_double("algo.epsilon", *v);
  if (auto* v = take("algo.tol")) cfg.lo.tol = as_double("algo.tol", *v);
  if (auto* v = take("algo.sc_constant")) cfg.lo.sc_constant = as_double("algo.sc_constant", *v);
  if (auto* v = take("algo.inner_memory")) cfg.inner_memory = inner_memory_from_string(*v);
  if (auto* v = take("algo.seed")) cfg.algo_seed = as_seed("algo.seed", *v);
  if (auto* v = take("algo.threads")) cfg.threads = static_cast<int>(as_int("algo.threads", *v));
  if (auto* v = take("algo.step")) cfg.pg_step = (*v == "auto") ? -1.0 : as_double("algo.step", *v);

  if (auto* v = take("reference.tol")) cfg.reference_tol = as_double("reference.tol", *v);

  if (auto* v = take("output.csv_dir")) cfg.csv_dir = *v;
  if (auto* v = take("output.run_id")) cfg.run_id = *v;
  if (auto* v = take("output.svg")) cfg.svg = as_bool("output.svg", *v);
  if (auto* v = take("output.timing")) cfg.timing = as_bool("output.timing", *v);

  static const char* known[] = {
      "problem.kind",      "problem.data",        "problem.synthetic", "problem.n",
      "problem.d",         "problem.feature_scale", "problem.rows_per_node", "problem.l_max",
      "problem.x_ref_scale", "problem.seed",      "problem.mu",        "problem.sigma",
      "graph.kind",        "graph.m",             "graph.p",           "graph.seed",
      "constraint.kind",   "constraint.radius",   "constraint.lo",     "constraint.hi",
      "algo.name",         "algo.N",              "algo.iters",        "algo.R",
      "algo.c_const",      "algo.lo_mode",        "algo.epsilon",      "algo.tol",
      "algo.sc_constant",  "algo.inner_memory",   "algo.seed",         "algo.threads",
      "algo.step",         "reference.tol",       "output.csv_dir",    "output.run_id",
      "output.svg",        "output.timing",
  };
  for (const auto& [key, value] : kv) {
    (void)value;
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known))
      throw ConfigError("unknown config key: " + key);
  }

  // Range validation with named diagnostics.
  if (!cfg.data_path.empty() && cfg.synthetic) throw ConfigError("problem.data and problem.synthetic are exclusive");
  if (cfg.data_path.empty() && !cfg.synthetic) throw ConfigError("problem needs problem.data or problem.synthetic");
  if (!cfg.data_path.empty() && !std::filesystem::exists(cfg.data_path))
    throw ConfigError("problem.data: file does not exist: " + cfg.data_path);
  if (cfg.synthetic) {
    if (cfg.synth_d < 1) throw ConfigError("problem.d: must be >= 1 for synthetic problems");
    if (cfg.problem_kind == ObjectiveKind::logistic && cfg.synth_n < 1)
      throw ConfigError("problem.n: must be >= 1 for synthetic logistic");
    if (cfg.problem_kind == ObjectiveKind::quadratic && cfg.rows_per_node < 1)
      throw ConfigError("problem.rows_per_node: must be >= 1 for synthetic quadratic");
    if (!(cfg.feature_scale > 0.0)) throw ConfigError("problem.feature_scale: must be > 0");
    if (!(cfg.l_max > 0.0)) throw ConfigError("problem.l_max: must be > 0");
  }
  if (cfg.mu < 0.0) throw ConfigError("problem.mu: must be >= 0");
  if (cfg.sigma < 0.0) throw ConfigError("problem.sigma: must be >= 0");
  if (cfg.m < 2) throw ConfigError("graph.m: must be >= 2");
  if (cfg.graph_kind == Topology::erdos_renyi && !(cfg.edge_p > 0.0 && cfg.edge_p <= 1.0))
    throw ConfigError("graph.p: must be in (0, 1] for erdos_renyi");
  if (cfg.set_kind != SetKind::box && !(cfg.radius > 0.0)) throw ConfigError("constraint.radius: must be > 0");
  if (cfg.set_kind == SetKind::box && !(cfg.box_lo < cfg.box_hi))
    throw ConfigError("constraint.lo/constraint.hi: need lo < hi");
  if (cfg.algo != "ipds" && cfg.algo != "defw" && cfg.algo != "pg")
    throw ConfigError("algo.name: must be ipds, defw, or pg");
  if (cfg.N < 1) throw ConfigError("algo.N: must be >= 1");
  if (cfg.iters < 1) throw ConfigError("algo.iters: must be >= 1");
  if (cfg.lo.mode == LoMode::scheduled && !(cfg.lo.epsilon > 0.0)) throw ConfigError("algo.epsilon: must be > 0");
  if (cfg.lo.mode == LoMode::fixed && !(cfg.lo.tol > 0.0)) throw ConfigError("algo.tol: must be > 0");
  if (cfg.lo.sc_constant < 0.0) throw ConfigError("algo.sc_constant: must be >= 0");
  if (cfg.threads < 1) throw ConfigError("algo.threads: must be >= 1");
  if (!(cfg.reference_tol > 0.0)) throw ConfigError("reference.tol: must be > 0");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

BuiltInstance build_instance(const RunConfig& cfg) {
  BuiltInstance inst;

  if (cfg.problem_kind == ObjectiveKind::quadratic && cfg.synthetic) {
    int rows = std::max(cfg.rows_per_node, cfg.synth_d);  // generator needs rows >= d
    inst.problem = make_quadratic_problem(cfg.m, rows, cfg.synth_d, cfg.l_max, cfg.mu, cfg.sigma, cfg.x_ref_scale,
                                          cfg.problem_seed);
  } else {
    Dataset ds = cfg.synthetic ? synth_logistic(cfg.synth_n, cfg.synth_d, cfg.problem_seed, cfg.feature_scale)
                               : parse_libsvm(cfg.data_path);
    inst.problem = make_problem(cfg.problem_kind, std::move(ds), cfg.m, cfg.mu, cfg.sigma, cfg.problem_seed);
  }

  GraphParams gp;
  gp.p = cfg.edge_p;
  inst.graph = build_topology(cfg.graph_kind, cfg.m, gp, cfg.graph_seed);

  const int d = inst.problem.d;
  switch (cfg.set_kind) {
    case SetKind::l2_ball: inst.set = ConstraintSet::l2_ball(d, cfg.radius); break;
    case SetKind::l1_ball: inst.set = ConstraintSet::l1_ball(d, cfg.radius); break;
    case SetKind::simplex: inst.set = ConstraintSet::simplex(d, cfg.radius); break;
    case SetKind::box: inst.set = ConstraintSet::box(d, cfg.box_lo, cfg.box_hi); break;
  }
  return inst;
}

IpdsConfig ipds_config_from(const RunConfig& cfg) {
  IpdsConfig c;
  c.N = cfg.N;
  c.R = cfg.R;
  c.c_const = cfg.c_const;
  c.lo = cfg.lo;
  c.inner_memory = cfg.inner_memory;
  c.seed = cfg.algo_seed;
  c.threads = cfg.threads;
  return c;
}

}  // namespace ipds
