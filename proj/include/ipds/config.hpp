#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ipds/feasible.hpp"
#include "ipds/graph.hpp"
#include "ipds/ipds.hpp"
#include "ipds/model.hpp"

namespace ipds {

// Flat key = value run description. Unknown keys, duplicate keys, and
// out-of-range values are rejected with the offending key named.
struct RunConfig {
  // problem
  ObjectiveKind problem_kind = ObjectiveKind::logistic;
  std::string data_path;       // LIBSVM file; empty means synthetic
  bool synthetic = false;
  int synth_n = 0;             // synthetic logistic sample count
  int synth_d = 0;             // synthetic dimension
  double feature_scale = 1.0;  // synthetic logistic
  int rows_per_node = 0;       // synthetic quadratic
  double l_max = 1.0;          // synthetic quadratic top curvature
  double x_ref_scale = 1.0;    // synthetic quadratic planted-point norm
  std::uint64_t problem_seed = 1;
  double mu = 0.0;
  double sigma = 0.0;

  // graph
  Topology graph_kind = Topology::complete;
  int m = 2;
  double edge_p = 0.0;
  std::uint64_t graph_seed = 1;

  // constraint
  SetKind set_kind = SetKind::l2_ball;
  double radius = 1.0;
  double box_lo = -1.0, box_hi = 1.0;

  // algorithm
  std::string algo = "ipds";  // ipds | defw | pg
  int N = 50;                 // ipds outer iterations
  int iters = 100;            // defw / pg iterations
  double R = 0.0;             // 0 = auto (diameter)
  double c_const = -1.0;      // < 0 = auto (sigma^2 / R^2)
  LoPolicy lo;
  InnerMemory inner_memory = InnerMemory::literal;
  std::uint64_t algo_seed = 1;
  int threads = 1;
  double pg_step = -1.0;  // < 0 = auto (1/L)

  double reference_tol = 1e-9;

  // output
  std::string csv_dir = ".";
  std::string run_id;  // empty = derived
  bool svg = false;
  bool timing = false;

  // raw key/value pairs as parsed, for the meta sidecar
  std::map<std::string, std::string> raw;

  std::string derived_run_id() const;
};

RunConfig parse_config_text(const std::string& text, const std::string& origin);
RunConfig parse_config_file(const std::string& path);

// Materializes the problem / graph / constraint set triple.
struct BuiltInstance {
  ProblemSpec problem;
  Graph graph;
  ConstraintSet set;
};
BuiltInstance build_instance(const RunConfig& cfg);

IpdsConfig ipds_config_from(const RunConfig& cfg);

}  // namespace ipds
