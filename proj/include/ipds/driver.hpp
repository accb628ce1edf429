#pragma once

#include <string>
#include <vector>

#include "ipds/config.hpp"
#include "ipds/metrics.hpp"

namespace ipds {

// Full single-run pipeline: build, reference solve, run, CSV + meta sidecar.
// Returns the CSV path it wrote.
std::string cmd_run(const RunConfig& cfg);

struct TopoTableRow {
  std::string algo;
  std::string topology;
  int m = 0;
  double target = 0.0;
  bool reached = false;
  long iters_to_target = -1;
  long long samples_to_target = -1;
  std::uint64_t total_samples = 0;
  std::uint64_t total_lo_calls = 0;
  std::uint64_t total_comm_rounds = 0;
  double final_objective = 0.0;
};

// Runs I-PDS and DeFW on each topology at fixed m and records the gradient
// samples needed to reach the target loss. Writes <csv_dir>/topo_table.csv.
std::vector<TopoTableRow> cmd_topo_table(const RunConfig& cfg, const std::vector<std::string>& topologies,
                                         double target);

std::string topo_table_csv_path(const RunConfig& cfg);

}  // namespace ipds
