#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ipds/graph.hpp"
#include "ipds/model.hpp"
#include "ipds/stacked.hpp"

namespace ipds {

struct RunRow {
  int k = 0;
  double f_gap = 0.0;
  double consensus_gap = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t lo_calls = 0;
  std::uint64_t comm_rounds = 0;
  double wall_ms = 0.0;
};

struct RunRecord {
  std::vector<RunRow> rows;
};

// f(x) - f_star. Evaluation is instrumentation; no counters are touched.
double primal_gap(const ProblemSpec& p, const StackedPoint& x, double f_star);

// || (L (x) I_d) x ||_2; zero iff all rows agree.
double consensus_gap(const Graph& g, const StackedPoint& x);

// Schema: k,f_gap,consensus_gap,samples,lo_calls,comm_rounds,wall_ms with one
// row per iteration, floats at 12 significant digits, LF line endings.
void write_csv(const RunRecord& record, const std::string& path);

RunRecord read_csv(const std::string& path);

}  // namespace ipds
