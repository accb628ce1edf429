#include "ipds/metrics.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ipds/errors.hpp"

namespace ipds {

double primal_gap(const ProblemSpec& p, const StackedPoint& x, double f_star) {
  return objective_value(p, x) - f_star;
}

double consensus_gap(const Graph& g, const StackedPoint& x) {
  StackedPoint ax = apply_constraint(g, x);
  return frobenius_norm(ax);
}

static const char* kCsvHeader = "k,f_gap,consensus_gap,samples,lo_calls,comm_rounds,wall_ms";

void write_csv(const RunRecord& record, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw DataError("write_csv: cannot open " + path);
  out << kCsvHeader << "\n";
  char buf[256];
  for (const auto& r : record.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%.12g\n", r.k, r.f_gap,
                  r.consensus_gap, r.samples, r.lo_calls, r.comm_rounds, r.wall_ms);
    out << buf;
  }
  if (!out) throw DataError("write_csv: write failed for " + path);
}

RunRecord read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("read_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("read_csv: empty file " + path);
  if (line != kCsvHeader) throw DataError("read_csv: unexpected header in " + path);
  RunRecord rec;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    RunRow r;
    std::istringstream ss(line);
    char comma;
    if (!(ss >> r.k >> comma >> r.f_gap >> comma >> r.consensus_gap >> comma >> r.samples >> comma >> r.lo_calls >>
          comma >> r.comm_rounds >> comma >> r.wall_ms))
      throw ParseError("bad CSV row", path, lineno);
    rec.rows.push_back(r);
  }
  return rec;
}

}  // namespace ipds
