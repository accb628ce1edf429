#include "ipds/driver.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "ipds/baselines.hpp"
#include "ipds/errors.hpp"
#include "ipds/svg.hpp"

namespace ipds {

namespace {

RunResult run_algorithm(const RunConfig& cfg, const BuiltInstance& inst, const ReferenceSolution& ref) {
  if (cfg.algo == "ipds") return run_ipds(inst.problem, inst.graph, inst.set, ipds_config_from(cfg), ref);
  if (cfg.algo == "defw") {
    ThreadPool pool(std::max(1, cfg.threads));
    return run_defw(inst.problem, inst.graph, inst.set, cfg.iters, ref, cfg.threads > 1 ? &pool : nullptr);
  }
  if (cfg.algo == "pg") return run_projected_gradient(inst.problem, inst.set, cfg.iters, cfg.pg_step, ref);
  throw ConfigError("unknown algorithm: " + cfg.algo);
}

void zero_wall_ms(RunRecord& rec) {
  for (auto& row : rec.rows) row.wall_ms = 0.0;
}

}  // namespace

std::string cmd_run(const RunConfig& cfg) {
  BuiltInstance inst = build_instance(cfg);
  ReferenceSolution ref = reference_optimum(inst.problem, inst.set, cfg.reference_tol);
  RunResult result = run_algorithm(cfg, inst, ref);
  if (!cfg.timing) zero_wall_ms(result.record);

  std::filesystem::create_directories(cfg.csv_dir);
  const std::string run_id = cfg.run_id.empty() ? cfg.derived_run_id() : cfg.run_id;
  const std::string csv_path = (std::filesystem::path(cfg.csv_dir) / (run_id + ".csv")).string();
  write_csv(result.record, csv_path);

  nlohmann::json meta;
  meta["run_id"] = run_id;
  meta["algo"] = cfg.algo;
  meta["f_star"] = ref.f;
  meta["norm_A"] = operator_norm(inst.graph);
  meta["rho"] = spectral_gap(inst.graph);
  meta["L_tilde"] = smoothness_estimate(inst.problem);
  meta["m"] = inst.problem.m;
  meta["d"] = inst.problem.d;
  meta["data_count"] = inst.problem.data.n;
  meta["final_objective"] = objective_value(inst.problem, result.x);
  meta["cgs_cap_hits"] = result.cgs_cap_hits;
  nlohmann::json echo;
  for (const auto& [k, v] : cfg.raw) echo[k] = v;
  meta["config"] = echo;
  const std::string meta_path = (std::filesystem::path(cfg.csv_dir) / (run_id + ".meta.json")).string();
  std::ofstream mf(meta_path, std::ios::binary);
  if (!mf) throw DataError("cmd_run: cannot open " + meta_path);
  mf << meta.dump(2) << "\n";

  if (cfg.svg) {
    const std::string svg_path = (std::filesystem::path(cfg.csv_dir) / (run_id + ".svg")).string();
    emit_svg_plot({csv_path}, "f_gap", svg_path);
  }
  return csv_path;
}

std::string topo_table_csv_path(const RunConfig& cfg) {
  return (std::filesystem::path(cfg.csv_dir) / "topo_table.csv").string();
}

std::vector<TopoTableRow> cmd_topo_table(const RunConfig& cfg, const std::vector<std::string>& topologies,
                                         double target) {
  if (topologies.empty()) throw ConfigError("cmd_topo_table: no topologies given");
  std::vector<TopoTableRow> rows;

  for (const auto& topo_name : topologies) {
    RunConfig local = cfg;
    local.graph_kind = topology_from_string(topo_name);
    BuiltInstance inst = build_instance(local);
    ReferenceSolution ref = reference_optimum(inst.problem, inst.set, local.reference_tol);

    for (const std::string algo : {"ipds", "defw"}) {
      local.algo = algo;
      RunResult result = run_algorithm(local, inst, ref);
      TopoTableRow row;
      row.algo = algo;
      row.topology = topo_name;
      row.m = local.m;
      row.target = target;
      for (const auto& r : result.record.rows) {
        if (r.f_gap + ref.f <= target) {
          row.reached = true;
          row.iters_to_target = r.k;
          row.samples_to_target = static_cast<long long>(r.samples);
          break;
        }
      }
      const auto& last = result.record.rows.back();
      row.total_samples = last.samples;
      row.total_lo_calls = last.lo_calls;
      row.total_comm_rounds = last.comm_rounds;
      row.final_objective = objective_value(inst.problem, result.x);
      rows.push_back(row);
    }
  }

  std::filesystem::create_directories(cfg.csv_dir);
  std::ofstream out(topo_table_csv_path(cfg), std::ios::binary);
  if (!out) throw DataError("cmd_topo_table: cannot open output CSV");
  out << "algo,topology,m,target,reached,iters_to_target,samples_to_target,total_samples,total_lo_calls,"
         "total_comm_rounds,final_objective\n";
  char buf[384];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%d,%.12g,%d,%ld,%lld,%llu,%llu,%llu,%.12g\n", r.algo.c_str(),
                  r.topology.c_str(), r.m, r.target, r.reached ? 1 : 0, r.iters_to_target, r.samples_to_target,
                  static_cast<unsigned long long>(r.total_samples), static_cast<unsigned long long>(r.total_lo_calls),
                  static_cast<unsigned long long>(r.total_comm_rounds), r.final_objective);
    out << buf;
  }
  return rows;
}

}  // namespace ipds
