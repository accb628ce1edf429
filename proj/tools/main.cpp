#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ipds/config.hpp"
#include "ipds/driver.hpp"
#include "ipds/errors.hpp"
#include "ipds/svg.hpp"

namespace {

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized projection-free optimization toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir, topologies_arg, column = "f_gap", out_file;
  double target = 0.0;
  std::vector<std::string> csv_inputs;

  auto* run = app.add_subcommand("run", "Run one experiment from a config file");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory (overrides output.csv_dir)");

  auto* topo = app.add_subcommand("topo-table", "Compare topologies at a fixed target loss");
  topo->add_option("--config", config_path, "config file")->required();
  topo->add_option("--topologies", topologies_arg, "comma-separated topology list")->required();
  topo->add_option("--target", target, "target loss")->required();
  topo->add_option("--out", out_dir, "output directory (overrides output.csv_dir)");

  auto* plot = app.add_subcommand("plot", "Render a log-scale SVG chart from run CSVs");
  plot->add_option("--column", column, "y column name");
  plot->add_option("--out", out_file, "output SVG path")->required();
  plot->add_option("csv", csv_inputs, "input CSV files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      ipds::RunConfig cfg = ipds::parse_config_file(config_path);
      if (!out_dir.empty()) cfg.csv_dir = out_dir;
      std::string csv = ipds::cmd_run(cfg);
      std::cout << "wrote " << csv << "\n";
    } else if (topo->parsed()) {
      ipds::RunConfig cfg = ipds::parse_config_file(config_path);
      if (!out_dir.empty()) cfg.csv_dir = out_dir;
      auto rows = ipds::cmd_topo_table(cfg, split_csv_list(topologies_arg), target);
      std::cout << "wrote " << ipds::topo_table_csv_path(cfg) << " (" << rows.size() << " rows)\n";
    } else if (plot->parsed()) {
      ipds::emit_svg_plot(csv_inputs, column, out_file);
      std::cout << "wrote " << out_file << "\n";
    }
  } catch (const ipds::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
