#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "latpilot/experiments.hpp"

namespace {

using latpilot::Table;

enum class Format { Csv, Json };

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_seed = false) {
  cmd->add_option("--config", opts.config_path, "config file (key = value sections)")
      ->required();
  cmd->add_option("--out", opts.out_path, "output file (default: stdout)");
  cmd->add_option("--format", opts.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  if (with_seed)
    cmd->add_option("--seed", opts.seed,
                    "override the configured seed list with one seed");
}

void emit_table(const Table& table, Format format, std::ostream& os) {
  if (format == Format::Csv)
    table.write_csv(os);
  else
    table.write_json_lines(os);
}

void write_table(const Table& table, const CommonOpts& opts, const std::string& suffix) {
  const Format format = opts.format == "json" ? Format::Json : Format::Csv;
  if (opts.out_path.empty()) {
    if (!suffix.empty()) std::cout << "# table: " << suffix << "\n";
    emit_table(table, format, std::cout);
    return;
  }
  std::string path = opts.out_path;
  if (!suffix.empty()) {
    const auto dot = path.find_last_of('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
    const std::string stem = dot == std::string::npos ? path : path.substr(0, dot);
    path = stem + "-" + suffix + ext;
  }
  std::ofstream out(path);
  if (!out) throw latpilot::ConfigError("cannot open output file: " + path);
  emit_table(table, format, out);
  std::cerr << "wrote " << path << "\n";
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"LMMSE-optimal lattice pilot design for doubly dispersive OFDM grids"};
  app.require_subcommand(1);

  CommonOpts approx, check, search, bound, mse;
  auto* cmd_approx = app.add_subcommand(
      "approx-error", "covariance approximation error sweeps (diagonalization "
                      "vs dimension, zero-th order integration vs spread factor)");
  add_common(cmd_approx, approx);
  auto* cmd_check = app.add_subcommand(
      "lattice-check", "run both pilot-lattice feasibility checkers on one lattice");
  add_common(cmd_check, check);
  auto* cmd_search = app.add_subcommand(
      "lattice-search", "enumerate feasible sublattices of a given volume");
  add_common(cmd_search, search);
  auto* cmd_bound = app.add_subcommand(
      "bound", "estimation-error lower bound under both diagonal-count conventions");
  add_common(cmd_bound, bound);
  auto* cmd_mse = app.add_subcommand(
      "mse", "Monte Carlo LMMSE MSE against the analytic error-covariance trace");
  add_common(cmd_mse, mse, /*with_seed=*/true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_approx->parsed()) {
      const auto cfg = latpilot::KeyValueConfig::parse_file(approx.config_path);
      const auto tables = latpilot::run_approx_error(cfg);
      for (const auto& named : tables) write_table(named.table, approx, named.name);
    } else if (cmd_check->parsed()) {
      const auto cfg = latpilot::KeyValueConfig::parse_file(check.config_path);
      const auto report = latpilot::run_lattice_check(cfg);
      std::cout << report.text;
      if (!check.out_path.empty()) write_table(report.magnitude_map, check, "");
    } else if (cmd_search->parsed()) {
      const auto cfg = latpilot::KeyValueConfig::parse_file(search.config_path);
      write_table(latpilot::run_lattice_search(cfg), search, "");
    } else if (cmd_bound->parsed()) {
      const auto cfg = latpilot::KeyValueConfig::parse_file(bound.config_path);
      write_table(latpilot::run_bound(cfg), bound, "");
    } else if (cmd_mse->parsed()) {
      const auto cfg = latpilot::KeyValueConfig::parse_file(mse.config_path);
      write_table(latpilot::run_mse(cfg, mse.seed), mse, "");
    }
  } catch (const latpilot::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const latpilot::InternalConsistencyError& e) {
    std::cerr << "internal consistency failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
