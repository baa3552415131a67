// End-to-end checks of the installed command-line interface: exit codes,
// output formats, reproducibility.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "latpilot/table.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = LATPILOT_CLI_PATH;

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "latpilot_cli_stdout.txt";
  const std::string cmd = kCli + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream buf;
  buf << in.rdbuf();
  result.stdout_text = buf.str();
  return result;
}

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << body;
  return path;
}

const std::string kCommonBlocks = R"(
[grid]
subcarriers = 16
symbols = 8
T_seconds = 1.07
F_hz = 1.0

[profile]
tau_d_seconds = 0.1875
nu_d_hz = 0.35046728971962615

[stats]
sigma_n2 = 1.0
beta = 1.0
alpha_db = 10.0

[region]
r_tau = 3
r_nu = 3
)";

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

} // namespace

TEST_CASE("lattice-check passes on a feasible lattice and fails cleanly") {
  const auto feasible =
      write_config("check_ok.cfg", kCommonBlocks + "\n[lattice]\nv = 2 -2 2 2\n");
  const auto ok = run("lattice-check --config " + feasible.string());
  CHECK(ok.exit_code == 0);
  CHECK(ok.stdout_text.find("analytic check: PASS") != std::string::npos);
  CHECK(ok.stdout_text.find("fft check:      PASS") != std::string::npos);
  CHECK(ok.stdout_text.find("K = 16") != std::string::npos);

  const auto infeasible =
      write_config("check_bad.cfg", kCommonBlocks + "\n[lattice]\nv = 1 0 0 8\n");
  const auto bad = run("lattice-check --config " + infeasible.string());
  CHECK(bad.exit_code == 0); // a FAIL verdict is still a successful run
  CHECK(bad.stdout_text.find("analytic check: FAIL") != std::string::npos);
  CHECK(bad.stdout_text.find("fft check:      FAIL") != std::string::npos);
  CHECK(bad.stdout_text.find("violations") != std::string::npos);
}

TEST_CASE("configuration problems exit with code 1") {
  CHECK(run("bound --config /nonexistent.cfg").exit_code == 1);
  const auto broken = write_config("broken.cfg", "[grid]\nsubcarriers = many\n");
  CHECK(run("bound --config " + broken.string()).exit_code == 1);
  const auto degenerate =
      write_config("degen.cfg", kCommonBlocks + "\n[lattice]\nv = 1 0 0 16\n");
  CHECK(run("lattice-check --config " + degenerate.string()).exit_code == 1);
}

TEST_CASE("lattice-search emits a parseable nonempty csv") {
  const auto cfg =
      write_config("search.cfg", kCommonBlocks + "\n[search]\nvolume = 8\n");
  const auto out = fs::temp_directory_path() / "search.csv";
  const auto result =
      run("lattice-search --config " + cfg.string() + " --out " + out.string());
  CHECK(result.exit_code == 0);
  std::ifstream in(out);
  const auto table = latpilot::Table::parse_csv(
      in, {{"v11", latpilot::Table::ColType::Integer},
           {"v12", latpilot::Table::ColType::Integer},
           {"v21", latpilot::Table::ColType::Integer},
           {"v22", latpilot::Table::ColType::Integer},
           {"L", latpilot::Table::ColType::Integer},
           {"K", latpilot::Table::ColType::Integer},
           {"bound", latpilot::Table::ColType::Real}});
  CHECK(table.row_count() > 0);
}

TEST_CASE("bound output is monotone in the budget") {
  const auto parse_bound = [](const std::string& text) {
    std::istringstream is(text);
    const auto table = latpilot::Table::parse_csv(
        is, {{"convention", latpilot::Table::ColType::Text},
             {"diag_count", latpilot::Table::ColType::Real},
             {"bound", latpilot::Table::ColType::Real}});
    return std::get<double>(table.rows()[0][2]);
  };
  const auto cfg1 = write_config("bound1.cfg", kCommonBlocks);
  std::string doubled = kCommonBlocks;
  const auto pos = doubled.find("beta = 1.0");
  doubled.replace(pos, 10, "beta = 2.0");
  const auto cfg2 = write_config("bound2.cfg", doubled);
  const auto b1 = run("bound --config " + cfg1.string());
  const auto b2 = run("bound --config " + cfg2.string());
  CHECK(b1.exit_code == 0);
  CHECK(b2.exit_code == 0);
  CHECK(parse_bound(b2.stdout_text) < parse_bound(b1.stdout_text));
}

TEST_CASE("mse runs are byte-identical for a fixed seed and config") {
  const auto cfg = write_config(
      "mse.cfg", kCommonBlocks + "\n[lattice]\nv = 2 -2 2 2\n[mse]\ntrials = 200\nseeds = 5\n");
  const auto out1 = fs::temp_directory_path() / "mse1.csv";
  const auto out2 = fs::temp_directory_path() / "mse2.csv";
  CHECK(run("mse --config " + cfg.string() + " --out " + out1.string()).exit_code == 0);
  CHECK(run("mse --config " + cfg.string() + " --out " + out2.string()).exit_code == 0);
  const auto text1 = read_file(out1);
  CHECK(text1 == read_file(out2));
  CHECK(text1.find("OK") != std::string::npos);

  // --seed overrides the configured list
  const auto out3 = fs::temp_directory_path() / "mse3.csv";
  CHECK(run("mse --config " + cfg.string() + " --seed 9 --out " + out3.string())
            .exit_code == 0);
  CHECK(read_file(out3).find(",9,") != std::string::npos);
}

TEST_CASE("json format emits one record per row") {
  const auto cfg = write_config(
      "msej.cfg", kCommonBlocks + "\n[lattice]\nv = 2 -2 2 2\n[mse]\ntrials = 50\nseeds = 1 2\n");
  const auto result = run("mse --config " + cfg.string() + " --format json");
  CHECK(result.exit_code == 0);
  int lines = 0;
  std::istringstream is(result.stdout_text);
  std::string line;
  while (std::getline(is, line))
    if (!line.empty() && line.front() == '{') ++lines;
  CHECK(lines == 2);
}

TEST_CASE("approx-error writes one suffixed table per configured sweep") {
  const auto cfg = write_config("approx.cfg", R"(
[grid]
subcarriers = 16
symbols = 8
T_seconds = 1.07
F_hz = 1.0

[diagonalization]
dims = 32 64
lag_step = 0.0625

[integration]
delta_d = 1e-4 1e-3
shape_delay = triangular
shape_doppler = triangular
)");
  const auto out = fs::temp_directory_path() / "approx.csv";
  const auto result =
      run("approx-error --config " + cfg.string() + " --out " + out.string());
  CHECK(result.exit_code == 0);
  const auto diag = fs::temp_directory_path() / "approx-diagonalization.csv";
  const auto integ = fs::temp_directory_path() / "approx-integration.csv";
  CHECK(fs::exists(diag));
  CHECK(fs::exists(integ));
  std::ifstream in(integ);
  const auto table = latpilot::Table::parse_csv(
      in, {{"delta_d", latpilot::Table::ColType::Real},
           {"rel_error", latpilot::Table::ColType::Real}});
  REQUIRE(table.row_count() == 2);
  CHECK(std::get<double>(table.rows()[1][1]) > std::get<double>(table.rows()[0][1]));
}
