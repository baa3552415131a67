#include "latpilot/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "latpilot/covariance.hpp"
#include "latpilot/estimator.hpp"
#include "latpilot/montecarlo.hpp"

namespace latpilot {

namespace {

using ColType = Table::ColType;

ChannelProfile profile_from_keys(const KeyValueConfig& cfg, const std::string& section,
                                 const GridConfig& grid, double tau_d, double nu_d) {
  const double s0 = cfg.get_real(section, "s0", 1.0);
  if (!(s0 > 0.0)) throw ConfigError("[" + section + "] s0 must be positive");
  const double peak = std::sqrt(s0);
  const auto make = [&](const std::string& shape_key, const std::string& width_key,
                        double default_width) {
    const std::string shape = cfg.get_string(section, shape_key, "rectangular");
    if (shape == "rectangular") return PowerProfile::rectangular(peak);
    if (shape == "triangular")
      return PowerProfile::triangular(peak,
                                      cfg.get_real(section, width_key, default_width));
    throw ConfigError("[" + section + "] " + shape_key +
                      ": unknown shape '" + shape + "'");
  };
  ChannelProfile p;
  p.delay_spread = tau_d;
  p.doppler_spread = nu_d;
  p.delay_profile =
      make("shape_delay", "delay_width_seconds", 1.0 / grid.subcarrier_spacing);
  p.doppler_profile =
      make("shape_doppler", "doppler_width_hz", 1.0 / grid.symbol_duration);
  p.validate();
  return p;
}

std::string lattice_id(const LatticeSpec& spec) {
  std::ostringstream os;
  os << "V=[" << spec.basis(0, 0) << " " << spec.basis(0, 1) << "; "
     << spec.basis(1, 0) << " " << spec.basis(1, 1) << "]+r=[" << spec.offset(0)
     << " " << spec.offset(1) << "]";
  return os.str();
}

} // namespace

GridConfig parse_grid(const KeyValueConfig& cfg) {
  GridConfig grid;
  grid.subcarriers = static_cast<int>(cfg.get_int("grid", "subcarriers"));
  grid.symbols = static_cast<int>(cfg.get_int("grid", "symbols"));
  grid.symbol_duration = cfg.get_real("grid", "T_seconds");
  grid.subcarrier_spacing = cfg.get_real("grid", "F_hz");
  try {
    grid.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("[grid] ") + e.what());
  }
  return grid;
}

ChannelProfile parse_profile(const KeyValueConfig& cfg, const GridConfig& grid) {
  const double tau_d = cfg.get_real("profile", "tau_d_seconds");
  const double nu_d = cfg.get_real("profile", "nu_d_hz");
  try {
    return profile_from_keys(cfg, "profile", grid, tau_d, nu_d);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("[profile] ") + e.what());
  }
}

NoiseDataStats parse_stats(const KeyValueConfig& cfg) {
  NoiseDataStats stats;
  stats.noise_var = cfg.get_real("stats", "sigma_n2", 1.0);
  stats.data_var = cfg.get_real("stats", "sigma_d2", 0.0);
  try {
    stats.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("[stats] ") + e.what());
  }
  return stats;
}

LatticeSpec parse_lattice(const KeyValueConfig& cfg) {
  const auto v = cfg.get_int_list("lattice", "v");
  if (v.size() != 4)
    throw ConfigError("[lattice] v: expected 4 integers (row-major a1 b1 a2 b2)");
  LatticeSpec spec;
  spec.basis << static_cast<int>(v[0]), static_cast<int>(v[1]),
      static_cast<int>(v[2]), static_cast<int>(v[3]);
  if (cfg.has("lattice", "r")) {
    const auto r = cfg.get_int_list("lattice", "r");
    if (r.size() != 2) throw ConfigError("[lattice] r: expected 2 integers");
    spec.offset << static_cast<int>(r[0]), static_cast<int>(r[1]);
  }
  return spec;
}

FeasibilityRegion parse_region(const KeyValueConfig& cfg, const GridConfig& grid,
                               const ChannelProfile* profile) {
  FeasibilityRegion region;
  if (cfg.has("region", "r_tau")) {
    region.rank_delay = static_cast<int>(cfg.get_int("region", "r_tau"));
  } else if (profile) {
    region.rank_delay =
        truncation_rank(grid.subcarriers,
                        grid.subcarriers * lag_step(*profile, grid, Domain::Delay))
            .rank;
  } else {
    throw ConfigError("[region] r_tau required when no [profile] is configured");
  }
  if (cfg.has("region", "r_nu")) {
    region.rank_doppler = static_cast<int>(cfg.get_int("region", "r_nu"));
  } else if (profile) {
    region.rank_doppler =
        truncation_rank(grid.symbols,
                        grid.symbols * lag_step(*profile, grid, Domain::Doppler))
            .rank;
  } else {
    throw ConfigError("[region] r_nu required when no [profile] is configured");
  }
  if (region.rank_delay < 1 || region.rank_doppler < 1 ||
      region.rank_delay % 2 == 0 || region.rank_doppler % 2 == 0)
    throw ConfigError("[region] ranks must be odd positive integers");
  region.include_boundary = !cfg.get_bool("region", "strict", false);
  return region;
}

std::vector<NamedTable> run_approx_error(const KeyValueConfig& cfg) {
  std::vector<NamedTable> out;

  if (cfg.has_section("diagonalization")) {
    std::vector<long long> dims = {32, 64, 128, 256, 512};
    if (cfg.has("diagonalization", "dims"))
      dims = cfg.get_int_list("diagonalization", "dims");
    const double step = cfg.get_real("diagonalization", "lag_step", 1.0 / 16.0);
    if (!(step > 0.0)) throw ConfigError("[diagonalization] lag_step must be positive");
    Table table({{"dim", ColType::Integer},
                 {"spread_product", ColType::Real},
                 {"rel_error", ColType::Real}});
    for (long long dim : dims) {
      if (dim < 1) throw ConfigError("[diagonalization] dims must be positive");
      const int d = static_cast<int>(dim);
      const auto rank = truncation_rank(d, d * step);
      const auto factor = sinc_factor(d, step);
      const auto dft = dft_diagonalize(d, rank.rank, step);
      const double err = rel_fro_error(factor.dense(), dft.reconstruct());
      table.add_row({dim, step, err});
    }
    out.push_back({"diagonalization", std::move(table)});
  }

  if (cfg.has_section("integration")) {
    const GridConfig grid = parse_grid(cfg);
    const auto deltas = cfg.get_real_list("integration", "delta_d");
    Table table({{"delta_d", ColType::Real}, {"rel_error", ColType::Real}});
    for (double delta : deltas) {
      if (!(delta > 0.0) || !(delta < 1.0))
        throw ConfigError("[integration] delta_d values must lie in (0, 1)");
      // symmetric split: F*tau_D = T*nu_D = sqrt(TF * delta)
      const double product = std::sqrt(grid.tf_product() * delta);
      const double tau_d = product / grid.subcarrier_spacing;
      const double nu_d = product / grid.symbol_duration;
      const ChannelProfile profile =
          profile_from_keys(cfg, "integration", grid, tau_d, nu_d);
      const auto exact_delay = build_factor_exact(profile, grid, Domain::Delay);
      const auto exact_doppler = build_factor_exact(profile, grid, Domain::Doppler);
      const auto sinc_delay = build_factor_sinc(profile, grid, Domain::Delay);
      const auto sinc_doppler = build_factor_sinc(profile, grid, Domain::Doppler);
      const double err = rel_kron_error(exact_doppler, exact_delay, 1.0,
                                        sinc_doppler, sinc_delay, 1.0);
      table.add_row({delta, err});
    }
    out.push_back({"integration", std::move(table)});
  }

  if (out.empty())
    throw ConfigError("approx-error: configure [diagonalization] and/or [integration]");
  return out;
}

LatticeCheckReport run_lattice_check(const KeyValueConfig& cfg) {
  const GridConfig grid = parse_grid(cfg);
  const LatticeSpec spec = parse_lattice(cfg);
  std::optional<ChannelProfile> profile;
  if (cfg.has_section("profile")) profile = parse_profile(cfg, grid);
  const FeasibilityRegion region =
      parse_region(cfg, grid, profile ? &*profile : nullptr);

  LatticeCheckReport report;
  report.spec = spec;
  try {
    spec.validate(grid);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("[lattice] ") + e.what());
  }
  report.volume = spec.volume();
  PilotPattern pattern = [&] {
    try {
      return mask_from_lattice(spec, grid);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("[lattice] ") + e.what());
    }
  }();
  report.pilot_count = pattern.pilot_count();

  const auto fft = check_condition_fft(pattern, region);
  report.fft_ok = fft.satisfied;
  report.violations = fft.violations;
  report.analytic_ok = check_condition_analytic(spec, grid, region);
  if (report.fft_ok != report.analytic_ok)
    throw InternalConsistencyError(
        "lattice-check: analytic and FFT feasibility checks disagree");

  const Eigen::MatrixXcd spectrum = mask_spectrum(pattern);
  Table map({{"m_shift", ColType::Integer},
             {"n_shift", ColType::Integer},
             {"magnitude", ColType::Real}});
  for (int ns = 0; ns < grid.symbols; ++ns)
    for (int ms = 0; ms < grid.subcarriers; ++ms)
      map.add_row({static_cast<long long>(ms), static_cast<long long>(ns),
                   std::abs(spectrum(ms, ns))});
  report.magnitude_map = std::move(map);

  std::ostringstream os;
  os << "lattice check on " << grid.subcarriers << "x" << grid.symbols << " grid\n"
     << "V = [" << spec.basis(0, 0) << " " << spec.basis(0, 1) << "; "
     << spec.basis(1, 0) << " " << spec.basis(1, 1) << "], r = ["
     << spec.offset(0) << " " << spec.offset(1) << "]\n"
     << "L = " << report.volume << ", K = " << report.pilot_count << "\n"
     << "region: |m_shift| <= " << region.half_width_delay() << ", |n_shift| <= "
     << region.half_width_doppler()
     << (region.include_boundary ? "" : " (strict)") << "\n"
     << "analytic check: " << (report.analytic_ok ? "PASS" : "FAIL") << "\n"
     << "fft check:      " << (report.fft_ok ? "PASS" : "FAIL") << "\n";
  if (report.violations.empty()) {
    os << "violations: none\n";
  } else {
    os << "violations (m_shift, n_shift, |Ctilde|):\n";
    for (const auto& v : report.violations) {
      char line[96];
      std::snprintf(line, sizeof(line), "  (%d, %d) %.6g\n", v.m_shift, v.n_shift,
                    v.magnitude);
      os << line;
    }
  }
  if (grid.subcarriers <= 32 && grid.symbols <= 32) {
    os << "|Ctilde| map (rows m_shift = 0.." << grid.subcarriers - 1
       << ", cols n_shift = 0.." << grid.symbols - 1 << "):\n";
    for (int ms = 0; ms < grid.subcarriers; ++ms) {
      for (int ns = 0; ns < grid.symbols; ++ns) {
        char buf[24];
        std::snprintf(buf, sizeof(buf), " %7.2f", std::abs(spectrum(ms, ns)));
        os << buf;
      }
      os << "\n";
    }
  } else {
    os << "|Ctilde| map omitted (grid larger than 32x32); write it with --out\n";
  }
  report.text = os.str();
  return report;
}

Table run_lattice_search(const KeyValueConfig& cfg) {
  const GridConfig grid = parse_grid(cfg);
  const ChannelProfile profile = parse_profile(cfg, grid);
  const NoiseDataStats stats = parse_stats(cfg);
  const double beta = cfg.get_real("stats", "beta");
  const FeasibilityRegion region = parse_region(cfg, grid, &profile);
  const long volume = cfg.get_int("search", "volume");
  const int max_entry = static_cast<int>(cfg.get_int(
      "search", "max_entry", std::max(grid.subcarriers, grid.symbols)));

  std::vector<LatticeSpec> found;
  try {
    found = search_lattices(grid, volume, region, max_entry);
  } catch (const InternalConsistencyError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("[search] ") + e.what());
  }
  const double bound = lower_bound(grid, profile, stats.noise_var, beta,
                                   region.rank_delay, region.rank_doppler);
  Table table({{"v11", ColType::Integer},
               {"v12", ColType::Integer},
               {"v21", ColType::Integer},
               {"v22", ColType::Integer},
               {"L", ColType::Integer},
               {"K", ColType::Integer},
               {"bound", ColType::Real}});
  for (const auto& spec : found)
    table.add_row({static_cast<long long>(spec.basis(0, 0)),
                   static_cast<long long>(spec.basis(0, 1)),
                   static_cast<long long>(spec.basis(1, 0)),
                   static_cast<long long>(spec.basis(1, 1)),
                   static_cast<long long>(spec.volume()),
                   static_cast<long long>(spec.pilot_count(grid)), bound});
  return table;
}

Table run_bound(const KeyValueConfig& cfg) {
  const GridConfig grid = parse_grid(cfg);
  const ChannelProfile profile = parse_profile(cfg, grid);
  const NoiseDataStats stats = parse_stats(cfg);
  const double beta = cfg.get_real("stats", "beta");
  const FeasibilityRegion region = parse_region(cfg, grid, &profile);

  Table table({{"convention", ColType::Text},
               {"diag_count", ColType::Real},
               {"bound", ColType::Real}});
  const double rt = region.rank_delay, rn = region.rank_doppler;
  table.add_row({std::string("rank_product"), rt * rn,
                 lower_bound(grid, profile, stats.noise_var, beta, region.rank_delay,
                             region.rank_doppler, DiagonalCount::RankProduct)});
  table.add_row({std::string("rank_sum"), rt + rn,
                 lower_bound(grid, profile, stats.noise_var, beta, region.rank_delay,
                             region.rank_doppler, DiagonalCount::RankSum)});
  table.add_row(
      {std::string("spread_approx"),
       static_cast<double>(grid.size()) * grid.tf_product() * profile.spread_factor(),
       lower_bound_spread_approx(grid, profile, stats.noise_var, beta)});
  return table;
}

Table run_mse(const KeyValueConfig& cfg, std::optional<std::uint64_t> seed_override) {
  const GridConfig grid = parse_grid(cfg);
  const ChannelProfile profile = parse_profile(cfg, grid);
  const NoiseDataStats stats = parse_stats(cfg);
  const LatticeSpec spec = parse_lattice(cfg);

  PilotPattern pattern = [&] {
    try {
      return mask_from_lattice(spec, grid);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("[lattice] ") + e.what());
    }
  }();
  if (cfg.has("stats", "alpha_db")) {
    pattern.set_pilot_power(std::pow(10.0, cfg.get_real("stats", "alpha_db") / 10.0) *
                            stats.noise_var);
  } else if (cfg.has("stats", "beta")) {
    pattern = pattern.with_power_budget(cfg.get_real("stats", "beta"));
  } else {
    throw ConfigError("[stats] need alpha_db or beta to set the pilot power");
  }

  const std::string model = cfg.get_string("mse", "covariance", "sinc");
  HermitianToeplitz delay = model == "exact"
                                ? build_factor_exact(profile, grid, Domain::Delay)
                                : build_factor_sinc(profile, grid, Domain::Delay);
  HermitianToeplitz doppler = model == "exact"
                                  ? build_factor_exact(profile, grid, Domain::Doppler)
                                  : build_factor_sinc(profile, grid, Domain::Doppler);
  if (model != "exact" && model != "sinc")
    throw ConfigError("[mse] covariance must be 'sinc' or 'exact'");
  const KroneckerCovariance cov(std::move(doppler), std::move(delay), 1.0);

  SimConfig sim;
  sim.trials = cfg.get_int("mse", "trials", 1000);
  if (sim.trials < 1) throw ConfigError("[mse] trials must be >= 1");
  sim.random_pilot_phases = cfg.get_bool("mse", "random_phases", false);
  sim.include_data_term = cfg.get_bool("mse", "include_data_term", false);
  std::vector<long long> seeds{0};
  if (cfg.has("mse", "seeds")) seeds = cfg.get_int_list("mse", "seeds");
  if (seed_override) seeds = {static_cast<long long>(*seed_override)};
  const std::string pattern_id =
      cfg.get_string("mse", "pattern_id", lattice_id(spec));

  Table table({{"pattern_id", ColType::Text},
               {"K", ColType::Integer},
               {"alpha_db", ColType::Real},
               {"trials", ColType::Integer},
               {"empirical", ColType::Real},
               {"theoretical", ColType::Real},
               {"stderr", ColType::Real},
               {"seed", ColType::Integer},
               {"status", ColType::Text}});
  for (long long seed : seeds) {
    sim.seed = static_cast<std::uint64_t>(seed);
    const MseRecord rec = empirical_mse(pattern, cov, stats, sim, pattern_id);
    const bool ok = std::abs(rec.empirical - rec.theoretical) <= 3.0 * rec.stderr_;
    table.add_row({rec.pattern_id, static_cast<long long>(rec.pilot_count),
                   rec.alpha_db, static_cast<long long>(rec.trials), rec.empirical,
                   rec.theoretical, rec.stderr_, seed,
                   std::string(ok ? "OK" : "DEVIATES")});
  }
  return table;
}

} // namespace latpilot
