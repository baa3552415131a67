#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latpilot/config.hpp"
#include "latpilot/lattice.hpp"
#include "latpilot/table.hpp"

namespace latpilot {

/// Parameter blocks shared by the CLI experiments, read from config sections
/// [grid], [profile], [stats], [lattice].
GridConfig parse_grid(const KeyValueConfig& cfg);
ChannelProfile parse_profile(const KeyValueConfig& cfg, const GridConfig& grid);
NoiseDataStats parse_stats(const KeyValueConfig& cfg);
LatticeSpec parse_lattice(const KeyValueConfig& cfg);
/// [region] r_tau/r_nu, defaulting to the truncation ranks of the profile
/// when one is configured; `strict` switches off the boundary rows.
FeasibilityRegion parse_region(const KeyValueConfig& cfg, const GridConfig& grid,
                               const ChannelProfile* profile);

struct NamedTable {
  std::string name;
  Table table;
};

/// Fig. 1 style sweeps. [diagonalization]: relative F-norm error of the
/// truncated-DFT reconstruction vs matrix dimension at fixed lag step
/// (columns dim, spread_product, rel_error). [integration]: zero-th order
/// factor vs exact quadrature over a spread-factor sweep (columns delta_d,
/// rel_error). Each configured section yields one table.
std::vector<NamedTable> run_approx_error(const KeyValueConfig& cfg);

struct LatticeCheckReport {
  LatticeSpec spec;
  long volume = 0;
  long pilot_count = 0;
  bool fft_ok = false;
  bool analytic_ok = false;
  std::vector<RegionViolation> violations;
  Table magnitude_map; ///< columns m_shift, n_shift, magnitude
  std::string text;    ///< human-readable report
};

/// Runs both feasibility checkers on one lattice; throws
/// InternalConsistencyError if they disagree.
LatticeCheckReport run_lattice_check(const KeyValueConfig& cfg);

/// Feasible HNF sublattices of the configured volume with K, L and the
/// attained bound (columns v11, v12, v21, v22, L, K, bound).
Table run_lattice_search(const KeyValueConfig& cfg);

/// Bound report under both diagonal-count conventions plus the
/// spread-factor approximation (columns convention, diag_count, bound).
Table run_bound(const KeyValueConfig& cfg);

/// Monte Carlo MSE vs the analytic trace, one row per configured seed
/// (columns pattern_id, K, alpha_db, trials, empirical, theoretical,
/// stderr, seed, status).
Table run_mse(const KeyValueConfig& cfg, std::optional<std::uint64_t> seed_override);

} // namespace latpilot
