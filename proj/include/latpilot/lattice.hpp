#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "latpilot/grid.hpp"
#include "latpilot/pattern.hpp"
#include "latpilot/profile.hpp"

namespace latpilot {

/// Raised when two supposedly equivalent computations disagree (e.g. the
/// analytic and FFT feasibility checkers); maps to CLI exit code 2.
struct InternalConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Integer sampling lattice: pilot positions are V*p + offset reduced
/// modulo (M, N), p ranging over Z^2. Columns of `basis` are the generators.
struct LatticeSpec {
  Eigen::Matrix2i basis = Eigen::Matrix2i::Identity(); ///< V
  Eigen::Vector2i offset = Eigen::Vector2i::Zero();    ///< r

  long det() const {
    return static_cast<long>(basis(0, 0)) * basis(1, 1) -
           static_cast<long>(basis(0, 1)) * basis(1, 0);
  }
  long volume() const { return std::labs(det()); } ///< L
  long pilot_count(const GridConfig& grid) const { return grid.size() / volume(); }

  /// det != 0 and mod(MN, L) = 0.
  void validate(const GridConfig& grid) const;

  /// x in the lattice generated by the columns of V (offset ignored),
  /// tested exactly: adj(V) * x == 0 (mod det V).
  bool contains(const Eigen::Vector2i& x) const;

  /// The residues of the lattice modulo (M, N) number exactly MN/L, i.e.
  /// both (M,0) and (0,N) are lattice points.
  bool tiles_grid(const GridConfig& grid) const;
};

/// Frequency rectangle of the diagonalization condition. With
/// include_boundary the half-widths are r-1 (the full range of DFT index
/// differences in the gram matrix, and the range equivalent to gram
/// diagonality); without it they are the strict r-2.
struct FeasibilityRegion {
  int rank_delay = 1;   ///< r_tau (odd)
  int rank_doppler = 1; ///< r_nu (odd)
  bool include_boundary = true;

  int half_width_delay() const {
    return include_boundary ? rank_delay - 1 : rank_delay - 2;
  }
  int half_width_doppler() const {
    return include_boundary ? rank_doppler - 1 : rank_doppler - 2;
  }
};

/// Pilot mask from a sampling lattice. The residue set is the subgroup of
/// Z_M x Z_N generated by the columns of V, shifted by the offset; throws
/// when it does not contain exactly MN/|det V| points.
PilotPattern mask_from_lattice(const LatticeSpec& spec, const GridConfig& grid,
                               double pilot_power = 1.0);

/// Unnormalized 2D-DFT of the pilot mask,
/// Ctilde[ms,ns] = sum over pilots e^{-j2pi(ms*m/M + ns*n/N)}, as an M x N
/// array with nonnegative indices (negative shifts wrap cyclically).
Eigen::MatrixXcd mask_spectrum(const PilotPattern& pattern);

struct RegionViolation {
  int m_shift = 0;
  int n_shift = 0;
  double magnitude = 0.0;
};

struct ConditionReport {
  bool satisfied = false;
  std::vector<RegionViolation> violations;
};

/// Mask-DFT feasibility: |Ctilde| below 1e-9*K everywhere in the region
/// except the origin, where it equals K.
ConditionReport check_condition_fft(const PilotPattern& pattern,
                                    const FeasibilityRegion& region);

/// Exact integer feasibility: no (ms, ns) in the region besides the origin
/// has V^T (ms/M, ns/N)^T integer, i.e. no integer pair (k1, k2) solves
/// N*a1*ms + M*a2*ns = MN*k1 and N*b1*ms + M*b2*ns = MN*k2.
bool check_condition_analytic(const LatticeSpec& spec, const GridConfig& grid,
                              const FeasibilityRegion& region);

enum class DiagonalCount { RankProduct, RankSum };

/// Trace lower bound D / (TF/S0 + beta/(M*sigma_n^2)) with D = r_tau*r_nu
/// (consistent with the truncated eigenbasis dimension) or the alternative
/// literal count r_tau + r_nu.
double lower_bound(const GridConfig& grid, const ChannelProfile& profile,
                   double noise_var, double power_budget, int rank_delay,
                   int rank_doppler,
                   DiagonalCount convention = DiagonalCount::RankProduct);

/// Companion closed form with D replaced by MN * TF * spread_factor.
double lower_bound_spread_approx(const GridConfig& grid,
                                 const ChannelProfile& profile,
                                 double noise_var, double power_budget);

/// All sublattices of index L in Hermite normal form V = [[d1, 0], [e, d2]]
/// (columns (d1, e) and (0, d2)), d1*d2 = L, 0 <= e < d2, restricted to
/// entries <= max_entry and to lattices tiling the grid, that pass the
/// analytic feasibility check. Each survivor is cross-checked against the
/// FFT checker; a mismatch throws InternalConsistencyError. Sorted by
/// (d1, d2, e).
std::vector<LatticeSpec> search_lattices(const GridConfig& grid, long volume,
                                         const FeasibilityRegion& region,
                                         int max_entry);

/// Canonical offsets r = alpha*a + beta*b with 0 <= alpha, beta < 1 and both
/// terms integer vectors: alpha in {k/gcd(a)} and beta in {k/gcd(b)}.
std::vector<Eigen::Vector2i> enumerate_offsets(const LatticeSpec& spec);

} // namespace latpilot
