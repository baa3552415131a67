#pragma once

#include <cstdint>
#include <vector>

#include "latpilot/grid.hpp"

namespace latpilot {

/// Binary pilot placement on the M x N grid, stored column-major
/// (vectorized index k = n*M + m) together with the per-pilot power.
class PilotPattern {
 public:
  PilotPattern(int subcarriers, int symbols, std::vector<std::uint8_t> mask,
               double pilot_power = 1.0);

  static PilotPattern from_indices(int subcarriers, int symbols,
                                   const std::vector<long>& indices,
                                   double pilot_power = 1.0);
  static PilotPattern all_pilots(int subcarriers, int symbols, double pilot_power = 1.0);
  static PilotPattern empty(int subcarriers, int symbols);

  int subcarriers() const { return subcarriers_; }
  int symbols() const { return symbols_; }
  long size() const { return static_cast<long>(subcarriers_) * symbols_; }
  int pilot_count() const { return static_cast<int>(pilot_indices_.size()); }

  bool is_pilot(long k) const { return mask_[static_cast<size_t>(k)] != 0; }
  std::uint8_t at(int m, int n) const {
    return mask_[static_cast<size_t>(n) * subcarriers_ + m];
  }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  const std::vector<long>& pilot_indices() const { return pilot_indices_; }

  double pilot_power() const { return pilot_power_; } ///< sigma_p^2
  void set_pilot_power(double sigma_p2);

  /// Copy with sigma_p^2 = N*beta/K (power equality under an average
  /// per-symbol pilot budget beta). Requires K > 0.
  PilotPattern with_power_budget(double beta) const;

 private:
  int subcarriers_, symbols_;
  std::vector<std::uint8_t> mask_;
  std::vector<long> pilot_indices_;
  double pilot_power_;
};

/// Noise and data second-order statistics.
struct NoiseDataStats {
  double noise_var = 1.0; ///< sigma_n^2 > 0
  double data_var = 0.0;  ///< sigma_d^2 >= 0

  void validate() const;
};

/// Pilot SNR alpha = sigma_p^2 / sigma_n^2.
double pilot_snr(const PilotPattern& pattern, const NoiseDataStats& stats);

} // namespace latpilot
