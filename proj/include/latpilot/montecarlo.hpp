#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>

#include "latpilot/covariance.hpp"
#include "latpilot/pattern.hpp"

namespace latpilot {

struct SimConfig {
  long trials = 1000;
  std::uint64_t seed = 0;
  bool random_pilot_phases = false; ///< default all-ones phases
  bool include_data_term = false;   ///< forwarded to the theoretical trace
};

std::uint64_t splitmix64(std::uint64_t x);

/// Engine for one trial, derived from (seed, trial index) so trials are
/// order-independent.
std::mt19937_64 trial_rng(std::uint64_t seed, long trial);

/// One draw of CN(0, 1) via Box-Muller on the engine's uniform output.
std::complex<double> complex_gaussian(std::mt19937_64& rng);

/// Draws zero-mean circular Gaussian vectors with covariance
/// scale * (C_doppler (x) C_delay). Factor square roots come from Hermitian
/// eigendecompositions with negative eigenvalues clipped at zero; factors
/// must be PSD within the covariance tolerance.
class ChannelSampler {
 public:
  explicit ChannelSampler(const KroneckerCovariance& cov);
  Eigen::VectorXcd draw(std::mt19937_64& rng) const;
  long size() const { return static_cast<long>(sqrt_doppler_.rows()) * sqrt_delay_.rows(); }

 private:
  Eigen::MatrixXcd sqrt_delay_, sqrt_doppler_;
  double sqrt_scale_;
};

/// y[k] = x[k]*g[k] + n[k] with x = pilots (constant modulus sigma_p) plus
/// CN(0, sigma_d^2) data symbols, n ~ CN(0, sigma_n^2) i.i.d.
Eigen::VectorXcd simulate_frame(const PilotPattern& pattern,
                                const Eigen::VectorXcd& g,
                                const Eigen::VectorXcd& pilot_values,
                                const NoiseDataStats& stats,
                                std::mt19937_64& rng);

/// Per-run summary record, one JSON line per run on the wire.
struct MseRecord {
  std::string pattern_id;
  int pilot_count = 0;   ///< K
  double alpha_db = 0.0; ///< 10 log10(sigma_p^2/sigma_n^2)
  long trials = 0;
  double empirical = 0.0;
  double theoretical = 0.0;
  double stderr_ = 0.0;
  std::uint64_t seed = 0;

  std::string to_json_line() const;
};

/// Monte Carlo mean of ||g - ghat||^2 against the analytic trace of the
/// error covariance. Deterministic for fixed (seed, config).
MseRecord empirical_mse(const PilotPattern& pattern,
                        const KroneckerCovariance& cov,
                        const NoiseDataStats& stats, const SimConfig& sim,
                        const std::string& pattern_id = "pattern");

} // namespace latpilot
