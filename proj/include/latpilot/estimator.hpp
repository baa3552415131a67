#pragma once

#include <Eigen/Dense>
#include <optional>

#include "latpilot/covariance.hpp"
#include "latpilot/pattern.hpp"

namespace latpilot {

struct ErrorReport {
  double trace_mse = 0.0;
  Eigen::VectorXd per_symbol_mse;
  std::optional<Eigen::MatrixXcd> full_covariance;
};

/// LMMSE estimate of the vectorized channel from one received frame y.
/// pilot_values holds the transmitted pilot symbols on pattern.pilot_indices()
/// in order; each must have squared modulus sigma_p^2 (constant modulus).
/// The observation covariance is block-diagonal across the pilot/data split,
/// so only the K pilot observations carry weight and the solve is K x K.
Eigen::VectorXcd lmmse_estimate(const Eigen::VectorXcd& y,
                                const PilotPattern& pattern,
                                const Eigen::VectorXcd& pilot_values,
                                const KroneckerCovariance& cov,
                                const NoiseDataStats& stats);

/// Estimation error covariance C_e = C_g - C_g B_p^H (B_p C_g B_p^H + C_n)^-1 B_p C_g.
/// include_data_term additionally places sigma_d^2 * c_d[k] * C_g[k,k] on the
/// observation covariance diagonal; it cannot change the result because those
/// entries sit at data positions where the estimator weight is zero.
ErrorReport error_covariance_exact(const PilotPattern& pattern,
                                   const KroneckerCovariance& cov,
                                   const NoiseDataStats& stats,
                                   bool include_data_term = false,
                                   bool keep_full = false);

/// Gram matrix U Diag(c_p) U^H of the truncated 2D-DFT basis
/// U = F_doppler (x) F_delay; entry (k,l), k = b + a*r_delay, equals
/// (1/MN) * Ctilde[(b-d) mod M, (a-c) mod N] where Ctilde is the 2D-DFT of
/// the pilot mask. Computed via one FFT of the mask plus index lookup.
Eigen::MatrixXcd gram_matrix(const PilotPattern& pattern,
                             const TruncatedDFTFactor& delay,
                             const TruncatedDFTFactor& doppler);

/// Structured error covariance in the truncated DFT basis:
/// C_e = U^H (gamma^-1 Lambda^-1 + alpha * gram)^-1 U with
/// alpha = sigma_p^2/sigma_n^2. Requires strictly positive eigenvalues.
ErrorReport error_covariance_approx(const PilotPattern& pattern,
                                    const TruncatedDFTFactor& delay,
                                    const TruncatedDFTFactor& doppler,
                                    double gamma, const NoiseDataStats& stats,
                                    bool keep_full = false);

/// Same, with a caller-supplied gram matrix (e.g. an independently computed
/// one when cross-checking the FFT route).
ErrorReport error_covariance_from_gram(const Eigen::MatrixXcd& gram,
                                       const PilotPattern& pattern,
                                       const TruncatedDFTFactor& delay,
                                       const TruncatedDFTFactor& doppler,
                                       double gamma, const NoiseDataStats& stats,
                                       bool keep_full = false);

} // namespace latpilot
