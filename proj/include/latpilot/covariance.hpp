#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>

#include "latpilot/grid.hpp"
#include "latpilot/profile.hpp"
#include "latpilot/toeplitz.hpp"

namespace latpilot {

enum class Domain { Delay, Doppler };

/// sin(pi u)/(pi u), 1 at u = 0.
double sinc(double u);

/// Per-lag phase step of a domain: F*tau_D for delay, T*nu_D for Doppler.
double lag_step(const ChannelProfile& profile, const GridConfig& grid, Domain domain);

struct QuadratureSpec {
  int initial_nodes = 32;
  int max_nodes = 1 << 14;
  double rel_tol = 1e-8;
};

/// Covariance factor from the exact profile integral
///   gen[k] = integral of P(x) e^{-+ j 2 pi k S x} over [-spread/2, spread/2]
/// (sign - for delay with S = F, sign + for Doppler with S = T), evaluated by
/// Gauss-Legendre quadrature with node doubling until the relative change is
/// below tolerance. Dimension is M (delay) or N (Doppler).
HermitianToeplitz build_factor_exact(const ChannelProfile& profile,
                                     const GridConfig& grid, Domain domain,
                                     const QuadratureSpec& quad = {});

/// Zero-th order factor: gen[k] = P(0) * spread * sinc(k * S * spread).
HermitianToeplitz build_factor_sinc(const ChannelProfile& profile,
                                    const GridConfig& grid, Domain domain);

/// Unit-amplitude sinc factor gen[k] = sinc(k * step); the normalized form of
/// the zero-th order factor (P(0) * spread = 1).
HermitianToeplitz sinc_factor(int dim, double step);

/// Lazily represented channel covariance C = scale * (doppler (x) delay)
/// under column-major vectorization k = n*M + m. The dense form is only
/// materialized on request, capped at kDenseCap rows.
class KroneckerCovariance {
 public:
  static constexpr long kDenseCap = 1L << 16;

  KroneckerCovariance(HermitianToeplitz doppler, HermitianToeplitz delay, double scale);

  long rows() const { return static_cast<long>(doppler_.dim()) * delay_.dim(); }

  std::complex<double> operator()(long k, long l) const {
    const int m = delay_.dim();
    return scale_ * doppler_(static_cast<int>(k / m), static_cast<int>(l / m)) *
           delay_(static_cast<int>(k % m), static_cast<int>(l % m));
  }

  Eigen::MatrixXcd dense(long cap = kDenseCap) const;
  double trace() const { return scale_ * doppler_.trace() * delay_.trace(); }

  const HermitianToeplitz& doppler_factor() const { return doppler_; }
  const HermitianToeplitz& delay_factor() const { return delay_; }
  double scale() const { return scale_; }

 private:
  HermitianToeplitz doppler_, delay_;
  double scale_;
};

KroneckerCovariance assemble_covariance(const HermitianToeplitz& doppler,
                                        const HermitianToeplitz& delay,
                                        double scale);

/// Spectral density of the sinc generating sequence:
/// f(omega) = (1/step) * rect(omega / (2 pi step)), rect 1 on |u| <= 1/2.
/// omega must lie in [-pi, pi].
double spectral_density(double step, double omega);
double spectral_density(const ChannelProfile& profile, const GridConfig& grid,
                        Domain domain, double omega);

struct TruncationRank {
  int rank = 1;        ///< odd, <= dim
  bool clamped = false; ///< support covered the whole spectrum (full-rank regime)
};

/// Smallest odd rank covering the rect spectral support: ceil(product),
/// bumped up to the next odd integer, clamped to the largest odd <= dim.
TruncationRank truncation_rank(int dim, double support_product);

/// Truncated DFT eigenbasis of one covariance factor. Rows of `basis` are the
/// conjugated normalized DFT vectors at frequencies (1-r)/2 .. (r-1)/2;
/// eigenvalues are spectral-density samples f(2 pi k / dim).
struct TruncatedDFTFactor {
  int dim = 0;
  int rank = 0;
  double step = 0.0;
  Eigen::MatrixXcd basis;      ///< rank x dim, orthonormal rows
  Eigen::VectorXd eigenvalues; ///< length rank, nonnegative

  Eigen::MatrixXcd reconstruct() const; ///< basis^H * Diag(eigenvalues) * basis
};

TruncatedDFTFactor dft_diagonalize(int dim, int rank, double step);
TruncatedDFTFactor dft_diagonalize(const HermitianToeplitz& factor, int rank,
                                   const ChannelProfile& profile,
                                   const GridConfig& grid, Domain domain);

/// ||A - A_approx||_F / ||A||_F; throws when ||A||_F = 0.
double rel_fro_error(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& approx);

/// Relative Frobenius error between scale_a*(An (x) At) and scale_b*(Bn (x) Bt)
/// computed from factor-level inner products, without materializing the
/// Kronecker products.
double rel_kron_error(const HermitianToeplitz& a_doppler, const HermitianToeplitz& a_delay,
                      double scale_a,
                      const HermitianToeplitz& b_doppler, const HermitianToeplitz& b_delay,
                      double scale_b);

} // namespace latpilot
