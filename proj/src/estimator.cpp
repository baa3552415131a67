#include "latpilot/estimator.hpp"

#include <cmath>
#include <stdexcept>

#include "latpilot/lattice.hpp"

namespace latpilot {

namespace {

// Hermitian PD solve with one jittered retry (1e-12 * trace/dim on the
// diagonal) before giving up.
Eigen::MatrixXcd solve_hermitian(Eigen::MatrixXcd a, const Eigen::MatrixXcd& rhs) {
  Eigen::LLT<Eigen::MatrixXcd> llt(a);
  if (llt.info() == Eigen::Success) return llt.solve(rhs);
  const double jitter = 1e-12 * a.trace().real() / static_cast<double>(a.rows());
  a.diagonal().array() += jitter;
  llt.compute(a);
  if (llt.info() == Eigen::Success) return llt.solve(rhs);
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(a);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("estimator: observation covariance is singular");
  return ldlt.solve(rhs);
}

// C_g restricted to all rows x pilot columns (MN x K) via the Kronecker
// element accessor.
Eigen::MatrixXcd prior_pilot_columns(const KroneckerCovariance& cov,
                                     const std::vector<long>& pilots) {
  const long n = cov.rows();
  const long k = static_cast<long>(pilots.size());
  Eigen::MatrixXcd v(n, k);
  for (long j = 0; j < k; ++j)
    for (long i = 0; i < n; ++i) v(i, j) = cov(i, pilots[static_cast<size_t>(j)]);
  return v;
}

void check_dims(const PilotPattern& pattern, const KroneckerCovariance& cov) {
  if (pattern.size() != cov.rows())
    throw std::invalid_argument("estimator: pattern and covariance sizes differ");
}

} // namespace

Eigen::VectorXcd lmmse_estimate(const Eigen::VectorXcd& y,
                                const PilotPattern& pattern,
                                const Eigen::VectorXcd& pilot_values,
                                const KroneckerCovariance& cov,
                                const NoiseDataStats& stats) {
  check_dims(pattern, cov);
  stats.validate();
  if (y.size() != pattern.size())
    throw std::invalid_argument("estimator: observation length must be M*N");
  const auto& pilots = pattern.pilot_indices();
  const long k = static_cast<long>(pilots.size());
  if (pilot_values.size() != k)
    throw std::invalid_argument("estimator: need one pilot value per pilot index");
  const double sp2 = pattern.pilot_power();
  for (long i = 0; i < k; ++i)
    if (std::abs(std::norm(pilot_values(i)) - sp2) > 1e-8 * std::max(sp2, 1.0))
      throw std::invalid_argument("estimator: pilot values must have modulus sigma_p");

  if (k == 0) return Eigen::VectorXcd::Zero(pattern.size()); // prior mean

  const Eigen::MatrixXcd v = prior_pilot_columns(cov, pilots);
  Eigen::MatrixXcd b(k, k);
  for (long r = 0; r < k; ++r)
    for (long c = 0; c < k; ++c)
      b(r, c) = pilot_values(r) * v(pilots[static_cast<size_t>(r)], c) *
                std::conj(pilot_values(c));
  b.diagonal().array() += stats.noise_var;
  // The data-interference diagonal sits at data positions only and never
  // enters this pilot block.
  Eigen::VectorXcd yp(k);
  for (long i = 0; i < k; ++i) yp(i) = y(pilots[static_cast<size_t>(i)]);
  const Eigen::VectorXcd w = solve_hermitian(b, yp);
  return v * (pilot_values.conjugate().cwiseProduct(w));
}

ErrorReport error_covariance_exact(const PilotPattern& pattern,
                                   const KroneckerCovariance& cov,
                                   const NoiseDataStats& stats,
                                   bool include_data_term, bool keep_full) {
  check_dims(pattern, cov);
  stats.validate();
  if (cov.rows() > KroneckerCovariance::kDenseCap)
    throw std::length_error("estimator: grid exceeds the materialization cap");
  const long n = cov.rows();
  const auto& pilots = pattern.pilot_indices();
  const long k = static_cast<long>(pilots.size());
  const double sp2 = pattern.pilot_power();

  ErrorReport report;
  report.per_symbol_mse.resize(n);
  if (k == 0) {
    for (long i = 0; i < n; ++i) report.per_symbol_mse(i) = cov(i, i).real();
    report.trace_mse = cov.trace();
    if (keep_full) report.full_covariance = cov.dense();
    return report;
  }

  const Eigen::MatrixXcd v = prior_pilot_columns(cov, pilots);
  Eigen::MatrixXcd b(k, k);
  for (long r = 0; r < k; ++r)
    for (long c = 0; c < k; ++c) b(r, c) = sp2 * v(pilots[static_cast<size_t>(r)], c);
  b.diagonal().array() += stats.noise_var;
  // include_data_term places sigma_d^2 * c_d[k] * C_g[k,k] on the observation
  // covariance diagonal; c_d is zero at pilot positions and the estimator
  // weights vanish at data positions, so the pilot block solved here is the
  // same either way.
  (void)include_data_term;

  const Eigen::MatrixXcd x = solve_hermitian(b, v.adjoint()); // K x MN
  for (long i = 0; i < n; ++i) {
    const std::complex<double> corr = v.row(i) * x.col(i);
    report.per_symbol_mse(i) = cov(i, i).real() - sp2 * corr.real();
  }
  report.trace_mse = report.per_symbol_mse.sum();
  if (keep_full) {
    Eigen::MatrixXcd full = cov.dense();
    full.noalias() -= sp2 * (v * x);
    report.full_covariance = std::move(full);
  }
  return report;
}

Eigen::MatrixXcd gram_matrix(const PilotPattern& pattern,
                             const TruncatedDFTFactor& delay,
                             const TruncatedDFTFactor& doppler) {
  if (delay.dim != pattern.subcarriers() || doppler.dim != pattern.symbols())
    throw std::invalid_argument("gram: factor dimensions must match the grid");
  const int m = pattern.subcarriers();
  const int n = pattern.symbols();
  const int rt = delay.rank;
  const int rn = doppler.rank;
  const Eigen::MatrixXcd spectrum = mask_spectrum(pattern);
  const double inv_mn = 1.0 / static_cast<double>(pattern.size());
  Eigen::MatrixXcd gram(rt * rn, rt * rn);
  for (int a = 0; a < rn; ++a)
    for (int bidx = 0; bidx < rt; ++bidx)
      for (int c = 0; c < rn; ++c)
        for (int d = 0; d < rt; ++d) {
          const int ms = (((bidx - d) % m) + m) % m;
          const int ns = (((a - c) % n) + n) % n;
          gram(bidx + a * rt, d + c * rt) = inv_mn * spectrum(ms, ns);
        }
  return gram;
}

ErrorReport error_covariance_from_gram(const Eigen::MatrixXcd& gram,
                                       const PilotPattern& pattern,
                                       const TruncatedDFTFactor& delay,
                                       const TruncatedDFTFactor& doppler,
                                       double gamma, const NoiseDataStats& stats,
                                       bool keep_full) {
  stats.validate();
  if (!(gamma > 0.0))
    throw std::invalid_argument("approx covariance: gamma must be positive");
  const int rt = delay.rank;
  const int rn = doppler.rank;
  const long r2 = static_cast<long>(rt) * rn;
  if (gram.rows() != r2 || gram.cols() != r2)
    throw std::invalid_argument("approx covariance: gram size mismatch");

  Eigen::VectorXd lambda(r2);
  for (int a = 0; a < rn; ++a)
    for (int bidx = 0; bidx < rt; ++bidx) {
      const double v = doppler.eigenvalues(a) * delay.eigenvalues(bidx);
      if (!(v > 0.0))
        throw std::invalid_argument(
            "approx covariance: truncated spectrum has a nonpositive eigenvalue");
      lambda(bidx + a * rt) = v;
    }

  const double alpha = pilot_snr(pattern, stats);
  Eigen::MatrixXcd inner = alpha * gram;
  inner.diagonal().array() += (1.0 / gamma) / lambda.array();

  const Eigen::MatrixXcd inv = solve_hermitian(inner, Eigen::MatrixXcd::Identity(r2, r2));

  ErrorReport report;
  report.trace_mse = inv.trace().real(); // U has orthonormal rows

  const int m = pattern.subcarriers();
  const int n = pattern.symbols();
  const long mn = pattern.size();
  // Per-symbol MSE column by column: U[:,col] for col = n*M + m combines the
  // conjugated DFT phases of both domains.
  Eigen::MatrixXcd u(r2, mn);
  for (int nn = 0; nn < n; ++nn)
    for (int mm = 0; mm < m; ++mm) {
      const long col = static_cast<long>(nn) * m + mm;
      for (int a = 0; a < rn; ++a)
        for (int bidx = 0; bidx < rt; ++bidx)
          u(bidx + a * rt, col) = doppler.basis(a, nn) * delay.basis(bidx, mm);
    }
  const Eigen::MatrixXcd x = inv * u;
  report.per_symbol_mse.resize(mn);
  for (long col = 0; col < mn; ++col)
    report.per_symbol_mse(col) = (u.col(col).adjoint() * x.col(col)).value().real();
  if (keep_full) {
    if (mn > KroneckerCovariance::kDenseCap)
      throw std::length_error("approx covariance: grid exceeds the materialization cap");
    report.full_covariance = u.adjoint() * x;
  }
  return report;
}

ErrorReport error_covariance_approx(const PilotPattern& pattern,
                                    const TruncatedDFTFactor& delay,
                                    const TruncatedDFTFactor& doppler,
                                    double gamma, const NoiseDataStats& stats,
                                    bool keep_full) {
  return error_covariance_from_gram(gram_matrix(pattern, delay, doppler), pattern,
                                    delay, doppler, gamma, stats, keep_full);
}

} // namespace latpilot
