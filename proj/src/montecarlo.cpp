#include "latpilot/montecarlo.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "latpilot/estimator.hpp"

namespace latpilot {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 trial_rng(std::uint64_t seed, long trial) {
  const std::uint64_t s =
      splitmix64(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(trial + 1));
  return std::mt19937_64(s);
}

std::complex<double> complex_gaussian(std::mt19937_64& rng) {
  // Box-Muller on explicit uniforms; E|z|^2 = 1, circularly symmetric.
  constexpr double kInv = 1.0 / 9007199254740992.0; // 2^-53
  const double u1 = (static_cast<double>(rng() >> 11) + 0.5) * kInv;
  const double u2 = (static_cast<double>(rng() >> 11) + 0.5) * kInv;
  const double r = std::sqrt(-std::log(u1));
  return std::polar(r, 2.0 * std::numbers::pi * u2);
}

namespace {

// Square root of a Hermitian PSD Toeplitz factor via eigendecomposition,
// clipping small negative eigenvalues (quadrature noise) at zero.
Eigen::MatrixXcd factor_sqrt(const HermitianToeplitz& factor) {
  const Eigen::MatrixXcd dense = factor.dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("sampler: eigendecomposition failed");
  const double floor = -1e-10 * std::max(factor.generating_sequence()[0].real(), 0.0);
  Eigen::VectorXd vals = es.eigenvalues();
  for (long i = 0; i < vals.size(); ++i) {
    if (vals(i) < floor)
      throw std::runtime_error("sampler: covariance factor is not PSD");
    vals(i) = std::max(vals(i), 0.0);
  }
  return es.eigenvectors() * vals.cwiseSqrt().asDiagonal() *
         es.eigenvectors().adjoint();
}

} // namespace

ChannelSampler::ChannelSampler(const KroneckerCovariance& cov)
    : sqrt_delay_(factor_sqrt(cov.delay_factor())),
      sqrt_doppler_(factor_sqrt(cov.doppler_factor())),
      sqrt_scale_(std::sqrt(cov.scale())) {}

Eigen::VectorXcd ChannelSampler::draw(std::mt19937_64& rng) const {
  const long m = sqrt_delay_.rows();
  const long n = sqrt_doppler_.rows();
  Eigen::MatrixXcd w(m, n);
  for (long j = 0; j < n; ++j)
    for (long i = 0; i < m; ++i) w(i, j) = complex_gaussian(rng);
  // vec(Lt * W * Ln^T) has covariance (Ln Ln^H) (x) (Lt Lt^H)
  const Eigen::MatrixXcd g = sqrt_scale_ * sqrt_delay_ * w * sqrt_doppler_.transpose();
  return Eigen::Map<const Eigen::VectorXcd>(g.data(), m * n);
}

Eigen::VectorXcd simulate_frame(const PilotPattern& pattern,
                                const Eigen::VectorXcd& g,
                                const Eigen::VectorXcd& pilot_values,
                                const NoiseDataStats& stats,
                                std::mt19937_64& rng) {
  if (g.size() != pattern.size())
    throw std::invalid_argument("simulate: channel vector must have M*N entries");
  const auto& pilots = pattern.pilot_indices();
  if (pilot_values.size() != static_cast<long>(pilots.size()))
    throw std::invalid_argument("simulate: need one pilot value per pilot index");
  const double sd = std::sqrt(stats.data_var);
  Eigen::VectorXcd y(g.size());
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(g.size());
  for (size_t i = 0; i < pilots.size(); ++i)
    x(pilots[i]) = pilot_values(static_cast<long>(i));
  for (long k = 0; k < g.size(); ++k)
    if (!pattern.is_pilot(k)) x(k) = sd * complex_gaussian(rng);
  const double sn = std::sqrt(stats.noise_var);
  for (long k = 0; k < g.size(); ++k)
    y(k) = x(k) * g(k) + sn * complex_gaussian(rng);
  return y;
}

std::string MseRecord::to_json_line() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"pattern_id\":\"" << pattern_id << "\",\"K\":" << pilot_count
     << ",\"alpha_db\":" << alpha_db << ",\"trials\":" << trials
     << ",\"empirical\":" << empirical << ",\"theoretical\":" << theoretical
     << ",\"stderr\":" << stderr_ << ",\"seed\":" << seed << "}";
  return os.str();
}

MseRecord empirical_mse(const PilotPattern& pattern,
                        const KroneckerCovariance& cov,
                        const NoiseDataStats& stats, const SimConfig& sim,
                        const std::string& pattern_id) {
  if (sim.trials < 1) throw std::invalid_argument("simulate: trials must be >= 1");
  stats.validate();
  const long mn = pattern.size();
  const auto& pilots = pattern.pilot_indices();
  const long k = static_cast<long>(pilots.size());
  const double sigma_p = std::sqrt(pattern.pilot_power());

  const ChannelSampler sampler(cov);
  const ErrorReport analytic =
      error_covariance_exact(pattern, cov, stats, sim.include_data_term);

  // With constant-modulus pilots the estimator matrix factors as
  // E0 * Diag(conj(phases)), so phase draws only rescale the pilot
  // observations; E0 = sigma_p * C_g[:,P] * (sigma_p^2 C_g[P,P] + sigma_n^2 I)^-1.
  Eigen::MatrixXcd e0;
  if (k > 0) {
    Eigen::MatrixXcd v(mn, k);
    for (long j = 0; j < k; ++j)
      for (long i = 0; i < mn; ++i) v(i, j) = cov(i, pilots[static_cast<size_t>(j)]);
    Eigen::MatrixXcd b(k, k);
    for (long r = 0; r < k; ++r)
      for (long c = 0; c < k; ++c)
        b(r, c) = pattern.pilot_power() * v(pilots[static_cast<size_t>(r)], c);
    b.diagonal().array() += stats.noise_var;
    e0 = sigma_p * v * b.llt().solve(Eigen::MatrixXcd::Identity(k, k));
  }

  double sum = 0.0, sum_sq = 0.0;
  for (long trial = 0; trial < sim.trials; ++trial) {
    auto rng = trial_rng(sim.seed, trial);
    const Eigen::VectorXcd g = sampler.draw(rng);
    Eigen::VectorXcd phases = Eigen::VectorXcd::Ones(k);
    if (sim.random_pilot_phases)
      for (long i = 0; i < k; ++i) {
        constexpr double kInv = 1.0 / 9007199254740992.0;
        phases(i) = std::polar(1.0, 2.0 * std::numbers::pi *
                                        (static_cast<double>(rng() >> 11) * kInv));
      }
    const Eigen::VectorXcd y =
        simulate_frame(pattern, g, sigma_p * phases, stats, rng);
    Eigen::VectorXcd ghat = Eigen::VectorXcd::Zero(mn);
    if (k > 0) {
      Eigen::VectorXcd yp(k);
      for (long i = 0; i < k; ++i)
        yp(i) = std::conj(phases(i)) * y(pilots[static_cast<size_t>(i)]);
      ghat = e0 * yp;
    }
    const double err = (g - ghat).squaredNorm();
    sum += err;
    sum_sq += err * err;
  }

  MseRecord rec;
  rec.pattern_id = pattern_id;
  rec.pilot_count = static_cast<int>(k);
  rec.alpha_db = 10.0 * std::log10(pilot_snr(pattern, stats));
  rec.trials = sim.trials;
  rec.seed = sim.seed;
  rec.empirical = sum / static_cast<double>(sim.trials);
  rec.theoretical = analytic.trace_mse;
  if (sim.trials > 1) {
    const double var =
        (sum_sq - sum * sum / static_cast<double>(sim.trials)) /
        static_cast<double>(sim.trials - 1);
    rec.stderr_ = std::sqrt(std::max(var, 0.0) / static_cast<double>(sim.trials));
  }
  return rec;
}

} // namespace latpilot
