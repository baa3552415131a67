#include "latpilot/covariance.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace latpilot {

namespace {

constexpr double kPi = std::numbers::pi;

struct DomainParams {
  double spread;    // tau_D or nu_D
  double step_unit; // F or T
  double sign;      // exponent sign: -1 delay, +1 Doppler
  const PowerProfile* profile;
  int dim;
};

DomainParams domain_params(const ChannelProfile& profile, const GridConfig& grid,
                           Domain domain) {
  if (domain == Domain::Delay)
    return {profile.delay_spread, grid.subcarrier_spacing, -1.0,
            &profile.delay_profile, grid.subcarriers};
  return {profile.doppler_spread, grid.symbol_duration, +1.0,
          &profile.doppler_profile, grid.symbols};
}

// Gauss-Legendre nodes and weights on [-1, 1]; Newton iteration on the
// three-term recurrence.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<size_t>(n), 0.0);
  weights.assign(static_cast<size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<size_t>(i)] = -x;
    nodes[static_cast<size_t>(n - 1 - i)] = x;
    weights[static_cast<size_t>(i)] = w;
    weights[static_cast<size_t>(n - 1 - i)] = w;
  }
}

std::vector<std::complex<double>> quad_generating_sequence(const DomainParams& d,
                                                           int nodes) {
  std::vector<double> x, w;
  gauss_legendre(nodes, x, w);
  const double half = d.spread / 2.0;
  std::vector<std::complex<double>> gen(static_cast<size_t>(d.dim),
                                        std::complex<double>(0.0, 0.0));
  std::vector<double> pv(static_cast<size_t>(nodes));
  for (int q = 0; q < nodes; ++q) {
    double xq = half * x[static_cast<size_t>(q)];
    double v = (*d.profile)(xq);
    if (!std::isfinite(v))
      throw std::runtime_error("quadrature: profile evaluated to a non-finite value");
    pv[static_cast<size_t>(q)] = v;
  }
  for (int k = 0; k < d.dim; ++k) {
    std::complex<double> acc(0.0, 0.0);
    const double freq = d.sign * 2.0 * kPi * k * d.step_unit;
    for (int q = 0; q < nodes; ++q) {
      double xq = half * x[static_cast<size_t>(q)];
      acc += half * w[static_cast<size_t>(q)] * pv[static_cast<size_t>(q)] *
             std::polar(1.0, freq * xq);
    }
    gen[static_cast<size_t>(k)] = acc;
  }
  return gen;
}

} // namespace

double sinc(double u) {
  const double a = std::abs(u);
  if (a < 1e-8) {
    const double pu = kPi * u;
    return 1.0 - pu * pu / 6.0;
  }
  return std::sin(kPi * u) / (kPi * u);
}

double lag_step(const ChannelProfile& profile, const GridConfig& grid, Domain domain) {
  const auto d = domain_params(profile, grid, domain);
  return d.step_unit * d.spread;
}

HermitianToeplitz build_factor_exact(const ChannelProfile& profile,
                                     const GridConfig& grid, Domain domain,
                                     const QuadratureSpec& quad) {
  grid.validate();
  profile.validate();
  if (quad.initial_nodes < 8)
    throw std::invalid_argument("quadrature: need at least 8 nodes");
  const auto d = domain_params(profile, grid, domain);

  auto prev = quad_generating_sequence(d, quad.initial_nodes);
  bool converged = false;
  for (int n = 2 * quad.initial_nodes; n <= quad.max_nodes; n *= 2) {
    auto next = quad_generating_sequence(d, n);
    double change = 0.0, scale = 0.0;
    for (size_t k = 0; k < next.size(); ++k) {
      change = std::max(change, std::abs(next[k] - prev[k]));
      scale = std::max(scale, std::abs(next[k]));
    }
    prev = std::move(next);
    if (change <= quad.rel_tol * std::max(scale, 1e-300)) {
      converged = true;
      break;
    }
  }
  HermitianToeplitz factor(std::move(prev));
  factor.set_quadrature_converged(converged);
  return factor;
}

HermitianToeplitz build_factor_sinc(const ChannelProfile& profile,
                                    const GridConfig& grid, Domain domain) {
  grid.validate();
  profile.validate();
  const auto d = domain_params(profile, grid, domain);
  const double amp = d.profile->peak() * d.spread;
  const double step = d.step_unit * d.spread;
  std::vector<std::complex<double>> gen(static_cast<size_t>(d.dim));
  for (int k = 0; k < d.dim; ++k)
    gen[static_cast<size_t>(k)] = amp * sinc(k * step);
  return HermitianToeplitz(std::move(gen));
}

HermitianToeplitz sinc_factor(int dim, double step) {
  if (dim < 1) throw std::invalid_argument("sinc factor: dim must be >= 1");
  std::vector<std::complex<double>> gen(static_cast<size_t>(dim));
  for (int k = 0; k < dim; ++k) gen[static_cast<size_t>(k)] = sinc(k * step);
  return HermitianToeplitz(std::move(gen));
}

KroneckerCovariance::KroneckerCovariance(HermitianToeplitz doppler,
                                         HermitianToeplitz delay, double scale)
    : doppler_(std::move(doppler)), delay_(std::move(delay)), scale_(scale) {
  if (!(scale >= 0.0))
    throw std::invalid_argument("covariance: scale must be nonnegative");
}

Eigen::MatrixXcd KroneckerCovariance::dense(long cap) const {
  const long n = rows();
  if (n > cap)
    throw std::length_error("covariance: dense materialization exceeds the row cap");
  Eigen::MatrixXcd out(n, n);
  const int m = delay_.dim();
  for (long k = 0; k < n; ++k)
    for (long l = 0; l < n; ++l)
      out(k, l) = scale_ * doppler_(static_cast<int>(k / m), static_cast<int>(l / m)) *
                  delay_(static_cast<int>(k % m), static_cast<int>(l % m));
  return out;
}

KroneckerCovariance assemble_covariance(const HermitianToeplitz& doppler,
                                        const HermitianToeplitz& delay,
                                        double scale) {
  return KroneckerCovariance(doppler, delay, scale);
}

double spectral_density(double step, double omega) {
  if (!(step > 0.0))
    throw std::invalid_argument("spectral density: step must be positive");
  if (std::abs(omega) > kPi * (1.0 + 1e-12))
    throw std::invalid_argument("spectral density: omega outside [-pi, pi]");
  const double u = omega / (2.0 * kPi * step);
  // boundary |u| = 1/2 belongs to the support
  return std::abs(u) <= 0.5 * (1.0 + 1e-12) ? 1.0 / step : 0.0;
}

double spectral_density(const ChannelProfile& profile, const GridConfig& grid,
                        Domain domain, double omega) {
  return spectral_density(lag_step(profile, grid, domain), omega);
}

TruncationRank truncation_rank(int dim, double support_product) {
  if (dim < 1) throw std::invalid_argument("truncation rank: dim must be >= 1");
  if (!(support_product > 0.0))
    throw std::invalid_argument("truncation rank: support product must be positive");
  TruncationRank out;
  if (support_product >= dim) {
    out.rank = (dim % 2 == 1) ? dim : dim - 1;
    out.clamped = true;
    return out;
  }
  int r = static_cast<int>(std::ceil(support_product));
  if (r % 2 == 0) r += 1; // round up, never down
  if (r > dim) {
    r = (dim % 2 == 1) ? dim : dim - 1;
    out.clamped = true;
  }
  out.rank = std::max(r, 1);
  return out;
}

TruncatedDFTFactor dft_diagonalize(int dim, int rank, double step) {
  if (rank < 1 || rank > dim)
    throw std::invalid_argument("dft factor: rank must lie in [1, dim]");
  if (rank % 2 == 0) throw std::invalid_argument("dft factor: rank must be odd");
  TruncatedDFTFactor f;
  f.dim = dim;
  f.rank = rank;
  f.step = step;
  f.basis.resize(rank, dim);
  f.eigenvalues.resize(rank);
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int i = 0; i < rank; ++i) {
    const int freq = (1 - rank) / 2 + i;
    f.eigenvalues(i) = spectral_density(step, 2.0 * kPi * freq / dim);
    for (int m = 0; m < dim; ++m) {
      // conjugated DFT vector; reduce the phase index mod dim to keep the
      // argument small
      const long idx = (static_cast<long>(freq) * m) % dim;
      f.basis(i, m) = norm * std::polar(1.0, -2.0 * kPi * idx / dim);
    }
  }
  return f;
}

TruncatedDFTFactor dft_diagonalize(const HermitianToeplitz& factor, int rank,
                                   const ChannelProfile& profile,
                                   const GridConfig& grid, Domain domain) {
  return dft_diagonalize(factor.dim(), rank, lag_step(profile, grid, domain));
}

Eigen::MatrixXcd TruncatedDFTFactor::reconstruct() const {
  return basis.adjoint() * eigenvalues.asDiagonal() * basis;
}

double rel_fro_error(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& approx) {
  if (a.rows() != approx.rows() || a.cols() != approx.cols())
    throw std::invalid_argument("relative error: shape mismatch");
  const double denom = a.norm();
  if (denom == 0.0)
    throw std::invalid_argument("relative error: reference has zero norm");
  return (a - approx).norm() / denom;
}

namespace {

std::complex<double> gen_at(const HermitianToeplitz& t, int k) {
  const auto& g = t.generating_sequence();
  return k >= 0 ? g[static_cast<size_t>(k)] : std::conj(g[static_cast<size_t>(-k)]);
}

} // namespace

double rel_kron_error(const HermitianToeplitz& a_doppler, const HermitianToeplitz& a_delay,
                      double scale_a,
                      const HermitianToeplitz& b_doppler, const HermitianToeplitz& b_delay,
                      double scale_b) {
  // Entries of sa*(An x At) depend only on the lag pair (kn, kt) with
  // multiplicity (N-|kn|)(M-|kt|); both squared norms are accumulated per
  // lag, so small differences never cancel against the large norms.
  const int ndim = a_doppler.dim();
  const int mdim = a_delay.dim();
  if (b_doppler.dim() != ndim || b_delay.dim() != mdim)
    throw std::invalid_argument("relative error: shape mismatch");
  double diff2 = 0.0, ref2 = 0.0;
  for (int kn = -(ndim - 1); kn <= ndim - 1; ++kn) {
    const double wn = ndim - std::abs(kn);
    const auto an = gen_at(a_doppler, kn);
    const auto bn = gen_at(b_doppler, kn);
    for (int kt = -(mdim - 1); kt <= mdim - 1; ++kt) {
      const double w = wn * (mdim - std::abs(kt));
      const auto va = scale_a * an * gen_at(a_delay, kt);
      const auto vb = scale_b * bn * gen_at(b_delay, kt);
      diff2 += w * std::norm(va - vb);
      ref2 += w * std::norm(va);
    }
  }
  if (ref2 <= 0.0)
    throw std::invalid_argument("relative error: reference has zero norm");
  return std::sqrt(diff2 / ref2);
}

} // namespace latpilot
