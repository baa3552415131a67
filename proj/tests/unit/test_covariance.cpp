#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "latpilot/covariance.hpp"
#include "support/oracles.hpp"

using namespace latpilot;

namespace {

GridConfig make_grid(int m, int n, double tf = 1.07) {
  GridConfig g;
  g.subcarriers = m;
  g.symbols = n;
  g.subcarrier_spacing = 1.0;
  g.symbol_duration = tf;
  return g;
}

// profile with given lag products F*tau_D and T*nu_D on a unit-F grid
ChannelProfile rect_profile(const GridConfig& grid, double f_tau, double t_nu,
                            double s0 = 1.0) {
  return ChannelProfile::rectangular(f_tau / grid.subcarrier_spacing,
                                     t_nu / grid.symbol_duration, s0);
}

} // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(make_grid(0, 4).validate(), std::invalid_argument);
  GridConfig bad = make_grid(4, 4);
  bad.symbol_duration = 0.9; // TF < 1
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_NOTHROW(make_grid(4, 4).validate());
}

TEST_CASE("profile validation and spread warning") {
  CHECK_THROWS_AS(ChannelProfile::rectangular(1.0, 1.5, 1.0).validate(),
                  std::invalid_argument);
  auto warned = ChannelProfile::rectangular(0.5, 0.5, 1.0); // delta = 0.25
  CHECK(warned.validate().size() == 1);
  auto quiet = ChannelProfile::rectangular(0.1, 0.1, 1.0);
  CHECK(quiet.validate().empty());
}

TEST_CASE("exact factor, rectangular profile: lag zero is the profile area") {
  const auto grid = make_grid(16, 8);
  const auto profile = rect_profile(grid, 3.0 / 16, 3.0 / 8, 2.5);
  const auto factor = build_factor_exact(profile, grid, Domain::Delay);
  CHECK(factor.quadrature_converged());
  const double expected = profile.delay_profile.peak() * profile.delay_spread;
  CHECK(factor.generating_sequence()[0].real() ==
        doctest::Approx(expected).epsilon(1e-13));
  CHECK(factor.generating_sequence()[0].imag() == 0.0);
}

TEST_CASE("exact factor matches the closed sinc form for rectangular profiles") {
  const auto grid = make_grid(32, 16);
  for (double f_tau : {0.05, 0.1875, 0.9}) {
    const auto profile = rect_profile(grid, f_tau, 0.2, 1.3);
    const auto exact = build_factor_exact(profile, grid, Domain::Delay);
    const auto closed = build_factor_sinc(profile, grid, Domain::Delay);
    for (int k = 0; k < exact.dim(); ++k) {
      const auto a = exact.generating_sequence()[static_cast<size_t>(k)];
      const auto b = closed.generating_sequence()[static_cast<size_t>(k)];
      CHECK(std::abs(a - b) <= 1e-8 * std::abs(closed.generating_sequence()[0]));
    }
  }
}

TEST_CASE("exact factor, triangular profile vs dense trapezoid oracle") {
  const auto grid = make_grid(8, 4);
  const double tau_d = 0.21;
  ChannelProfile profile;
  profile.delay_spread = tau_d;
  profile.doppler_spread = 0.05;
  // support-scaled triangle: apex at 0, zero at the support edges
  profile.delay_profile = PowerProfile::triangular(1.7, tau_d / 2.0);
  profile.doppler_profile = PowerProfile::rectangular(1.0);
  const auto factor = build_factor_exact(profile, grid, Domain::Delay);
  const auto expected = oracles::trapezoid_factor_entry(
      [&](double x) { return profile.delay_profile(x); }, tau_d,
      grid.subcarrier_spacing, 1, -1.0);
  const auto got = factor.generating_sequence()[1];
  CHECK(std::abs(got - expected) <= 1e-8 * std::abs(expected));
}

TEST_CASE("exact factor, Doppler domain uses the positive exponent sign") {
  const auto grid = make_grid(4, 8);
  // asymmetric tabulated profile so the sign is observable
  ChannelProfile profile;
  profile.delay_spread = 0.1;
  profile.doppler_spread = 0.3;
  profile.delay_profile = PowerProfile::rectangular(1.0);
  profile.doppler_profile =
      PowerProfile::tabulated({-0.15, 0.0, 0.15}, {0.2, 1.0, 1.6});
  const auto factor = build_factor_exact(profile, grid, Domain::Doppler);
  const auto expected = oracles::trapezoid_factor_entry(
      [&](double x) { return profile.doppler_profile(x); }, 0.3,
      grid.symbol_duration, 1, +1.0);
  CHECK(std::abs(factor.generating_sequence()[1] - expected) <=
        1e-7 * std::abs(expected));
  CHECK(factor.generating_sequence()[1].imag() != 0.0);
}

TEST_CASE("non-finite profile values are rejected") {
  const auto grid = make_grid(4, 4);
  ChannelProfile profile;
  profile.delay_spread = 0.1;
  profile.doppler_spread = 0.1;
  profile.delay_profile = PowerProfile::tabulated(
      {-0.05, 0.05}, {1.0, std::numeric_limits<double>::infinity()});
  profile.doppler_profile = PowerProfile::rectangular(1.0);
  CHECK_THROWS(build_factor_exact(profile, grid, Domain::Delay));
}

TEST_CASE("quadrature non-convergence is carried as metadata") {
  const auto grid = make_grid(64, 4);
  const auto profile = rect_profile(grid, 0.9, 0.1);
  QuadratureSpec quad;
  quad.initial_nodes = 8;
  quad.max_nodes = 16; // far too few nodes for 57 oscillation cycles
  const auto factor = build_factor_exact(profile, grid, Domain::Delay, quad);
  CHECK_FALSE(factor.quadrature_converged());
}

TEST_CASE("sinc factor basics") {
  const auto grid = make_grid(256, 4);
  const auto profile = rect_profile(grid, 0.5, 0.25, 2.0);
  const auto factor = build_factor_sinc(profile, grid, Domain::Delay);
  const double amp = profile.delay_profile.peak() * profile.delay_spread;
  CHECK(factor.generating_sequence()[0].real() == doctest::Approx(amp));
  // k * F * tau_D integer => sinc zero crossing
  CHECK(std::abs(factor.generating_sequence()[2]) <= 1e-15 * amp);
  CHECK(std::abs(factor.generating_sequence()[4]) <= 1e-15 * amp);

  const auto small = rect_profile(grid, 1e-2, 0.25);
  const auto approx = build_factor_sinc(small, grid, Domain::Delay);
  const auto exact = build_factor_exact(small, grid, Domain::Delay);
  const auto a10 = approx.generating_sequence()[10];
  CHECK(a10.real() ==
        doctest::Approx(small.delay_profile.peak() * small.delay_spread * sinc(0.1)));
  CHECK(std::abs(a10 - exact.generating_sequence()[10]) <= 1e-8 * std::abs(a10));
}

TEST_CASE("factors are Hermitian PSD") {
  const auto grid = make_grid(24, 12);
  for (double f_tau : {0.1, 0.5, 0.95}) {
    const auto profile = rect_profile(grid, f_tau, 0.4);
    for (auto domain : {Domain::Delay, Domain::Doppler}) {
      const auto exact = build_factor_exact(profile, grid, domain);
      const auto closed = build_factor_sinc(profile, grid, domain);
      for (const auto* f : {&exact, &closed}) {
        const auto dense = f->dense();
        CHECK((dense - dense.adjoint()).norm() <= 1e-14 * dense.norm());
        CHECK(f->is_positive_semidefinite());
      }
    }
  }
}

TEST_CASE("zero Doppler-spread limit collapses to the rank-one all-ones factor") {
  const auto factor = sinc_factor(6, 1e-12);
  const auto dense = factor.dense();
  CHECK((dense - Eigen::MatrixXcd::Ones(6, 6)).norm() <= 1e-9);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
  CHECK(es.eigenvalues()(5) == doctest::Approx(6.0));
  CHECK(std::abs(es.eigenvalues()(4)) <= 1e-9);
}

TEST_CASE("Kronecker covariance equals the quadruple-loop oracle at 2x2") {
  std::vector<std::complex<double>> gn = {{2.0, 0.0}, {0.3, 0.4}};
  std::vector<std::complex<double>> gt = {{1.5, 0.0}, {-0.2, 0.1}};
  const HermitianToeplitz doppler(gn), delay(gt);
  const auto cov = assemble_covariance(doppler, delay, 0.7);
  const auto dense = cov.dense();
  const auto expected = oracles::kron(doppler.dense(), delay.dense()) * 0.7;
  CHECK((dense - expected).norm() <= 1e-14 * expected.norm());
}

TEST_CASE("Kronecker element access matches the dense form exhaustively") {
  for (auto [m, n] : {std::pair{3, 2}, std::pair{4, 4}, std::pair{8, 8}}) {
    const auto delay = sinc_factor(m, 0.3);
    const auto doppler = sinc_factor(n, 0.17);
    const auto cov = assemble_covariance(doppler, delay, 1.9);
    const auto dense = cov.dense();
    for (long k = 0; k < cov.rows(); ++k)
      for (long l = 0; l < cov.rows(); ++l) CHECK(cov(k, l) == dense(k, l));
    // vectorization convention: element (n1*M+m1, n2*M+m2)
    for (int m1 = 0; m1 < m; ++m1)
      for (int n1 = 0; n1 < n; ++n1)
        for (int m2 = 0; m2 < m; ++m2)
          for (int n2 = 0; n2 < n; ++n2)
            CHECK(cov(static_cast<long>(n1) * m + m1,
                      static_cast<long>(n2) * m + m2) ==
                  1.9 * doppler(n1, n2) * delay(m1, m2));
  }
}

TEST_CASE("dense materialization respects the row cap") {
  const auto cov =
      assemble_covariance(sinc_factor(16, 0.1), sinc_factor(16, 0.1), 1.0);
  CHECK_THROWS_AS(cov.dense(100), std::length_error);
}

TEST_CASE("spectral density: value, support edge, outside") {
  const double step = 0.1875;
  CHECK(spectral_density(step, 0.0) == doctest::Approx(1.0 / step));
  const double edge = std::numbers::pi * step;
  CHECK(spectral_density(step, edge) == doctest::Approx(1.0 / step));
  CHECK(spectral_density(step, 1.01 * edge) == 0.0);
  CHECK_THROWS_AS(spectral_density(step, 4.0), std::invalid_argument);
}

TEST_CASE("spectral density integrates to one for the normalized sequence") {
  const double step = 0.37;
  const long n = 1 << 24;
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  double acc = 0.0;
  for (long i = 0; i < n; ++i) {
    const double omega = -std::numbers::pi + (static_cast<double>(i) + 0.5) * h;
    acc += spectral_density(step, omega);
  }
  acc *= h / (2.0 * std::numbers::pi);
  CHECK(acc == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("truncation rank: ceiling, odd bump, clamping") {
  CHECK(truncation_rank(16, 2.5).rank == 3);
  CHECK(truncation_rank(16, 3.0).rank == 3);
  CHECK(truncation_rank(16, 3.2).rank == 5);
  CHECK_FALSE(truncation_rank(16, 3.2).clamped);
  const auto clamped = truncation_rank(16, 20.0);
  CHECK(clamped.rank == 15);
  CHECK(clamped.clamped);
  const auto odd_dim = truncation_rank(15, 40.0);
  CHECK(odd_dim.rank == 15);
  CHECK_THROWS_AS(truncation_rank(8, 0.0), std::invalid_argument);
}

TEST_CASE("truncated DFT basis is orthonormal with spectral-sample eigenvalues") {
  const auto f = dft_diagonalize(64, 5, 1.0 / 16);
  const Eigen::MatrixXcd gram = f.basis * f.basis.adjoint();
  CHECK((gram - Eigen::MatrixXcd::Identity(5, 5)).norm() <= 1e-12);
  CHECK(f.eigenvalues.minCoeff() >= 0.0);
  for (int i = 0; i < f.rank; ++i)
    CHECK(f.eigenvalues(i) ==
          spectral_density(f.step,
                           2.0 * std::numbers::pi * ((1 - f.rank) / 2 + i) / f.dim));
  CHECK_THROWS_AS(dft_diagonalize(64, 4, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(dft_diagonalize(3, 5, 0.1), std::invalid_argument);
}

TEST_CASE("full-rank reconstruction is the circulant from the sampled spectrum") {
  const int dim = 15;
  const double step = 0.4;
  const auto f = dft_diagonalize(dim, dim, step);
  const auto recon = f.reconstruct();
  // circulant structure: entries depend on (i - j) mod dim
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      CHECK(std::abs(recon(i, j) - recon((i + 1) % dim, (j + 1) % dim)) <= 1e-12);
  std::vector<double> lambda;
  std::vector<int> freqs;
  for (int i = 0; i < dim; ++i) {
    freqs.push_back((1 - dim) / 2 + i);
    lambda.push_back(f.eigenvalues(i));
  }
  const auto oracle = oracles::circulant_from_eigenvalues(lambda, freqs, dim);
  CHECK((recon - oracle).norm() <= 1e-12 * oracle.norm());

  const auto s = sinc_factor(dim, step).dense();
  const double gap = (s - oracle).norm() / s.norm();
  CHECK(rel_fro_error(s, recon) == doctest::Approx(gap).epsilon(1e-12));
}

TEST_CASE("diagonalization error shrinks along the dimension doubling chain") {
  const double step = 1.0 / 16;
  double prev = std::numeric_limits<double>::infinity();
  for (int dim : {32, 64, 128, 256, 512}) {
    const auto rank = truncation_rank(dim, dim * step);
    const auto factor = sinc_factor(dim, step);
    const double err = rel_fro_error(
        factor.dense(), dft_diagonalize(dim, rank.rank, step).reconstruct());
    CHECK(err <= prev);
    prev = err;
  }
}

TEST_CASE("relative Frobenius error basics") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(2, 2);
  CHECK(rel_fro_error(a, a) == 0.0);
  CHECK(rel_fro_error(a, Eigen::MatrixXcd::Zero(2, 2)) == doctest::Approx(1.0));
  Eigen::MatrixXcd b = a;
  b(1, 1) = 0.0;
  CHECK(rel_fro_error(a, b) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(rel_fro_error(Eigen::MatrixXcd::Zero(2, 2), a),
                  std::invalid_argument);
  CHECK_THROWS_AS(rel_fro_error(a, Eigen::MatrixXcd::Zero(3, 3)),
                  std::invalid_argument);
}

TEST_CASE("factor-level Kronecker error equals the dense computation") {
  const auto grid = make_grid(12, 6);
  ChannelProfile tri;
  tri.delay_spread = 0.15;
  tri.doppler_spread = 0.2 / grid.symbol_duration;
  tri.delay_profile = PowerProfile::triangular(1.0, 1.0);
  tri.doppler_profile = PowerProfile::triangular(1.0, 1.0 / grid.symbol_duration);
  const auto ed = build_factor_exact(tri, grid, Domain::Delay);
  const auto en = build_factor_exact(tri, grid, Domain::Doppler);
  const auto sd = build_factor_sinc(tri, grid, Domain::Delay);
  const auto sn = build_factor_sinc(tri, grid, Domain::Doppler);
  const double fast = rel_kron_error(en, ed, 1.0, sn, sd, 1.0);
  const auto dense_a = oracles::kron(en.dense(), ed.dense());
  const auto dense_b = oracles::kron(sn.dense(), sd.dense());
  CHECK(fast == doctest::Approx(rel_fro_error(dense_a, dense_b)).epsilon(1e-12));
}
