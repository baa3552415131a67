#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <set>

#include "latpilot/covariance.hpp"
#include "latpilot/estimator.hpp"
#include "latpilot/lattice.hpp"
#include "support/oracles.hpp"

using namespace latpilot;

namespace {

GridConfig fig2_grid() {
  GridConfig g;
  g.subcarriers = 16;
  g.symbols = 8;
  g.subcarrier_spacing = 1.0;
  g.symbol_duration = 1.07;
  return g;
}

LatticeSpec make_lattice(int a1, int b1, int a2, int b2, int r1 = 0, int r2 = 0) {
  LatticeSpec spec;
  spec.basis << a1, b1, a2, b2;
  spec.offset << r1, r2;
  return spec;
}

FeasibilityRegion region33(bool include_boundary = true) {
  return FeasibilityRegion{3, 3, include_boundary};
}

// All Hermite normal forms of index L that tile the grid, with every
// canonical offset.
std::vector<LatticeSpec> hnf_with_offsets(const GridConfig& grid, long volume) {
  std::vector<LatticeSpec> out;
  for (long d2 = 1; d2 <= volume; ++d2) {
    if (volume % d2 != 0) continue;
    const long d1 = volume / d2;
    for (long e = 0; e < d2; ++e) {
      LatticeSpec spec = make_lattice(static_cast<int>(d1), 0, static_cast<int>(e),
                                      static_cast<int>(d2));
      if (!spec.tiles_grid(grid)) continue;
      for (const auto& offset : enumerate_offsets(spec)) {
        LatticeSpec with = spec;
        with.offset = offset;
        out.push_back(with);
      }
    }
  }
  return out;
}

} // namespace

TEST_CASE("lattice spec validation") {
  const auto grid = fig2_grid();
  CHECK_THROWS_AS(make_lattice(1, 2, 2, 4).validate(grid), std::invalid_argument);
  CHECK_THROWS_AS(make_lattice(3, 0, 0, 1).validate(grid), std::invalid_argument);
  CHECK_NOTHROW(make_lattice(2, 0, 0, 4).validate(grid));
  CHECK(make_lattice(2, -2, 2, 2).volume() == 8);
}

TEST_CASE("mask from the unit lattice is all ones") {
  const auto grid = fig2_grid();
  const auto pattern = mask_from_lattice(make_lattice(1, 0, 0, 1), grid);
  CHECK(pattern.pilot_count() == grid.size());
}

TEST_CASE("rectangular lattice places pilots on the expected residues") {
  const auto grid = fig2_grid();
  const auto pattern = mask_from_lattice(make_lattice(2, 0, 0, 4), grid);
  CHECK(pattern.pilot_count() == 16);
  for (int m = 0; m < 16; ++m)
    for (int n = 0; n < 8; ++n)
      CHECK(static_cast<bool>(pattern.at(m, n)) == (m % 2 == 0 && n % 4 == 0));
}

TEST_CASE("offset shifts the lattice mask cyclically") {
  const auto grid = fig2_grid();
  const auto base = mask_from_lattice(make_lattice(2, 0, 0, 4), grid);
  const auto shifted = mask_from_lattice(make_lattice(2, 0, 0, 4, 1, 3), grid);
  CHECK(shifted.pilot_count() == base.pilot_count());
  for (int m = 0; m < 16; ++m)
    for (int n = 0; n < 8; ++n)
      CHECK(shifted.at((m + 1) % 16, (n + 3) % 8) == base.at(m, n));
}

TEST_CASE("every det-8 tiling lattice yields 16 pilots on the 16x8 grid") {
  const auto grid = fig2_grid();
  for (const auto& spec : hnf_with_offsets(grid, 8)) {
    const auto pattern = mask_from_lattice(spec, grid);
    CHECK(pattern.pilot_count() == grid.size() / spec.volume());
  }
}

TEST_CASE("grid-degenerate lattices are rejected") {
  const auto grid = fig2_grid();
  // d2 = 16 does not divide N = 8: the residue subgroup is larger than K
  CHECK_THROWS_AS(mask_from_lattice(make_lattice(1, 0, 0, 16), grid),
                  std::runtime_error);
  CHECK_FALSE(make_lattice(1, 0, 0, 16).tiles_grid(grid));
}

TEST_CASE("mask spectrum of trivial patterns") {
  const auto grid = fig2_grid();
  const auto ones = mask_spectrum(PilotPattern::all_pilots(16, 8));
  CHECK(std::abs(ones(0, 0) - std::complex<double>(128.0, 0.0)) <= 1e-10);
  double off = 0.0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 8; ++j)
      if (i || j) off = std::max(off, std::abs(ones(i, j)));
  CHECK(off <= 1e-10);

  const auto single = mask_spectrum(PilotPattern::from_indices(16, 8, {0}));
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 8; ++j)
      CHECK(std::abs(single(i, j) - std::complex<double>(1.0, 0.0)) <= 1e-12);
}

TEST_CASE("lattice spectrum lives on the reciprocal lattice with magnitude K") {
  const auto grid = fig2_grid();
  for (const auto& spec :
       {make_lattice(2, 0, 0, 4), make_lattice(2, -2, 2, 2), make_lattice(1, 0, 2, 4)}) {
    const auto pattern = mask_from_lattice(spec, grid);
    const double k = pattern.pilot_count();
    const auto spectrum = mask_spectrum(pattern);
    const long a1 = spec.basis(0, 0), a2 = spec.basis(1, 0);
    const long b1 = spec.basis(0, 1), b2 = spec.basis(1, 1);
    for (int ms = 0; ms < 16; ++ms)
      for (int ns = 0; ns < 8; ++ns) {
        const bool reciprocal = ((a1 * ms * 8 + a2 * ns * 16) % 128 == 0) &&
                                ((b1 * ms * 8 + b2 * ns * 16) % 128 == 0);
        const double mag = std::abs(spectrum(ms, ns));
        if (reciprocal)
          CHECK(mag == doctest::Approx(k).epsilon(1e-10));
        else
          CHECK(mag <= 1e-9 * k);
      }
  }
}

TEST_CASE("fft feasibility verdicts on the reference 16x8 cases") {
  const auto grid = fig2_grid();
  const auto diamond = mask_from_lattice(make_lattice(2, -2, 2, 2), grid);
  CHECK(check_condition_fft(diamond, region33()).satisfied);

  const auto failing = mask_from_lattice(make_lattice(1, 0, 0, 8), grid);
  const auto report = check_condition_fft(failing, region33());
  CHECK_FALSE(report.satisfied);
  CHECK_FALSE(report.violations.empty());

  const auto single = PilotPattern::from_indices(16, 8, {0});
  CHECK_FALSE(check_condition_fft(single, region33()).satisfied);
}

TEST_CASE("analytic feasibility on the strict as-written region") {
  const auto grid = fig2_grid();
  // strict half-widths r-2 = 1
  CHECK(check_condition_analytic(make_lattice(2, 0, 0, 4), grid, region33(false)));
  CHECK_FALSE(check_condition_analytic(make_lattice(1, 0, 0, 8), grid, region33(false)));
  CHECK(check_condition_analytic(make_lattice(2, -2, 2, 2), grid, region33(false)));
}

TEST_CASE("boundary rows matter: the rectangular lattice fails the inclusive region") {
  const auto grid = fig2_grid();
  CHECK_FALSE(check_condition_analytic(make_lattice(2, 0, 0, 4), grid, region33()));
  CHECK(check_condition_analytic(make_lattice(2, -2, 2, 2), grid, region33()));
}

TEST_CASE("checkers agree exhaustively over HNF lattices, offsets and regions") {
  const auto grid = fig2_grid();
  for (long volume : {2L, 4L, 8L, 16L}) {
    for (const auto& spec : hnf_with_offsets(grid, volume)) {
      const auto pattern = mask_from_lattice(spec, grid);
      for (bool inclusive : {true, false}) {
        const auto region = region33(inclusive);
        CHECK(check_condition_fft(pattern, region).satisfied ==
              check_condition_analytic(spec, grid, region));
      }
    }
  }
}

TEST_CASE("fft verdict does not depend on the lattice offset") {
  const auto grid = fig2_grid();
  for (const auto& base : {make_lattice(2, -2, 2, 2), make_lattice(2, 0, 0, 4),
                           make_lattice(1, 0, 2, 4)}) {
    const bool reference =
        check_condition_fft(mask_from_lattice(base, grid), region33()).satisfied;
    for (const auto& offset : enumerate_offsets(base)) {
      LatticeSpec spec = base;
      spec.offset = offset;
      CHECK(check_condition_fft(mask_from_lattice(spec, grid), region33()).satisfied ==
            reference);
    }
  }
}

TEST_CASE("gram diagonality holds exactly when the fft condition holds") {
  const auto grid = fig2_grid();
  const auto delay = dft_diagonalize(16, 3, 3.0 / 16);
  const auto doppler = dft_diagonalize(8, 3, 3.0 / 8);
  std::mt19937_64 rng(51);
  std::vector<PilotPattern> cases;
  for (long volume : {2L, 4L, 8L}) {
    for (const auto& spec : hnf_with_offsets(grid, volume))
      cases.push_back(mask_from_lattice(spec, grid));
  }
  for (int rep = 0; rep < 10; ++rep)
    cases.push_back(oracles::random_pattern(16, 8, 0.3, rng));
  for (const auto& pattern : cases) {
    const auto gram = gram_matrix(pattern, delay, doppler);
    double off = 0.0;
    for (long i = 0; i < gram.rows(); ++i)
      for (long j = 0; j < gram.cols(); ++j)
        if (i != j) off = std::max(off, std::abs(gram(i, j)));
    const double k = std::max<double>(pattern.pilot_count(), 1.0);
    const bool diagonal = off < 1e-9 * k / pattern.size();
    CHECK(diagonal == check_condition_fft(pattern, region33()).satisfied);
  }
}

TEST_CASE("lower bound: monotone in the budget and consistent at beta = 0") {
  const auto grid = fig2_grid();
  const auto profile = ChannelProfile::rectangular(3.0 / 16, 3.0 / (8 * 1.07), 1.0);
  const double b1 = lower_bound(grid, profile, 1.0, 1.0, 3, 3);
  const double b2 = lower_bound(grid, profile, 1.0, 2.0, 3, 3);
  CHECK(b2 < b1);

  // beta = 0 equals the zero-pilot trace of the approximate model
  const double b0 = lower_bound(grid, profile, 1.0, 0.0, 3, 3);
  const double gamma = profile.scattering_amplitude() * profile.spread_factor();
  const double lambda = 1.0 / (grid.tf_product() * profile.spread_factor());
  CHECK(b0 == doctest::Approx(gamma * 9.0 * lambda).epsilon(1e-12));

  const double sum_convention =
      lower_bound(grid, profile, 1.0, 1.0, 3, 3, DiagonalCount::RankSum);
  CHECK(sum_convention == doctest::Approx(b1 * 6.0 / 9.0).epsilon(1e-12));

  CHECK(lower_bound_spread_approx(grid, profile, 1.0, 1.0) ==
        doctest::Approx(b1 * (128.0 * 1.07 * profile.spread_factor()) / 9.0)
            .epsilon(1e-12));
}

TEST_CASE("search finds the feasible sublattices in canonical form") {
  const auto grid = fig2_grid();
  SUBCASE("inclusive region, volume 8") {
    const auto found = search_lattices(grid, 8, region33(), 16);
    CHECK_FALSE(found.empty());
    bool has_diamond_form = false;
    for (const auto& spec : found) {
      CHECK(spec.volume() == 8);
      CHECK(spec.basis(0, 1) == 0); // HNF: b = (0, d2)
      if (spec.basis(0, 0) == 2 && spec.basis(1, 0) == 2 && spec.basis(1, 1) == 4)
        has_diamond_form = true;
      CHECK(mask_from_lattice(spec, grid).pilot_count() == 16);
    }
    CHECK(has_diamond_form);
  }
  SUBCASE("strict region keeps the plain rectangular form") {
    const auto found = search_lattices(grid, 8, region33(false), 16);
    bool has_rect = false;
    for (const auto& spec : found)
      if (spec.basis(0, 0) == 2 && spec.basis(1, 0) == 0 && spec.basis(1, 1) == 4)
        has_rect = true;
    CHECK(has_rect);
  }
  SUBCASE("unit volume is always feasible") {
    const auto found = search_lattices(grid, 1, region33(), 16);
    REQUIRE(found.size() == 1);
    CHECK(found[0].volume() == 1);
  }
  SUBCASE("single-pilot volume is infeasible") {
    CHECK(search_lattices(grid, grid.size(), region33(), 16).empty());
  }
  SUBCASE("results are sorted canonically") {
    const auto found = search_lattices(grid, 8, region33(), 16);
    for (size_t i = 1; i < found.size(); ++i) {
      const auto key = [](const LatticeSpec& s) {
        return std::make_tuple(s.basis(0, 0), s.basis(1, 1), s.basis(1, 0));
      };
      CHECK(key(found[i - 1]) < key(found[i]));
    }
  }
}

TEST_CASE("every analytically feasible lattice attains the bound") {
  const auto grid = fig2_grid();
  const double f_tau = 3.0 / 16, t_nu = 3.0 / 8;
  const auto profile = ChannelProfile::rectangular(f_tau, t_nu / 1.07, 1.0);
  const double gamma = profile.scattering_amplitude() * profile.spread_factor();
  const auto delay = dft_diagonalize(16, 3, f_tau);
  const auto doppler = dft_diagonalize(8, 3, t_nu);
  const double beta = 1.0;
  NoiseDataStats stats;
  const double bound = lower_bound(grid, profile, stats.noise_var, beta, 3, 3);

  double reference = -1.0;
  for (long volume : {2L, 4L, 8L}) {
    const auto found = search_lattices(grid, volume, region33(), 16);
    CHECK_FALSE(found.empty());
    for (const auto& spec : found) {
      const auto pattern = mask_from_lattice(spec, grid).with_power_budget(beta);
      const double trace =
          error_covariance_approx(pattern, delay, doppler, gamma, stats).trace_mse;
      CHECK(std::abs(trace - bound) <= 1e-9 * bound);
      // the attained value does not depend on K
      if (reference < 0.0) reference = trace;
      CHECK(std::abs(trace - reference) <= 1e-9 * reference);
    }
  }

  // random masks of the same density never beat the bound
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 100; ++rep) {
    auto pattern = oracles::random_pattern(16, 8, 0.125, rng);
    pattern = pattern.with_power_budget(beta);
    const double trace =
        error_covariance_approx(pattern, delay, doppler, gamma, stats).trace_mse;
    CHECK(trace >= bound - 1e-9 * bound);
  }
}

TEST_CASE("offset enumeration counts gcd residues") {
  CHECK(enumerate_offsets(make_lattice(2, 0, 0, 4)).size() == 8);
  CHECK(enumerate_offsets(make_lattice(1, 0, 0, 1)).size() == 1);
  CHECK(enumerate_offsets(make_lattice(2, -2, 2, 2)).size() == 4);
  // offsets reproduce r = alpha*a + beta*b with integer-valued terms
  for (const auto& r : enumerate_offsets(make_lattice(2, 0, 0, 4))) {
    CHECK(r(0) % 1 == 0);
    CHECK(r(0) >= 0);
    CHECK(r(0) < 2);
    CHECK(r(1) < 4);
  }
}
