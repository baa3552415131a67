#include "latpilot/lattice.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <mutex>
#include <numeric>

namespace latpilot {

namespace {

long mod_pos(long x, long m) { return ((x % m) + m) % m; }

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

} // namespace

void LatticeSpec::validate(const GridConfig& grid) const {
  grid.validate();
  if (det() == 0) throw std::invalid_argument("lattice: sampling matrix is singular");
  if (grid.size() % volume() != 0)
    throw std::invalid_argument("lattice: |det V| must divide M*N (tiling condition)");
}

bool LatticeSpec::contains(const Eigen::Vector2i& x) const {
  const long d = det();
  // adj(V) * x = det(V) * V^-1 * x; x is a lattice point iff both entries
  // are divisible by det(V).
  const long u = static_cast<long>(basis(1, 1)) * x(0) - static_cast<long>(basis(0, 1)) * x(1);
  const long v = -static_cast<long>(basis(1, 0)) * x(0) + static_cast<long>(basis(0, 0)) * x(1);
  return u % d == 0 && v % d == 0;
}

bool LatticeSpec::tiles_grid(const GridConfig& grid) const {
  return contains(Eigen::Vector2i(grid.subcarriers, 0)) &&
         contains(Eigen::Vector2i(0, grid.symbols));
}

PilotPattern mask_from_lattice(const LatticeSpec& spec, const GridConfig& grid,
                               double pilot_power) {
  spec.validate(grid);
  const int m = grid.subcarriers;
  const int n = grid.symbols;
  const long expected = spec.pilot_count(grid);

  // The residues of {V p} modulo (M, N) form the subgroup generated by the
  // two columns; breadth-first closure from the origin enumerates it.
  std::vector<std::uint8_t> seen(static_cast<size_t>(grid.size()), 0);
  std::deque<std::pair<int, int>> frontier;
  seen[0] = 1;
  frontier.emplace_back(0, 0);
  long count = 1;
  const int gen[2][2] = {{spec.basis(0, 0), spec.basis(1, 0)},
                         {spec.basis(0, 1), spec.basis(1, 1)}};
  while (!frontier.empty()) {
    auto [pm, pn] = frontier.front();
    frontier.pop_front();
    for (const auto& g : gen) {
      const int qm = static_cast<int>(mod_pos(pm + g[0], m));
      const int qn = static_cast<int>(mod_pos(pn + g[1], n));
      auto& flag = seen[static_cast<size_t>(qn) * m + qm];
      if (!flag) {
        flag = 1;
        ++count;
        frontier.emplace_back(qm, qn);
      }
    }
  }
  if (count != expected)
    throw std::runtime_error(
        "lattice: degenerate modulo the grid (" + std::to_string(count) +
        " residues, expected " + std::to_string(expected) + ")");

  std::vector<std::uint8_t> mask(static_cast<size_t>(grid.size()), 0);
  const int rm = static_cast<int>(mod_pos(spec.offset(0), m));
  const int rn = static_cast<int>(mod_pos(spec.offset(1), n));
  for (int nn = 0; nn < n; ++nn)
    for (int mm = 0; mm < m; ++mm)
      if (seen[static_cast<size_t>(nn) * m + mm]) {
        const int sm = static_cast<int>(mod_pos(mm + rm, m));
        const int sn = static_cast<int>(mod_pos(nn + rn, n));
        mask[static_cast<size_t>(sn) * m + sm] = 1;
      }
  return PilotPattern(m, n, std::move(mask), pilot_power);
}

Eigen::MatrixXcd mask_spectrum(const PilotPattern& pattern) {
  const int m = pattern.subcarriers();
  const int n = pattern.symbols();
  Eigen::MatrixXcd in(m, n), out(m, n);
  for (int nn = 0; nn < n; ++nn)
    for (int mm = 0; mm < m; ++mm)
      in(mm, nn) = pattern.at(mm, nn) ? 1.0 : 0.0;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    // column-major M x N storage: the subcarrier index is the fast dimension
    fftw_plan plan = fftw_plan_dft_2d(
        n, m, reinterpret_cast<fftw_complex*>(in.data()),
        reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }
  return out;
}

ConditionReport check_condition_fft(const PilotPattern& pattern,
                                    const FeasibilityRegion& region) {
  const int m = pattern.subcarriers();
  const int n = pattern.symbols();
  const double k = pattern.pilot_count();
  const double eps = 1e-9 * std::max(k, 1.0);
  const Eigen::MatrixXcd spectrum = mask_spectrum(pattern);

  ConditionReport report;
  if (std::abs(std::abs(spectrum(0, 0)) - k) > eps)
    report.violations.push_back({0, 0, std::abs(spectrum(0, 0))});
  const int hm = region.half_width_delay();
  const int hn = region.half_width_doppler();
  for (int ms = -hm; ms <= hm; ++ms)
    for (int ns = -hn; ns <= hn; ++ns) {
      if (ms == 0 && ns == 0) continue;
      const double mag =
          std::abs(spectrum(static_cast<int>(mod_pos(ms, m)),
                            static_cast<int>(mod_pos(ns, n))));
      if (mag >= eps) report.violations.push_back({ms, ns, mag});
    }
  report.satisfied = report.violations.empty();
  return report;
}

bool check_condition_analytic(const LatticeSpec& spec, const GridConfig& grid,
                              const FeasibilityRegion& region) {
  spec.validate(grid);
  const long m = grid.subcarriers;
  const long n = grid.symbols;
  const long mn = m * n;
  const long a1 = spec.basis(0, 0), a2 = spec.basis(1, 0);
  const long b1 = spec.basis(0, 1), b2 = spec.basis(1, 1);
  const int hm = region.half_width_delay();
  const int hn = region.half_width_doppler();
  for (int ms = -hm; ms <= hm; ++ms)
    for (int ns = -hn; ns <= hn; ++ns) {
      if (ms == 0 && ns == 0) continue;
      // V^T (ms/M, ns/N) integer <=> both scaled rows divisible by MN
      const bool row_a = mod_pos(a1 * ms * n + a2 * ns * m, mn) == 0;
      const bool row_b = mod_pos(b1 * ms * n + b2 * ns * m, mn) == 0;
      if (row_a && row_b) return false;
    }
  return true;
}

double lower_bound(const GridConfig& grid, const ChannelProfile& profile,
                   double noise_var, double power_budget, int rank_delay,
                   int rank_doppler, DiagonalCount convention) {
  grid.validate();
  profile.validate();
  if (!(noise_var > 0.0))
    throw std::invalid_argument("bound: noise variance must be positive");
  if (!(power_budget >= 0.0))
    throw std::invalid_argument("bound: power budget must be nonnegative");
  if (rank_delay < 1 || rank_doppler < 1)
    throw std::invalid_argument("bound: ranks must be >= 1");
  const double d = convention == DiagonalCount::RankProduct
                       ? static_cast<double>(rank_delay) * rank_doppler
                       : static_cast<double>(rank_delay) + rank_doppler;
  const double tf = grid.tf_product();
  const double s0 = profile.scattering_amplitude();
  return d / (tf / s0 + power_budget / (grid.subcarriers * noise_var));
}

double lower_bound_spread_approx(const GridConfig& grid,
                                 const ChannelProfile& profile,
                                 double noise_var, double power_budget) {
  grid.validate();
  profile.validate();
  const double tf = grid.tf_product();
  const double s0 = profile.scattering_amplitude();
  const double d = static_cast<double>(grid.size()) * tf * profile.spread_factor();
  return d / (tf / s0 + power_budget / (grid.subcarriers * noise_var));
}

std::vector<LatticeSpec> search_lattices(const GridConfig& grid, long volume,
                                         const FeasibilityRegion& region,
                                         int max_entry) {
  grid.validate();
  if (volume < 1 || grid.size() % volume != 0)
    throw std::invalid_argument("search: volume must divide M*N");
  if (max_entry < 1) throw std::invalid_argument("search: max_entry must be >= 1");

  std::vector<LatticeSpec> found;
  for (long d2 = 1; d2 <= volume; ++d2) {
    if (volume % d2 != 0) continue;
    const long d1 = volume / d2;
    if (d1 > max_entry || d2 > max_entry) continue;
    for (long e = 0; e < d2 && e <= max_entry; ++e) {
      LatticeSpec spec;
      spec.basis << static_cast<int>(d1), 0, static_cast<int>(e), static_cast<int>(d2);
      if (!spec.tiles_grid(grid)) continue;
      if (!check_condition_analytic(spec, grid, region)) continue;
      const auto fft = check_condition_fft(mask_from_lattice(spec, grid), region);
      if (!fft.satisfied)
        throw InternalConsistencyError(
            "search: analytic and FFT feasibility checks disagree");
      found.push_back(spec);
    }
  }
  std::sort(found.begin(), found.end(), [](const LatticeSpec& a, const LatticeSpec& b) {
    const auto key = [](const LatticeSpec& s) {
      return std::make_tuple(s.basis(0, 0), s.basis(1, 1), s.basis(1, 0));
    };
    return key(a) < key(b);
  });
  return found;
}

std::vector<Eigen::Vector2i> enumerate_offsets(const LatticeSpec& spec) {
  const auto col_gcd = [](int x, int y) {
    return std::gcd(std::abs(x), std::abs(y));
  };
  const int ga = col_gcd(spec.basis(0, 0), spec.basis(1, 0));
  const int gb = col_gcd(spec.basis(0, 1), spec.basis(1, 1));
  if (ga == 0 || gb == 0)
    throw std::invalid_argument("lattice: zero generator column");
  std::vector<Eigen::Vector2i> offsets;
  offsets.reserve(static_cast<size_t>(ga) * gb);
  const Eigen::Vector2i a(spec.basis(0, 0) / ga, spec.basis(1, 0) / ga);
  const Eigen::Vector2i b(spec.basis(0, 1) / gb, spec.basis(1, 1) / gb);
  for (int i = 0; i < ga; ++i)
    for (int j = 0; j < gb; ++j) offsets.push_back(i * a + j * b);
  return offsets;
}

} // namespace latpilot
