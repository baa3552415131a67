#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "latpilot/covariance.hpp"
#include "latpilot/estimator.hpp"
#include "latpilot/lattice.hpp"
#include "latpilot/montecarlo.hpp"

namespace py = pybind11;
using namespace latpilot;

PYBIND11_MODULE(_core, m) {
  m.doc() = "LMMSE-optimal lattice pilot design for doubly dispersive OFDM grids";

  py::class_<GridConfig>(m, "GridConfig")
      .def(py::init([](int subcarriers, int symbols, double symbol_duration,
                       double subcarrier_spacing) {
             GridConfig g{subcarriers, symbols, symbol_duration, subcarrier_spacing};
             g.validate();
             return g;
           }),
           py::arg("subcarriers"), py::arg("symbols"), py::arg("symbol_duration"),
           py::arg("subcarrier_spacing"))
      .def_readonly("subcarriers", &GridConfig::subcarriers)
      .def_readonly("symbols", &GridConfig::symbols)
      .def_readonly("symbol_duration", &GridConfig::symbol_duration)
      .def_readonly("subcarrier_spacing", &GridConfig::subcarrier_spacing)
      .def_property_readonly("size", &GridConfig::size)
      .def_property_readonly("tf_product", &GridConfig::tf_product);

  py::class_<PowerProfile>(m, "PowerProfile")
      .def_static("rectangular", &PowerProfile::rectangular, py::arg("peak"))
      .def_static("triangular", &PowerProfile::triangular, py::arg("peak"),
                  py::arg("width"))
      .def_static("tabulated", &PowerProfile::tabulated, py::arg("x"),
                  py::arg("value"))
      .def("__call__", &PowerProfile::operator())
      .def_property_readonly("peak", &PowerProfile::peak);

  py::class_<ChannelProfile>(m, "ChannelProfile")
      .def(py::init([](double delay_spread, double doppler_spread,
                       const PowerProfile& delay_profile,
                       const PowerProfile& doppler_profile) {
             ChannelProfile p{delay_spread, doppler_spread, delay_profile,
                              doppler_profile};
             p.validate();
             return p;
           }),
           py::arg("delay_spread"), py::arg("doppler_spread"),
           py::arg("delay_profile"), py::arg("doppler_profile"))
      .def_static("rectangular", &ChannelProfile::rectangular,
                  py::arg("delay_spread"), py::arg("doppler_spread"), py::arg("s0"))
      .def_readonly("delay_spread", &ChannelProfile::delay_spread)
      .def_readonly("doppler_spread", &ChannelProfile::doppler_spread)
      .def_property_readonly("spread_factor", &ChannelProfile::spread_factor)
      .def_property_readonly("scattering_amplitude",
                             &ChannelProfile::scattering_amplitude)
      .def("validate", &ChannelProfile::validate);

  py::enum_<Domain>(m, "Domain")
      .value("DELAY", Domain::Delay)
      .value("DOPPLER", Domain::Doppler);

  py::class_<HermitianToeplitz>(m, "HermitianToeplitz")
      .def(py::init<std::vector<std::complex<double>>>(), py::arg("gen"))
      .def_property_readonly("dim", &HermitianToeplitz::dim)
      .def_property_readonly("generating_sequence",
                             &HermitianToeplitz::generating_sequence)
      .def("dense", &HermitianToeplitz::dense)
      .def("min_eigenvalue", &HermitianToeplitz::min_eigenvalue)
      .def("is_positive_semidefinite", &HermitianToeplitz::is_positive_semidefinite)
      .def_property_readonly("quadrature_converged",
                             &HermitianToeplitz::quadrature_converged);

  py::class_<QuadratureSpec>(m, "QuadratureSpec")
      .def(py::init<>())
      .def_readwrite("initial_nodes", &QuadratureSpec::initial_nodes)
      .def_readwrite("max_nodes", &QuadratureSpec::max_nodes)
      .def_readwrite("rel_tol", &QuadratureSpec::rel_tol);

  m.def("build_factor_exact", &build_factor_exact, py::arg("profile"),
        py::arg("grid"), py::arg("domain"), py::arg("quad") = QuadratureSpec{});
  m.def("build_factor_sinc", &build_factor_sinc, py::arg("profile"),
        py::arg("grid"), py::arg("domain"));
  m.def("sinc_factor", &sinc_factor, py::arg("dim"), py::arg("step"));
  m.def("lag_step", &lag_step, py::arg("profile"), py::arg("grid"),
        py::arg("domain"));

  py::class_<KroneckerCovariance>(m, "KroneckerCovariance")
      .def_property_readonly("rows", &KroneckerCovariance::rows)
      .def("dense", &KroneckerCovariance::dense,
           py::arg("cap") = KroneckerCovariance::kDenseCap)
      .def("trace", &KroneckerCovariance::trace)
      .def("__getitem__",
           [](const KroneckerCovariance& c, std::pair<long, long> kl) {
             if (kl.first < 0 || kl.first >= c.rows() || kl.second < 0 ||
                 kl.second >= c.rows())
               throw py::index_error();
             return c(kl.first, kl.second);
           })
      .def_property_readonly("scale", &KroneckerCovariance::scale)
      .def_property_readonly("delay_factor", &KroneckerCovariance::delay_factor)
      .def_property_readonly("doppler_factor", &KroneckerCovariance::doppler_factor);

  m.def("assemble_covariance", &assemble_covariance, py::arg("doppler"),
        py::arg("delay"), py::arg("scale"));
  m.def("spectral_density",
        py::overload_cast<double, double>(&spectral_density), py::arg("step"),
        py::arg("omega"));

  py::class_<TruncationRank>(m, "TruncationRank")
      .def_readonly("rank", &TruncationRank::rank)
      .def_readonly("clamped", &TruncationRank::clamped);
  m.def("truncation_rank", &truncation_rank, py::arg("dim"),
        py::arg("support_product"));

  py::class_<TruncatedDFTFactor>(m, "TruncatedDFTFactor")
      .def_readonly("dim", &TruncatedDFTFactor::dim)
      .def_readonly("rank", &TruncatedDFTFactor::rank)
      .def_readonly("step", &TruncatedDFTFactor::step)
      .def_readonly("basis", &TruncatedDFTFactor::basis)
      .def_readonly("eigenvalues", &TruncatedDFTFactor::eigenvalues)
      .def("reconstruct", &TruncatedDFTFactor::reconstruct);
  m.def("dft_diagonalize",
        py::overload_cast<int, int, double>(&dft_diagonalize), py::arg("dim"),
        py::arg("rank"), py::arg("step"));

  m.def("rel_fro_error", &rel_fro_error, py::arg("a"), py::arg("approx"));
  m.def("rel_kron_error", &rel_kron_error, py::arg("a_doppler"),
        py::arg("a_delay"), py::arg("scale_a"), py::arg("b_doppler"),
        py::arg("b_delay"), py::arg("scale_b"));

  py::class_<PilotPattern>(m, "PilotPattern")
      .def(py::init([](int subcarriers, int symbols, const Eigen::MatrixXi& mask,
                       double pilot_power) {
             if (mask.rows() != subcarriers || mask.cols() != symbols)
               throw std::invalid_argument("mask must be subcarriers x symbols");
             std::vector<std::uint8_t> flat(static_cast<size_t>(mask.size()));
             for (int n = 0; n < symbols; ++n)
               for (int mrow = 0; mrow < subcarriers; ++mrow)
                 flat[static_cast<size_t>(n) * subcarriers + mrow] =
                     mask(mrow, n) ? 1 : 0;
             return PilotPattern(subcarriers, symbols, std::move(flat), pilot_power);
           }),
           py::arg("subcarriers"), py::arg("symbols"), py::arg("mask"),
           py::arg("pilot_power") = 1.0)
      .def_static("from_indices", &PilotPattern::from_indices,
                  py::arg("subcarriers"), py::arg("symbols"), py::arg("indices"),
                  py::arg("pilot_power") = 1.0)
      .def_static("all_pilots", &PilotPattern::all_pilots, py::arg("subcarriers"),
                  py::arg("symbols"), py::arg("pilot_power") = 1.0)
      .def_static("empty", &PilotPattern::empty, py::arg("subcarriers"),
                  py::arg("symbols"))
      .def_property_readonly("subcarriers", &PilotPattern::subcarriers)
      .def_property_readonly("symbols", &PilotPattern::symbols)
      .def_property_readonly("pilot_count", &PilotPattern::pilot_count)
      .def_property_readonly("pilot_indices", &PilotPattern::pilot_indices)
      .def_property_readonly("pilot_power", &PilotPattern::pilot_power)
      .def("set_pilot_power", &PilotPattern::set_pilot_power)
      .def("with_power_budget", &PilotPattern::with_power_budget, py::arg("beta"))
      .def("mask",
           [](const PilotPattern& p) {
             Eigen::MatrixXi mask(p.subcarriers(), p.symbols());
             for (int n = 0; n < p.symbols(); ++n)
               for (int mrow = 0; mrow < p.subcarriers(); ++mrow)
                 mask(mrow, n) = p.at(mrow, n);
             return mask;
           });

  py::class_<NoiseDataStats>(m, "NoiseDataStats")
      .def(py::init([](double noise_var, double data_var) {
             NoiseDataStats s{noise_var, data_var};
             s.validate();
             return s;
           }),
           py::arg("noise_var") = 1.0, py::arg("data_var") = 0.0)
      .def_readwrite("noise_var", &NoiseDataStats::noise_var)
      .def_readwrite("data_var", &NoiseDataStats::data_var);
  m.def("pilot_snr", &pilot_snr, py::arg("pattern"), py::arg("stats"));

  py::class_<ErrorReport>(m, "ErrorReport")
      .def_readonly("trace_mse", &ErrorReport::trace_mse)
      .def_readonly("per_symbol_mse", &ErrorReport::per_symbol_mse)
      .def_property_readonly("full_covariance", [](const ErrorReport& r) {
        return r.full_covariance ? py::cast(*r.full_covariance) : py::none();
      });

  m.def("lmmse_estimate", &lmmse_estimate, py::arg("y"), py::arg("pattern"),
        py::arg("pilot_values"), py::arg("cov"), py::arg("stats"));
  m.def("error_covariance_exact", &error_covariance_exact, py::arg("pattern"),
        py::arg("cov"), py::arg("stats"), py::arg("include_data_term") = false,
        py::arg("keep_full") = false);
  m.def("error_covariance_approx", &error_covariance_approx, py::arg("pattern"),
        py::arg("delay"), py::arg("doppler"), py::arg("gamma"), py::arg("stats"),
        py::arg("keep_full") = false);
  m.def("gram_matrix", &gram_matrix, py::arg("pattern"), py::arg("delay"),
        py::arg("doppler"));

  py::class_<LatticeSpec>(m, "LatticeSpec")
      .def(py::init([](const Eigen::Matrix2i& basis, const Eigen::Vector2i& offset) {
             LatticeSpec spec;
             spec.basis = basis;
             spec.offset = offset;
             return spec;
           }),
           py::arg("basis"), py::arg("offset") = Eigen::Vector2i::Zero().eval())
      .def_readwrite("basis", &LatticeSpec::basis)
      .def_readwrite("offset", &LatticeSpec::offset)
      .def_property_readonly("volume", &LatticeSpec::volume)
      .def("pilot_count", &LatticeSpec::pilot_count)
      .def("tiles_grid", &LatticeSpec::tiles_grid);

  py::class_<FeasibilityRegion>(m, "FeasibilityRegion")
      .def(py::init([](int rank_delay, int rank_doppler, bool include_boundary) {
             return FeasibilityRegion{rank_delay, rank_doppler, include_boundary};
           }),
           py::arg("rank_delay"), py::arg("rank_doppler"),
           py::arg("include_boundary") = true)
      .def_readwrite("rank_delay", &FeasibilityRegion::rank_delay)
      .def_readwrite("rank_doppler", &FeasibilityRegion::rank_doppler)
      .def_readwrite("include_boundary", &FeasibilityRegion::include_boundary);

  py::class_<RegionViolation>(m, "RegionViolation")
      .def_readonly("m_shift", &RegionViolation::m_shift)
      .def_readonly("n_shift", &RegionViolation::n_shift)
      .def_readonly("magnitude", &RegionViolation::magnitude);
  py::class_<ConditionReport>(m, "ConditionReport")
      .def_readonly("satisfied", &ConditionReport::satisfied)
      .def_readonly("violations", &ConditionReport::violations);

  m.def("mask_from_lattice", &mask_from_lattice, py::arg("spec"), py::arg("grid"),
        py::arg("pilot_power") = 1.0);
  m.def("mask_spectrum", &mask_spectrum, py::arg("pattern"));
  m.def("check_condition_fft", &check_condition_fft, py::arg("pattern"),
        py::arg("region"));
  m.def("check_condition_analytic", &check_condition_analytic, py::arg("spec"),
        py::arg("grid"), py::arg("region"));

  py::enum_<DiagonalCount>(m, "DiagonalCount")
      .value("RANK_PRODUCT", DiagonalCount::RankProduct)
      .value("RANK_SUM", DiagonalCount::RankSum);
  m.def("lower_bound", &lower_bound, py::arg("grid"), py::arg("profile"),
        py::arg("noise_var"), py::arg("power_budget"), py::arg("rank_delay"),
        py::arg("rank_doppler"),
        py::arg("convention") = DiagonalCount::RankProduct);
  m.def("lower_bound_spread_approx", &lower_bound_spread_approx, py::arg("grid"),
        py::arg("profile"), py::arg("noise_var"), py::arg("power_budget"));
  m.def("search_lattices", &search_lattices, py::arg("grid"), py::arg("volume"),
        py::arg("region"), py::arg("max_entry"));
  m.def("enumerate_offsets", &enumerate_offsets, py::arg("spec"));

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("trials", &SimConfig::trials)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("random_pilot_phases", &SimConfig::random_pilot_phases)
      .def_readwrite("include_data_term", &SimConfig::include_data_term);

  py::class_<ChannelSampler>(m, "ChannelSampler")
      .def(py::init<const KroneckerCovariance&>(), py::arg("cov"))
      .def("draw", [](const ChannelSampler& s, std::uint64_t seed, long trial) {
        auto rng = trial_rng(seed, trial);
        return s.draw(rng);
      }, py::arg("seed"), py::arg("trial") = 0);

  py::class_<MseRecord>(m, "MseRecord")
      .def_readonly("pattern_id", &MseRecord::pattern_id)
      .def_readonly("pilot_count", &MseRecord::pilot_count)
      .def_readonly("alpha_db", &MseRecord::alpha_db)
      .def_readonly("trials", &MseRecord::trials)
      .def_readonly("empirical", &MseRecord::empirical)
      .def_readonly("theoretical", &MseRecord::theoretical)
      .def_readonly("stderr", &MseRecord::stderr_)
      .def_readonly("seed", &MseRecord::seed)
      .def("to_json_line", &MseRecord::to_json_line);
  m.def("empirical_mse", &empirical_mse, py::arg("pattern"), py::arg("cov"),
        py::arg("stats"), py::arg("sim"), py::arg("pattern_id") = "pattern");

  m.attr("__version__") = "0.1.0";
}
