// Python bindings for the biphoton core: double-Gaussian Schmidt theory,
// crystal dispersion, the pulse-regime models, and the numeric cross checks.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "biphoton/constants.hpp"
#include "biphoton/hermite.hpp"
#include "biphoton/numerics.hpp"
#include "biphoton/schmidt.hpp"
#include "biphoton/sellmeier.hpp"
#include "biphoton/spdc.hpp"

namespace py = pybind11;
using namespace biphoton;

PYBIND11_MODULE(_biphoton, m) {
  m.doc() = "Spectral biphoton state of pulsed collinear degenerate type-I "
            "downconversion: double-Gaussian models, analytic Schmidt ladders, "
            "and numerical cross checks.";

  m.attr("c_light") = c_light;
  m.attr("gamma_sinc_sq") = gamma_sinc_sq;
  m.attr("gamma1") = gamma1;
  m.attr("gamma2") = gamma2;

  // hermite ------------------------------------------------------------------
  m.def("hermite_phi", &hermite_phi, py::arg("n"), py::arg("x"),
        "Normalized Hermite-Gauss function phi_n(x).");
  m.def("hermite_phi_ladder", &hermite_phi_ladder, py::arg("nmax"), py::arg("x"));

  // schmidt ------------------------------------------------------------------
  py::class_<GaussianPair>(m, "GaussianPair")
      .def(py::init<double, double>(), py::arg("a"), py::arg("b"))
      .def_readwrite("a", &GaussianPair::a)
      .def_readwrite("b", &GaussianPair::b)
      .def("__repr__", [](const GaussianPair& p) {
        return "GaussianPair(a=" + std::to_string(p.a) + ", b=" + std::to_string(p.b) + ")";
      });

  py::class_<SchmidtParams>(m, "SchmidtParams")
      .def(py::init<double, double>(), py::arg("mu"), py::arg("alpha"))
      .def_readwrite("mu", &SchmidtParams::mu)
      .def_readwrite("alpha", &SchmidtParams::alpha);

  py::class_<ReducedGaussianParams>(m, "ReducedGaussianParams")
      .def(py::init<double, double>(), py::arg("at"), py::arg("bt"))
      .def_readwrite("at", &ReducedGaussianParams::at)
      .def_readwrite("bt", &ReducedGaussianParams::bt);

  py::class_<SchmidtDecomposition>(m, "SchmidtDecomposition")
      .def_readonly("lambdas", &SchmidtDecomposition::lambdas)
      .def_readonly("mu", &SchmidtDecomposition::mu)
      .def_readonly("K", &SchmidtDecomposition::K)
      .def("signed_amplitude", &SchmidtDecomposition::signed_amplitude, py::arg("n"));

  py::class_<MehlerValue>(m, "MehlerValue")
      .def_readonly("value", &MehlerValue::value)
      .def_readonly("tail_bound", &MehlerValue::tail_bound);

  m.def("wf_to_schmidt", &wf_to_schmidt, py::arg("pair"));
  m.def("schmidt_to_wf", &schmidt_to_wf, py::arg("params"));
  m.def("rdm_params_from_wf", &rdm_params_from_wf, py::arg("pair"));
  m.def("wf_params_from_rdm", &wf_params_from_rdm, py::arg("reduced"));
  m.def("dg_wavefunction", &dg_wavefunction, py::arg("pair"), py::arg("nu1"), py::arg("nu2"));
  m.def("dg_rdm", &dg_rdm, py::arg("reduced"), py::arg("nu1"), py::arg("nu1p"));
  m.def("schmidt_mode", &schmidt_mode, py::arg("n"), py::arg("alpha"), py::arg("nu"));
  m.def("eigenvalue_ladder", &eigenvalue_ladder, py::arg("params"), py::arg("count"));
  m.def("ladder_truncation", &ladder_truncation, py::arg("mu"), py::arg("tol") = 1e-12);
  m.def("mehler_truncation", &mehler_truncation, py::arg("mu"), py::arg("tol") = 1e-9);
  m.def("mehler_reconstruct", &mehler_reconstruct, py::arg("params"), py::arg("nu1"),
        py::arg("nu2"), py::arg("count"));
  m.def("schmidt_number",
        py::overload_cast<const SchmidtParams&>(&schmidt_number), py::arg("params"));
  m.def("schmidt_number",
        py::overload_cast<const GaussianPair&>(&schmidt_number), py::arg("pair"));

  // sellmeier ------------------------------------------------------------------
  py::class_<SellmeierSet>(m, "SellmeierSet")
      .def_readonly("crystal", &SellmeierSet::crystal)
      .def_readonly("no_coeffs", &SellmeierSet::no_coeffs)
      .def_readonly("ne_coeffs", &SellmeierSet::ne_coeffs)
      .def_readonly("form", &SellmeierSet::form)
      .def_readonly("range_um_lo", &SellmeierSet::range_um_lo)
      .def_readonly("range_um_hi", &SellmeierSet::range_um_hi)
      .def_readonly("source", &SellmeierSet::source);

  py::class_<DispersionConstants>(m, "DispersionConstants")
      .def_readonly("A", &DispersionConstants::A)
      .def_readonly("B", &DispersionConstants::B)
      .def_readonly("theta_pm", &DispersionConstants::theta_pm);

  m.def("liio3_sellmeier", &liio3_sellmeier, py::return_value_policy::reference);
  m.def("load_sellmeier_json", &load_sellmeier_json, py::arg("path"));
  m.def("parse_sellmeier_json", &parse_sellmeier_json, py::arg("text"));
  m.def("n_ordinary", &n_ordinary, py::arg("sellmeier"), py::arg("lambda_um"));
  m.def("n_extraordinary_principal", &n_extraordinary_principal, py::arg("sellmeier"),
        py::arg("lambda_um"));
  m.def("n_extraordinary", &n_extraordinary, py::arg("sellmeier"), py::arg("theta"),
        py::arg("lambda_um"));
  m.def("phase_matching_angle", &phase_matching_angle, py::arg("sellmeier"), py::arg("omega0"));
  m.def("dispersion_constants", &dispersion_constants, py::arg("sellmeier"), py::arg("omega0"));

  // spdc -----------------------------------------------------------------------
  py::class_<CrystalOptics>(m, "CrystalOptics")
      .def_readonly("L", &CrystalOptics::L)
      .def_readonly("A", &CrystalOptics::A)
      .def_readonly("B", &CrystalOptics::B)
      .def_readonly("omega0", &CrystalOptics::omega0)
      .def_readonly("lambda0", &CrystalOptics::lambda0);

  py::class_<PumpPulse>(m, "PumpPulse")
      .def(py::init<double>(), py::arg("tau"))
      .def_readwrite("tau", &PumpPulse::tau);

  py::enum_<Regime>(m, "Regime")
      .value("short_pulse", Regime::short_pulse)
      .value("intermediate", Regime::intermediate)
      .value("long_pulse", Regime::long_pulse);

  py::class_<SpectralWidths>(m, "SpectralWidths")
      .def_readonly("coincidence", &SpectralWidths::coincidence)
      .def_readonly("single", &SpectralWidths::single);

  py::class_<GammaFit>(m, "GammaFit")
      .def_readonly("gamma", &GammaFit::gamma)
      .def_readonly("half_abscissa", &GammaFit::half_abscissa);

  py::class_<RegimeParams>(m, "RegimeParams")
      .def_readonly("pair", &RegimeParams::pair)
      .def_readonly("eta", &RegimeParams::eta)
      .def_readonly("s_exp", &RegimeParams::s_exp)
      .def_readonly("regime", &RegimeParams::regime);

  py::class_<KMinimum>(m, "KMinimum")
      .def_readonly("eta", &KMinimum::eta)
      .def_readonly("tau", &KMinimum::tau)
      .def_readonly("K", &KMinimum::K);

  py::class_<GeneralizedLadder>(m, "GeneralizedLadder")
      .def_readonly("K", &GeneralizedLadder::K)
      .def_readonly("mu", &GeneralizedLadder::mu)
      .def_readonly("lambdas", &GeneralizedLadder::lambdas)
      .def("exponential_approx", &GeneralizedLadder::exponential_approx, py::arg("n"))
      .def("signed_amplitude", &GeneralizedLadder::signed_amplitude, py::arg("n"));

  py::class_<ModeScaling>(m, "ModeScaling")
      .def_readonly("alpha", &ModeScaling::alpha)
      .def_readonly("omega0_alpha", &ModeScaling::omega0_alpha)
      .def_readonly("omega0_alpha_closed", &ModeScaling::omega0_alpha_closed)
      .def_readonly("eta", &ModeScaling::eta)
      .def("evaluate", &ModeScaling::evaluate, py::arg("n"), py::arg("nu"));

  py::class_<LocalizationPoint>(m, "LocalizationPoint")
      .def_readonly("nu2", &LocalizationPoint::nu2)
      .def_readonly("cm_exact", &LocalizationPoint::cm_exact)
      .def_readonly("cm_gauss", &LocalizationPoint::cm_gauss)
      .def_readonly("dashed_exact", &LocalizationPoint::dashed_exact)
      .def_readonly("dashed_gauss_plus", &LocalizationPoint::dashed_gauss_plus)
      .def_readonly("dashed_gauss_minus", &LocalizationPoint::dashed_gauss_minus)
      .def_readonly("strip_half_width", &LocalizationPoint::strip_half_width);

  m.def("make_crystal_optics", &make_crystal_optics, py::arg("L"), py::arg("A"), py::arg("B"),
        py::arg("lambda0"));
  m.def("crystal_from_sellmeier", &crystal_from_sellmeier, py::arg("sellmeier"), py::arg("L"),
        py::arg("lambda0"));
  m.def("regime_name", &regime_name, py::arg("regime"));
  m.def("classify_regime", &classify_regime, py::arg("eta"));
  m.def("control_eta", &control_eta, py::arg("crystal"), py::arg("pulse"));
  m.def("pulse_from_eta", &pulse_from_eta, py::arg("crystal"), py::arg("eta"));
  m.def("exact_wavefunction", &exact_wavefunction, py::arg("crystal"), py::arg("pulse"),
        py::arg("nu1"), py::arg("nu2"));
  m.def("short_pulse_widths", &short_pulse_widths, py::arg("crystal"), py::arg("pulse"));
  m.def("short_pulse_model", &short_pulse_model, py::arg("crystal"), py::arg("pulse"));
  m.def("long_pulse_model", &long_pulse_model, py::arg("crystal"), py::arg("pulse"));
  m.def("short_pulse_rdm_params", &short_pulse_rdm_params, py::arg("crystal"), py::arg("pulse"));
  m.def("short_pulse_rdm", &short_pulse_rdm, py::arg("crystal"), py::arg("pulse"),
        py::arg("nu1"), py::arg("nu1p"));
  m.def("gamma_fwhm_fit", &gamma_fwhm_fit, py::arg("kind"));
  m.def("interpolated_model", &interpolated_model, py::arg("crystal"), py::arg("pulse"),
        py::arg("s_exp") = 2.21);
  m.def("schmidt_number_of_tau", &schmidt_number_of_tau, py::arg("crystal"), py::arg("pulse"),
        py::arg("s_exp") = 2.21);
  m.def("schmidt_number_closed_form", &schmidt_number_closed_form, py::arg("crystal"),
        py::arg("pulse"), py::arg("s_exp") = 2.21);
  m.def("schmidt_number_short", &schmidt_number_short, py::arg("crystal"), py::arg("pulse"));
  m.def("schmidt_number_short_closed", &schmidt_number_short_closed, py::arg("crystal"),
        py::arg("pulse"));
  m.def("schmidt_number_long", &schmidt_number_long, py::arg("crystal"), py::arg("pulse"));
  m.def("r_parameter_long_closed", &r_parameter_long_closed, py::arg("crystal"),
        py::arg("pulse"));
  m.def("schmidt_number_minimum", &schmidt_number_minimum, py::arg("crystal"),
        py::arg("s_exp") = 2.21);
  m.def("generalized_ladder", &generalized_ladder, py::arg("K"), py::arg("count"));
  m.def("generalized_modes", &generalized_modes, py::arg("crystal"), py::arg("pulse"),
        py::arg("s_exp") = 2.21);
  m.def("mode_spectral_width", &mode_spectral_width, py::arg("n"), py::arg("crystal"),
        py::arg("pulse"), py::arg("s_exp") = 2.21);
  m.def("localization_curves", &localization_curves, py::arg("crystal"), py::arg("pulse"),
        py::arg("nu2"));
  m.def("localization_branch_floor", &localization_branch_floor, py::arg("crystal"));

  // numerics ---------------------------------------------------------------------
  py::class_<SpectralGrid>(m, "SpectralGrid")
      .def_readonly("nu", &SpectralGrid::nu)
      .def_readonly("extent", &SpectralGrid::extent)
      .def_readonly("h", &SpectralGrid::h)
      .def("n", &SpectralGrid::n)
      .def("weight", &SpectralGrid::weight, py::arg("i"));

  py::class_<NumericalDecomposition>(m, "NumericalDecomposition")
      .def_readonly("singular_values", &NumericalDecomposition::singular_values)
      .def_readonly("lambdas", &NumericalDecomposition::lambdas)
      .def_readonly("K_num", &NumericalDecomposition::K_num)
      .def_readonly("residual", &NumericalDecomposition::residual);

  m.def("build_grid", &build_grid, py::arg("extent"), py::arg("n_points"));
  m.def("dg_grid", &dg_grid, py::arg("pair"));
  m.def("exact_wf_grid", &exact_wf_grid, py::arg("crystal"), py::arg("pulse"),
        py::arg("s_exp") = 2.21);

  m.def(
      "decompose_dg",
      [](const GaussianPair& p, std::size_t n_keep) {
        const SpectralGrid g = dg_grid(p);
        const KernelMatrix km =
            discretize([p](double x, double y) { return dg_wavefunction(p, x, y); }, g);
        return schmidt_svd(km, n_keep);
      },
      py::arg("pair"), py::arg("n_keep") = 0,
      "Numerical Schmidt decomposition of a double-Gaussian kernel on an "
      "automatically sized grid.");

  m.def(
      "decompose_exact",
      [](const CrystalOptics& c, const PumpPulse& p, std::size_t n_keep, double s_exp) {
        const SpectralGrid g = exact_wf_grid(c, p, s_exp);
        const KernelMatrix km = discretize(
            [&c, &p](double x, double y) { return exact_wavefunction(c, p, x, y); }, g);
        return schmidt_svd(km, n_keep);
      },
      py::arg("crystal"), py::arg("pulse"), py::arg("n_keep") = 0, py::arg("s_exp") = 2.21,
      "Numerical Schmidt decomposition of the exact amplitude on an "
      "automatically sized grid.");

  m.def(
      "numeric_schmidt_number",
      [](const CrystalOptics& c, const PumpPulse& p, double s_exp) {
        const SpectralGrid g = exact_wf_grid(c, p, s_exp);
        const KernelMatrix km = discretize(
            [&c, &p](double x, double y) { return exact_wavefunction(c, p, x, y); }, g);
        return purity_schmidt_number(km);
      },
      py::arg("crystal"), py::arg("pulse"), py::arg("s_exp") = 2.21,
      "Schmidt number of the exact amplitude from the discretized purity.");

  m.def(
      "r_parameter_exact",
      [](const CrystalOptics& c, const PumpPulse& p, double s_exp) {
        const SpectralGrid g = exact_wf_grid(c, p, s_exp);
        return r_parameter(
            [&c, &p](double x, double y) { return exact_wavefunction(c, p, x, y); }, g);
      },
      py::arg("crystal"), py::arg("pulse"), py::arg("s_exp") = 2.21,
      "Single-to-coincidence FWHM ratio of the exact amplitude.");
}
