#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "harnack/catalog.hpp"
#include "harnack/cli.hpp"
#include "harnack/compare.hpp"
#include "harnack/condition.hpp"
#include "harnack/designer.hpp"
#include "harnack/kernels.hpp"
#include "harnack/timefn.hpp"

namespace py = pybind11;
using namespace harnack;

namespace {

Side side_of(const std::string& s) {
  if (s == "central") return Side::central;
  if (s == "left") return Side::left;
  if (s == "right") return Side::right;
  throw InputError("side must be 'central', 'left' or 'right'");
}

std::map<std::string, double> extra_of(double alpha, double theta) {
  std::map<std::string, double> extra;
  if (std::isfinite(alpha)) extra["alpha"] = alpha;
  if (std::isfinite(theta)) extra["theta"] = theta;
  return extra;
}

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Gradient-estimate toolkit for positive heat-equation solutions: "
      "estimate catalog, certifying-condition checks, pair synthesis, "
      "model-space verification and dominance comparison.";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<AccuracyError>(m, "AccuracyError", PyExc_ArithmeticError);
  py::register_exception<BlowupError>(m, "BlowupError", PyExc_ArithmeticError);
  py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<SpliceError>(m, "SpliceError", PyExc_ValueError);
  py::register_exception<ProfileError>(m, "ProfileError", PyExc_ValueError);
  py::register_exception<SingularityError>(m, "SingularityError", PyExc_ArithmeticError);

  py::class_<TimeFn>(m, "TimeFn")
      .def(py::init([](std::function<double(double)> eval,
                       std::function<double(double)> deriv, std::string label,
                       double t_lo, double t_hi) {
             if (deriv)
               return TimeFn::analytic(std::move(eval), std::move(deriv),
                                       std::move(label), t_lo, t_hi);
             return TimeFn(std::move(eval), std::move(label), t_lo, t_hi);
           }),
           py::arg("eval"), py::arg("deriv") = nullptr, py::arg("label") = "py",
           py::arg("t_lo") = 0.0,
           py::arg("t_hi") = std::numeric_limits<double>::infinity())
      .def_static("constant", &TimeFn::constant, py::arg("value"),
                  py::arg("label") = "")
      .def_static("from_table", &TimeFn::from_table, py::arg("ts"),
                  py::arg("vals"), py::arg("label") = "table")
      .def("__call__", &TimeFn::operator())
      .def("with_kinks", &TimeFn::with_kinks)
      .def_property_readonly("label", &TimeFn::label)
      .def_property_readonly("t_lo", &TimeFn::t_lo)
      .def_property_readonly("t_hi", &TimeFn::t_hi)
      .def_property_readonly("kinks", &TimeFn::kinks)
      .def_property_readonly("has_analytic_deriv", &TimeFn::has_analytic_deriv);

  m.def(
      "derivative_at",
      [](const TimeFn& f, double t, const std::string& side) {
        return derivative_at(f, t, side_of(side));
      },
      py::arg("f"), py::arg("t"), py::arg("side") = "central");
  m.def(
      "integrate",
      [](const TimeFn& f, double lo, double hi, double tol) {
        return integrate(f, lo, hi, tol);
      },
      py::arg("f"), py::arg("lo"), py::arg("hi"), py::arg("tol") = 1e-10);
  m.def(
      "ode_solve",
      [](std::function<double(double, double)> rhs, double t0, double c0,
         double T, double step) { return ode_solve(rhs, t0, c0, T, step); },
      py::arg("rhs"), py::arg("t0"), py::arg("c0"), py::arg("T"),
      py::arg("step") = 1e-3);
  m.def("log_spaced", &log_spaced);
  m.def("lin_spaced", &lin_spaced);

  py::class_<GeometryParams>(m, "GeometryParams")
      .def(py::init<double, double>(), py::arg("K"), py::arg("n"))
      .def_readwrite("K", &GeometryParams::K)
      .def_readwrite("n", &GeometryParams::n)
      .def("__repr__", [](const GeometryParams& p) {
        return "GeometryParams(K=" + std::to_string(p.K) +
               ", n=" + std::to_string(p.n) + ")";
      });

  py::class_<SolutionState>(m, "SolutionState")
      .def(py::init<double, double, double, double>(), py::arg("g"),
           py::arg("h"), py::arg("log_u") = 0.0, py::arg("t") = 1.0)
      .def_readwrite("g", &SolutionState::g)
      .def_readwrite("h", &SolutionState::h)
      .def_readwrite("log_u", &SolutionState::log_u)
      .def_readwrite("t", &SolutionState::t);

  py::class_<GradientCeiling>(m, "GradientCeiling")
      .def_readonly("g", &GradientCeiling::g)
      .def_readonly("empty", &GradientCeiling::empty);

  py::class_<EstimatePair>(m, "EstimatePair")
      .def_readonly("alpha", &EstimatePair::alpha)
      .def_readonly("c", &EstimatePair::c);

  py::class_<Estimate>(m, "Estimate")
      .def_property_readonly("id", &Estimate::id)
      .def_property_readonly("params", &Estimate::params)
      .def_property_readonly("is_linear", &Estimate::is_linear)
      .def_property_readonly("alpha", &Estimate::alpha)
      .def_property_readonly("c", &Estimate::c)
      .def("residual", &Estimate::residual)
      .def("residual",
           [](const Estimate& e, double g, double h, double t) {
             return e.residual({g, h, 0.0, t});
           },
           py::arg("g"), py::arg("h"), py::arg("t"))
      .def("max_allowed_gradient", &Estimate::max_allowed_gradient,
           py::arg("h"), py::arg("t"))
      .def("h_min", &Estimate::h_min, py::arg("t"));

  m.def(
      "make_estimate",
      [](const std::string& id, double K, double n, double alpha, double theta) {
        return make_estimate(id, {K, n}, extra_of(alpha, theta));
      },
      py::arg("id"), py::arg("K"), py::arg("n"), py::arg("alpha") = kUnset,
      py::arg("theta") = kUnset);
  m.def(
      "linear_pair",
      [](const std::string& id, double K, double n, double alpha, double theta) {
        return linear_pair(id, {K, n}, extra_of(alpha, theta));
      },
      py::arg("id"), py::arg("K"), py::arg("n"), py::arg("alpha") = kUnset,
      py::arg("theta") = kUnset);

  py::class_<CatalogEntry>(m, "CatalogEntry")
      .def_readonly("id", &CatalogEntry::id)
      .def_readonly("requires_params", &CatalogEntry::requires_params)
      .def_readonly("validity", &CatalogEntry::validity)
      .def_readonly("linear", &CatalogEntry::linear)
      .def("__repr__",
           [](const CatalogEntry& e) { return e.id + ": " + e.validity; });
  m.def("list_catalog", &list_catalog);
  m.def("bbg_phi", &bbg_phi, py::arg("K"), py::arg("t"), py::arg("x"));

  py::class_<QuadCoeffs>(m, "QuadCoeffs")
      .def_readonly("A", &QuadCoeffs::A)
      .def_readonly("B", &QuadCoeffs::B)
      .def_readonly("C", &QuadCoeffs::C)
      .def_readonly("t", &QuadCoeffs::t);

  m.def(
      "quad_coeffs",
      [](const TimeFn& a, const TimeFn& c, double t, const GeometryParams& p,
         const std::string& side) {
        return quad_coeffs(a, c, t, p, side_of(side));
      },
      py::arg("alpha"), py::arg("c"), py::arg("t"), py::arg("params"),
      py::arg("side") = "central");
  m.def(
      "case1_check",
      [](const TimeFn& a, const TimeFn& c, double t, const GeometryParams& p,
         const std::string& side) {
        return case1_check(a, c, t, p, side_of(side));
      },
      py::arg("alpha"), py::arg("c"), py::arg("t"), py::arg("params"),
      py::arg("side") = "central");
  m.def(
      "case2_check",
      [](const TimeFn& a, const TimeFn& c, double t, const GeometryParams& p,
         const std::string& side) {
        return case2_check(a, c, t, p, side_of(side));
      },
      py::arg("alpha"), py::arg("c"), py::arg("t"), py::arg("params"),
      py::arg("side") = "central");
  m.def(
      "condition_holds",
      [](const TimeFn& a, const TimeFn& c, double t, const GeometryParams& p,
         const std::string& side) {
        return std::string(to_string(condition_holds(a, c, t, p, side_of(side))));
      },
      py::arg("alpha"), py::arg("c"), py::arg("t"), py::arg("params"),
      py::arg("side") = "central");
  m.def("grid_oracle", &grid_oracle, py::arg("coeffs"), py::arg("x_max") = 0.0,
        py::arg("points") = 2001);

  py::class_<ConditionRow>(m, "ConditionRow")
      .def_readonly("t", &ConditionRow::t)
      .def_readonly("coeffs", &ConditionRow::q)
      .def_property_readonly(
          "verdict",
          [](const ConditionRow& r) { return std::string(to_string(r.verdict)); })
      .def_readonly("margin", &ConditionRow::margin);
  py::class_<ConditionReport>(m, "ConditionReport")
      .def_readonly("rows", &ConditionReport::rows)
      .def_readonly("worst_margin", &ConditionReport::worst_margin)
      .def_readonly("all_hold", &ConditionReport::all_hold)
      .def("to_csv", &ConditionReport::to_csv);
  m.def("verify_over_interval", &verify_over_interval, py::arg("alpha"),
        py::arg("c"), py::arg("params"), py::arg("t_lo"), py::arg("t_hi"),
        py::arg("points"));

  py::class_<Profile>(m, "Profile")
      .def_static("quadratic", &Profile::quadratic)
      .def_static("sinh_squared", &Profile::sinh_squared, py::arg("K"))
      .def_static("from_timefn", &Profile::from_timefn, py::arg("a"))
      .def_static("from_csv", &Profile::from_csv, py::arg("path"))
      .def_readonly("a", &Profile::a);
  m.def("check_profile", &check_profile);
  m.def("pair_from_profile", &pair_from_profile, py::arg("profile"),
        py::arg("params"), py::arg("t_grid"));
  m.def("envelope_ode", &envelope_ode, py::arg("alpha"), py::arg("params"),
        py::arg("t0"), py::arg("c0"), py::arg("T"), py::arg("step") = 1e-3);

  py::class_<SpliceReport>(m, "SpliceReport")
      .def_readonly("t0", &SpliceReport::t0)
      .def_readonly("alpha_jump", &SpliceReport::alpha_jump)
      .def_readonly("c_jump", &SpliceReport::c_jump)
      .def_readonly("c_dleft", &SpliceReport::c_dleft)
      .def_readonly("c_dright", &SpliceReport::c_dright)
      .def_readonly("c1_gap", &SpliceReport::c1_gap)
      .def_readonly("is_c1", &SpliceReport::is_c1);
  m.def("splice", &splice, py::arg("first"), py::arg("second"), py::arg("t0"));
  m.def(
      "closed_form_special",
      [](const std::string& name, double K, double n) {
        return closed_form_special(name, {K, n});
      },
      py::arg("name"), py::arg("K"), py::arg("n"));

  py::class_<Kernel>(m, "Kernel")
      .def(py::init([](const std::string& id, double n, int k_max) {
             return Kernel::make(id, n, k_max);
           }),
           py::arg("id"), py::arg("n") = 1.0, py::arg("k_max") = 0)
      .def_property_readonly("name", &Kernel::name)
      .def_property_readonly("params", &Kernel::params)
      .def("evaluate", &Kernel::evaluate, py::arg("r"), py::arg("t"))
      .def("log_u", &Kernel::log_u, py::arg("r"), py::arg("t"));

  py::class_<SlackRow>(m, "SlackRow")
      .def_readonly("kernel", &SlackRow::kernel)
      .def_readonly("estimate", &SlackRow::estimate)
      .def_readonly("r", &SlackRow::r)
      .def_readonly("t", &SlackRow::t)
      .def_readonly("g", &SlackRow::g)
      .def_readonly("h", &SlackRow::h)
      .def_readonly("slack", &SlackRow::slack);
  py::class_<SlackReport>(m, "SlackReport")
      .def_readonly("min_slack", &SlackReport::min_slack)
      .def_readonly("argmin_r", &SlackReport::argmin_r)
      .def_readonly("argmin_t", &SlackReport::argmin_t)
      .def_readonly("rows", &SlackReport::rows)
      .def("to_csv", &SlackReport::to_csv);
  m.def(
      "verify_estimate",
      [](const Kernel& k, const Estimate& e, std::vector<double> r,
         std::vector<double> t) { return verify_estimate(k, e, r, t); },
      py::arg("kernel"), py::arg("estimate"), py::arg("r_grid"),
      py::arg("t_grid"));
  m.def("harnack_check", &harnack_check, py::arg("kernel"), py::arg("theta"),
        py::arg("s"), py::arg("t"), py::arg("r_x"), py::arg("r_y"),
        py::arg("d"));

  py::class_<FDRun>(m, "FDRun")
      .def_readonly("N", &FDRun::N)
      .def_readonly("dx", &FDRun::dx)
      .def_readonly("dt", &FDRun::dt)
      .def_readonly("t0", &FDRun::t0)
      .def_readonly("times", &FDRun::times)
      .def_readonly("snapshots", &FDRun::snapshots)
      .def_readonly("mass_drift", &FDRun::mass_drift)
      .def_readonly("min_u", &FDRun::min_u)
      .def("snapshot_csv", &FDRun::snapshot_csv);
  m.def("fd_solve", &fd_solve, py::arg("initial"), py::arg("N"), py::arg("T"),
        py::arg("t0") = 0.0, py::arg("floor_eps") = 0.0);
  m.def("fd_check", &fd_check, py::arg("run"), py::arg("estimate"),
        py::arg("t_min"));
  m.def("fd_initial_constant", &fd_initial_constant, py::arg("N"),
        py::arg("value") = 1.0);
  m.def("fd_initial_mode", &fd_initial_mode, py::arg("N"),
        py::arg("amplitude") = 0.5);
  m.def("fd_initial_wrapped_gaussian", &fd_initial_wrapped_gaussian,
        py::arg("N"), py::arg("t0"));
  m.def("fd_initial_random", &fd_initial_random, py::arg("N"), py::arg("seed"));

  py::class_<DominanceRow>(m, "DominanceRow")
      .def_readonly("t", &DominanceRow::t)
      .def_readonly("h", &DominanceRow::h)
      .def_readonly("ceiling_e1", &DominanceRow::ceiling_e1)
      .def_readonly("ceiling_e2", &DominanceRow::ceiling_e2)
      .def_readonly("diff", &DominanceRow::diff);
  py::class_<DominanceReport>(m, "DominanceReport")
      .def_readonly("id1", &DominanceReport::id1)
      .def_readonly("id2", &DominanceReport::id2)
      .def_readonly("max_diff", &DominanceReport::max_diff)
      .def_readonly("dominates", &DominanceReport::dominates)
      .def_readonly("rows", &DominanceReport::rows)
      .def("to_csv", &DominanceReport::to_csv);
  m.def(
      "dominance",
      [](const Estimate& e1, const Estimate& e2, std::vector<double> t_grid,
         int h_points) { return dominance(e1, e2, t_grid, h_points); },
      py::arg("e1"), py::arg("e2"), py::arg("t_grid"), py::arg("h_points") = 100);

  py::class_<SlackProfileRow>(m, "SlackProfileRow")
      .def_readonly("t", &SlackProfileRow::t)
      .def_readonly("min_slack", &SlackProfileRow::min_slack)
      .def_readonly("argmin_r", &SlackProfileRow::argmin_r);
  m.def(
      "slack_profile",
      [](const Estimate& e, const Kernel& k, std::vector<double> t,
         std::vector<double> r) { return slack_profile(e, k, t, r); },
      py::arg("estimate"), py::arg("kernel"), py::arg("t_grid"),
      py::arg("r_grid"));

  m.def("run_cli", &run_cli, py::arg("args"),
        "run the command-line front end; returns its exit code");
}
