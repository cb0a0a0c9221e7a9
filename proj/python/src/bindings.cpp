#include <pybind11/iostream.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nlfrac/cli_io.hpp"
#include "nlfrac/errors.hpp"
#include "nlfrac/fractional_time.hpp"
#include "nlfrac/mittag_leffler.hpp"
#include "nlfrac/nonlocal_spatial.hpp"
#include "nlfrac/pde_solver.hpp"
#include "nlfrac/regularity.hpp"

namespace py = pybind11;
using namespace nlfrac;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a one-dimensional array");
  return {a.data(), a.data() + a.size()};
}

Array to_array(std::span<const double> v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

ExteriorRule exterior_rule(const std::optional<std::pair<double, double>>& ext) {
  if (ext) return ConstantExterior{ext->first, ext->second};
  return EdgeExtension{};
}

Extremal extremal(const std::string& name) {
  if (name == "pucci_plus") return Extremal::plus;
  if (name == "pucci_minus") return Extremal::minus;
  throw std::invalid_argument("operator must be pucci_plus or pucci_minus");
}

Array caputo(const Array& values, double t_start, double dt, double alpha) {
  const auto v = to_vector(values);
  if (v.empty()) throw std::invalid_argument("caputo: empty history");
  const History h(TimeGrid(t_start, dt, v.size() - 1), v);
  return to_array(caputo_eval_series(h, FracOrder(alpha)));
}

Array fode(const Array& forcing, double t_start, double dt, double alpha, double C1, const std::string& method) {
  const auto v = to_vector(forcing);
  if (v.empty()) throw std::invalid_argument("fode: empty forcing");
  const History f(TimeGrid(t_start, dt, v.size() - 1), v);
  const FracOrder a(alpha);
  if (method == "explicit") return to_array(solve_fode_explicit(a, C1, f).values());
  if (method == "l1") return to_array(solve_fode_l1(a, C1, f).values());
  throw std::invalid_argument("fode: method must be explicit or l1");
}

Array pucci(const Array& values, double x_min, double x_max, double sigma, double lambda, double Lambda,
            const std::string& op, const std::optional<std::pair<double, double>>& exterior) {
  const auto v = to_vector(values);
  const SpaceGrid g(x_min, x_max, v.size(), exterior_rule(exterior));
  const SpatialField u(g, v);
  const Ellipticity ell(lambda, Lambda, sigma);
  const Extremal e = extremal(op);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = e == Extremal::plus ? pucci_plus(u, i, ell) : pucci_minus(u, i, ell);
  }
  return to_array(out);
}

py::dict solve_field(const Array& initial, double x_min, double x_max, double alpha, double sigma, double lambda,
                     double Lambda, double t_start, double t_end, const std::string& op, double forcing,
                     const std::optional<std::pair<double, double>>& exterior, double c_stab) {
  const auto u0 = to_vector(initial);
  const SpaceGrid s(x_min, x_max, u0.size(), exterior_rule(exterior));
  const Ellipticity ell(lambda, Lambda, sigma);
  const FracOrder a(alpha);
  const SpaceTimeGrid grid{s, stable_time_grid(s, ell, a, t_start, t_end, c_stab), a, sigma};
  const double dx = s.dx();
  auto init = [u0, x_min, dx](double x) {
    const auto i = static_cast<std::size_t>(std::lround((x - x_min) / dx));
    return u0.at(std::min(i, u0.size() - 1));
  };
  const ProblemSpec spec{extremal(op), ell, a, [forcing](double, double) { return forcing; }, init, std::nullopt};
  Field u = [&] {
    py::gil_scoped_release release;
    return solve(spec, grid, SolverOptions{c_stab});
  }();
  Array field({static_cast<py::ssize_t>(u.n_times()), static_cast<py::ssize_t>(u.n_points())});
  std::copy(u.values().begin(), u.values().end(), field.mutable_data());
  std::vector<double> t(u.n_times());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = grid.time.at(k);
  std::vector<double> x(u.n_points());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = s.x(static_cast<std::ptrdiff_t>(i));
  py::dict out;
  out["t"] = to_array(t);
  out["x"] = to_array(x);
  out["u"] = field;
  out["dt"] = grid.time.dt();
  return out;
}

std::string holder_report(const Array& field, double x_min, double x_max, double t_start, double dt, double alpha,
                          double sigma, double x0, double t0, double ratio, std::size_t depth) {
  if (field.ndim() != 2) throw std::invalid_argument("fit_holder: expected a two-dimensional field");
  const auto nt = static_cast<std::size_t>(field.shape(0));
  const auto nx = static_cast<std::size_t>(field.shape(1));
  if (nt < 2) throw std::invalid_argument("fit_holder: need at least two time levels");
  const SpaceTimeGrid g{SpaceGrid(x_min, x_max, nx), TimeGrid(t_start, dt, nt - 1), FracOrder(alpha), sigma};
  const Field u(g, std::vector<double>(field.data(), field.data() + field.size()));
  HolderOptions opts;
  opts.ratio = ratio;
  opts.depth = depth;
  return report_to_json(fit_holder(u, x0, t0, opts));
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "nlfrac");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  py::scoped_ostream_redirect out_redirect(std::cout, py::module_::import("sys").attr("stdout"));
  py::scoped_estream_redirect err_redirect(std::cerr, py::module_::import("sys").attr("stderr"));
  return cli_main(static_cast<int>(argv.size()), argv.data(), std::cout, std::cerr);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fractional-time nonlocal parabolic equations: numerical core";
  m.attr("__version__") = NLFRAC_VERSION;

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<HypothesisError>(m, "HypothesisError", PyExc_ValueError);

  m.def("mittag_leffler", [](double alpha, double t) { return mittag_leffler(FracOrder(alpha), t); },
        py::arg("alpha"), py::arg("t"), "E_alpha(t)");
  m.def("mittag_leffler_deriv", [](double alpha, double t) { return mittag_leffler_deriv(FracOrder(alpha), t); },
        py::arg("alpha"), py::arg("t"), "d/dt E_alpha(t)");
  m.def("caputo", &caputo, py::arg("values"), py::arg("t_start"), py::arg("dt"), py::arg("alpha"),
        "L1 Caputo derivative at every grid point of a sampled history held constant before t_start");
  m.def("fode", &fode, py::arg("forcing"), py::arg("t_start"), py::arg("dt"), py::arg("alpha"), py::arg("C1"),
        py::arg("method") = "explicit", "Solution of D^alpha u + C1 u = f with u(t_start) = 0");
  m.def("pucci", &pucci, py::arg("values"), py::arg("x_min"), py::arg("x_max"), py::arg("sigma"),
        py::arg("lambda_") = 1.0, py::arg("Lambda") = 1.0, py::arg("operator") = "pucci_plus",
        py::arg("exterior") = py::none(), "Extremal nonlocal operator at every node");
  m.def("solve", &solve_field, py::arg("initial"), py::arg("x_min"), py::arg("x_max"), py::arg("alpha"),
        py::arg("sigma"), py::arg("lambda_") = 1.0, py::arg("Lambda") = 1.0, py::arg("t_start") = -1.0,
        py::arg("t_end") = 0.0, py::arg("operator") = "pucci_plus", py::arg("forcing") = 0.0,
        py::arg("exterior") = py::none(), py::arg("c_stab") = 0.9,
        "Explicit solve on the stable time grid; returns dict with t, x, u[k, i], dt");
  m.def("holder_report_json", &holder_report, py::arg("field"), py::arg("x_min"), py::arg("x_max"),
        py::arg("t_start"), py::arg("dt"), py::arg("alpha"), py::arg("sigma"), py::arg("x0"), py::arg("t0"),
        py::arg("ratio") = 0.25, py::arg("depth") = 4, "Oscillation report as a JSON string");
  m.def("run_cli", &run_cli, py::arg("args"), "Runs the nlfrac command line; returns the exit code");
}
