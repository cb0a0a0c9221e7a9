#include "nlfrac/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "nlfrac/errors.hpp"

namespace nlfrac {

namespace {

struct NodeRange {
  std::size_t i_lo = 1;
  std::size_t i_hi = 0;  // inclusive; empty when i_lo > i_hi
  std::size_t k_lo = 1;
  std::size_t k_hi = 0;
  bool partial = false;
};

double time_extent(const Field& u, double r) {
  return std::pow(r, 2.0 * u.grid().sigma / u.grid().alpha.value());
}

NodeRange locate(const Field& u, double x0, double t0, double r, double tau) {
  const auto& sg = u.grid().space;
  const auto& tg = u.grid().time;
  const double xtol = 1e-9 * sg.dx();
  const double ttol = 1e-9 * tg.dt();
  NodeRange out;
  const double s_lo = std::ceil((x0 - r - xtol - sg.x_min()) / sg.dx());
  const double s_hi = std::floor((x0 + r + xtol - sg.x_min()) / sg.dx());
  const double lo = std::max(s_lo, 0.0);
  const double hi = std::min(s_hi, static_cast<double>(sg.n_points() - 1));
  if (lo <= hi) {
    out.i_lo = static_cast<std::size_t>(lo);
    out.i_hi = static_cast<std::size_t>(hi);
  }
  // Half-open time window (t0 - tau, t0].
  const double q_lo = std::floor((t0 - tau + ttol - tg.t_start()) / tg.dt()) + 1.0;
  const double q_hi = std::floor((t0 + ttol - tg.t_start()) / tg.dt());
  const double klo = std::max(q_lo, 0.0);
  const double khi = std::min(q_hi, static_cast<double>(tg.n_steps()));
  if (klo <= khi) {
    out.k_lo = static_cast<std::size_t>(klo);
    out.k_hi = static_cast<std::size_t>(khi);
  }
  out.partial = x0 - r < sg.x_min() - xtol || x0 + r > sg.x_max() + xtol ||
                t0 - tau < tg.t_start() - ttol || t0 > tg.t_end() + ttol;
  return out;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

CylinderStats measure_cylinder(const Field& u, const Cylinder& c) {
  if (!(c.r > 0.0) || !std::isfinite(c.r)) throw std::invalid_argument("Cylinder: radius must be positive");
  const double tau = time_extent(u, c.r);
  const NodeRange nr = locate(u, c.x0, c.t0, c.r, tau);
  if (nr.i_lo > nr.i_hi || nr.k_lo > nr.k_hi) {
    throw std::invalid_argument("oscillation: cylinder does not intersect the solved region");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t k = nr.k_lo; k <= nr.k_hi; ++k) {
    const auto row = u.row(k);
    for (std::size_t i = nr.i_lo; i <= nr.i_hi; ++i) {
      lo = std::min(lo, row[i]);
      hi = std::max(hi, row[i]);
    }
  }
  return {hi - lo, nr.i_hi - nr.i_lo + 1, nr.k_hi - nr.k_lo + 1, nr.partial};
}

double oscillation(const Field& u, const Cylinder& c) { return measure_cylinder(u, c).osc; }

OscillationReport fit_holder(const Field& u, double x0, double t0, const HolderOptions& opts) {
  if (!(opts.ratio > 0.0 && opts.ratio < 1.0)) throw std::invalid_argument("fit_holder: ratio must lie in (0, 1)");
  if (opts.depth < 2) throw std::invalid_argument("fit_holder: depth must be at least 2");
  const auto& sg = u.grid().space;
  if (x0 < sg.x_min() || x0 > sg.x_max()) throw std::invalid_argument("fit_holder: center outside the grid");

  OscillationReport rep;
  rep.alpha = u.grid().alpha.value();
  rep.sigma = u.grid().sigma;
  const auto center = static_cast<std::size_t>(std::lround((x0 - sg.x_min()) / sg.dx()));

  double sup = 0.0;
  for (double v : u.values()) sup = std::max(sup, std::abs(v));
  const double zero_tol = 1e-13 * (1.0 + sup);

  std::vector<double> lx;
  std::vector<double> ly;
  std::vector<double> tx;
  std::vector<double> ty;
  bool time_zero = false;
  for (std::size_t k = 0; k <= opts.depth; ++k) {
    const double r = std::pow(opts.ratio, static_cast<double>(k));
    const double tau = time_extent(u, r);
    rep.scales.push_back(r);
    const CylinderStats st = measure_cylinder(u, Cylinder{x0, t0, r});
    rep.osc.push_back(st.osc);
    rep.partial = rep.partial || st.partial;
    const bool usable = st.n_space >= opts.min_space && st.n_time >= opts.min_time &&
                        st.n_space * st.n_time >= opts.min_nodes;
    rep.used.push_back(usable);

    const NodeRange nr = locate(u, x0, t0, r, tau);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t q = nr.k_lo; q <= nr.k_hi; ++q) {
      lo = std::min(lo, u.at(q, center));
      hi = std::max(hi, u.at(q, center));
    }
    const double tosc = hi - lo;
    rep.time_osc.push_back(tosc);

    if (usable) {
      if (st.osc <= zero_tol) rep.zero_oscillation = true;
      lx.push_back(std::log(r));
      ly.push_back(std::log(std::max(st.osc, std::numeric_limits<double>::min())));
    }
    if (st.n_time >= opts.min_time) {
      if (tosc <= zero_tol) time_zero = true;
      tx.push_back(std::log(tau));
      ty.push_back(std::log(std::max(tosc, std::numeric_limits<double>::min())));
    }
  }
  if (lx.size() < opts.min_scales) {
    throw std::invalid_argument("fit_holder: insufficient resolution, only " + std::to_string(lx.size()) +
                                " usable scales (need " + std::to_string(opts.min_scales) + ")");
  }
  for (std::size_t k = 0; k + 1 < rep.osc.size(); ++k) {
    rep.theta_measured.push_back(rep.osc[k] > 0.0 ? 1.0 - rep.osc[k + 1] / rep.osc[k] : 0.0);
    if (rep.osc[k + 1] > rep.osc[k]) rep.monotone = false;
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  rep.kappa_fit = rep.zero_oscillation ? nan : slope(lx, ly);
  rep.kappa_time_fit = (time_zero || tx.size() < 2) ? nan : slope(tx, ty);
  return rep;
}

namespace {

using json = nlohmann::ordered_json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

double read_number(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::vector<double> read_numbers(const json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(read_number(x));
  return v;
}

}  // namespace

std::string report_to_json(const OscillationReport& r) {
  json j;
  j["scales"] = numbers(r.scales);
  j["osc"] = numbers(r.osc);
  j["kappa_fit"] = number(r.kappa_fit);
  j["kappa_time_fit"] = number(r.kappa_time_fit);
  j["alpha"] = number(r.alpha);
  j["sigma"] = number(r.sigma);
  j["theta_measured"] = numbers(r.theta_measured);
  j["time_osc"] = numbers(r.time_osc);
  j["used"] = r.used;
  j["flags"] = {{"zero_oscillation", r.zero_oscillation}, {"partial", r.partial}, {"monotone", r.monotone}};
  return j.dump(2);
}

OscillationReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  OscillationReport r;
  r.scales = read_numbers(j.at("scales"));
  r.osc = read_numbers(j.at("osc"));
  r.kappa_fit = read_number(j.at("kappa_fit"));
  r.kappa_time_fit = read_number(j.at("kappa_time_fit"));
  r.alpha = read_number(j.at("alpha"));
  r.sigma = read_number(j.at("sigma"));
  r.theta_measured = read_numbers(j.at("theta_measured"));
  r.time_osc = read_numbers(j.at("time_osc"));
  r.used = j.at("used").get<std::vector<bool>>();
  const auto& f = j.at("flags");
  r.zero_oscillation = f.at("zero_oscillation").get<bool>();
  r.partial = f.at("partial").get<bool>();
  r.monotone = f.at("monotone").get<bool>();
  return r;
}

std::string report_to_csv(const OscillationReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "k,scale,osc,theta\r\n";
  for (std::size_t k = 0; k < r.scales.size(); ++k) {
    os << k << ',' << r.scales[k] << ',' << r.osc[k] << ',';
    if (k < r.theta_measured.size()) os << r.theta_measured[k];
    os << "\r\n";
  }
  return os.str();
}

TimeGrid stable_time_grid(const SpaceGrid& space, const Ellipticity& ell, FracOrder alpha,
                          double t_start, double t_end, double c_stab) {
  if (!(t_end > t_start)) throw std::invalid_argument("stable_time_grid: empty time window");
  const double dt_max = max_stable_dt(space, ell, alpha, c_stab);
  const auto n = static_cast<std::size_t>(std::ceil((t_end - t_start) / dt_max * (1.0 + 1e-12)));
  return TimeGrid::spanning(t_start, t_end, std::max<std::size_t>(n, 1));
}

SweepResult alpha_sweep(const ProblemSpec& spec_template, const std::vector<double>& alphas,
                        const SpaceTimeGrid& grid, const SweepOptions& opts) {
  if (alphas.empty()) throw std::invalid_argument("alpha_sweep: no alphas given");
  std::vector<FracOrder> orders;
  for (double a : alphas) orders.emplace_back(a);
  SweepResult out;
  for (const FracOrder a : orders) {
    try {
      ProblemSpec spec = spec_template;
      spec.alpha = a;
      const TimeGrid tg = stable_time_grid(grid.space, spec.ell, a, grid.time.t_start(), grid.time.t_end(),
                                           opts.solver.c_stab);
      const SpaceTimeGrid g{grid.space, tg, a, spec.ell.sigma()};
      const Field u = solve(spec, g, opts.solver);
      out.reports.push_back(fit_holder(u, opts.x0, tg.t_end(), opts.holder));
      out.alphas.push_back(a.value());
    } catch (const std::exception& e) {
      out.error = "alpha = " + std::to_string(a.value()) + ": " + e.what();
      break;
    }
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& r : out.reports) {
    if (std::isnan(r.kappa_fit)) continue;
    lo = std::min(lo, r.kappa_fit);
    hi = std::max(hi, r.kappa_fit);
  }
  if (lo <= hi) out.summary = {lo, hi, hi / lo};
  return out;
}

ProbeResult diminish_oscillation_probe(const ProblemSpec& spec, const SpaceTimeGrid& grid,
                                       const ProbeOptions& opts) {
  const auto& sg = grid.space;
  const auto& tg = grid.time;
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)); };
  if (!near(sg.x_min(), -1.0) || !near(sg.x_max(), 1.0) || !near(tg.t_start(), -1.0) || !near(tg.t_end(), 0.0)) {
    throw std::invalid_argument("diminish_oscillation_probe: grid must cover B_1 x [-1, 0]");
  }
  const double nu = opts.nu;
  std::vector<std::string> problems;
  auto bound = [nu](double s) { return 2.0 * std::pow(std::abs(4.0 * s), nu) - 1.0; };

  std::vector<double> u0(sg.n_points());
  for (std::size_t i = 0; i < u0.size(); ++i) {
    const double x = sg.x(static_cast<std::ptrdiff_t>(i));
    u0[i] = spec.initial(x);
    if (!(std::abs(u0[i]) <= 1.0 + 1e-12)) {
      problems.push_back("|u| > 1 at x = " + std::to_string(x) + " on the initial slice");
      break;
    }
  }
  for (int q = 0; q < 32; ++q) {
    const double s = std::pow(10.0, q / 31.0);
    for (double x : {-s - 1e-12, s + 1e-12}) {
      double v = 0.0;
      if (const auto* c = std::get_if<ConstantExterior>(&sg.exterior())) {
        v = x < 0.0 ? c->left : c->right;
      } else if (const auto* a = std::get_if<AnalyticExterior>(&sg.exterior())) {
        v = a->value(x);
      } else {
        v = x < 0.0 ? u0.front() : u0.back();
      }
      if (!(std::abs(v) <= bound(x) + 1e-12)) {
        problems.push_back("exterior growth exceeded at x = " + std::to_string(x));
        q = 32;
        break;
      }
    }
  }
  if (spec.past) {
    bool bad = false;
    for (std::size_t i = 0; i < u0.size() && !bad; ++i) {
      const double x = sg.x(static_cast<std::ptrdiff_t>(i));
      for (int q = 1; q < 32 && !bad; ++q) {
        const double t = -std::pow(100.0, q / 31.0);
        if (!(std::abs(spec.past->value(x, t)) <= bound(t) + 1e-12)) {
          problems.push_back("past growth exceeded at x = " + std::to_string(x) + ", t = " + std::to_string(t));
          bad = true;
        }
      }
    }
  }
  bool forcing_ok = true;
  for (std::size_t k = 1; k <= tg.n_steps() && forcing_ok; ++k) {
    for (std::size_t i = 0; i < sg.n_points(); ++i) {
      const double x = sg.x(static_cast<std::ptrdiff_t>(i));
      if (!(std::abs(spec.forcing(x, tg.at(k))) <= 0.5 * opts.epsilon0 * (1.0 + 1e-12))) {
        problems.push_back("|f| > epsilon0/2 at x = " + std::to_string(x) + ", t = " + std::to_string(tg.at(k)));
        forcing_ok = false;
        break;
      }
    }
  }
  if (!problems.empty()) {
    std::string msg = "diminish_oscillation_probe: hypotheses violated:";
    for (const auto& p : problems) msg += " [" + p + "]";
    throw HypothesisError(msg);
  }

  const Field u = solve(spec, grid, opts.solver);
  ProbeResult res;
  res.osc_quarter = oscillation(u, Cylinder{0.0, tg.t_end(), 0.25});
  res.theta = 1.0 - res.osc_quarter;
  res.passed = res.theta > opts.noise_floor;
  for (double v : u.values()) res.sup_abs = std::max(res.sup_abs, std::abs(v));
  return res;
}

}  // namespace nlfrac
