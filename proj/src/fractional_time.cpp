#include "nlfrac/fractional_time.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nlfrac/errors.hpp"
#include "nlfrac/mittag_leffler.hpp"
#include "nlfrac/quadrature.hpp"

namespace nlfrac {

FracOrder::FracOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("FracOrder: alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
}

TimeGrid::TimeGrid(double t_start, double dt, std::size_t n_steps)
    : t_start_(t_start), dt_(dt), n_steps_(n_steps) {
  if (!std::isfinite(t_start)) throw std::invalid_argument("TimeGrid: t_start must be finite");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("TimeGrid: dt must be positive");
  if (n_steps < 1) throw std::invalid_argument("TimeGrid: n_steps must be at least 1");
  if (!(at(1) > t_start)) throw std::invalid_argument("TimeGrid: dt too small for t_start");
}

TimeGrid TimeGrid::spanning(double t_start, double t_end, std::size_t n_steps) {
  if (n_steps < 1) throw std::invalid_argument("TimeGrid: n_steps must be at least 1");
  if (!(t_end > t_start)) throw std::invalid_argument("TimeGrid: t_end must exceed t_start");
  return TimeGrid(t_start, (t_end - t_start) / static_cast<double>(n_steps), n_steps);
}

History::History(TimeGrid grid, std::vector<double> values, PastRule past)
    : grid_(grid), values_(std::move(values)), past_(std::move(past)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("History: expected " + std::to_string(grid_.size()) +
                                " values, got " + std::to_string(values_.size()));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw std::invalid_argument("History: non-finite value at index " + std::to_string(k));
    }
  }
  if (const auto* tail = std::get_if<AnalyticTail>(&past_)) {
    if (!tail->value) throw std::invalid_argument("History: AnalyticTail needs a callable");
    if (!(tail->growth >= 0.0) || !std::isfinite(tail->growth)) {
      throw std::invalid_argument("History: AnalyticTail growth must be finite and >= 0");
    }
  }
}

History History::sample(const TimeGrid& grid, const std::function<double(double)>& f,
                        PastRule past) {
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(grid.at(k));
  return History(grid, std::move(v), std::move(past));
}

double History::value_at(double t) const {
  if (t < grid_.t_start()) {
    if (const auto* tail = std::get_if<AnalyticTail>(&past_)) return tail->value(t);
    return values_.front();
  }
  const double s = (t - grid_.t_start()) / grid_.dt();
  if (s >= static_cast<double>(grid_.n_steps())) return values_.back();
  const auto j = static_cast<std::size_t>(std::floor(s));
  const double w = s - static_cast<double>(j);
  if (w == 0.0) return values_[j];
  return (1.0 - w) * values_[j] + w * values_[j + 1];
}

std::vector<double> l1_weights(FracOrder a, std::size_t count) {
  std::vector<double> b(count);
  const double p = 1.0 - a.value();
  for (std::size_t m = 0; m < count; ++m) {
    if (m == 0) {
      b[m] = 1.0;
      continue;
    }
    const double md = static_cast<double>(m);
    b[m] = std::pow(md, p) * std::expm1(p * std::log1p(1.0 / md));
  }
  return b;
}

double past_tail_correction(const AnalyticTail& tail, double f0, double t_start, double t_eval,
                            FracOrder a) {
  const double alpha = a.value();
  if (a.is_classical()) throw std::invalid_argument("past_tail_correction: requires alpha < 1");
  if (!(tail.growth < alpha)) {
    throw std::invalid_argument("past_tail_correction: tail growth " + std::to_string(tail.growth) +
                                " must be below alpha " + std::to_string(alpha));
  }
  const double delta = t_eval - t_start;
  if (delta < 0.0) throw std::invalid_argument("past_tail_correction: t_eval precedes t_start");
  bool finite = true;
  // Close to t_start the difference f0 - tail(t_start - r) is lost to rounding,
  // so below r_small it is replaced by the line through r = 0 and r = r_small.
  const double r_small = 1e-8 * std::max(1.0, std::abs(t_start));
  const double phi0 = tail.value(t_start);
  double d0 = f0 - phi0;
  if (std::abs(d0) <= 1e-14 * (std::abs(f0) + std::abs(phi0))) d0 = 0.0;
  const double d_small = f0 - tail.value(t_start - r_small);
  auto g = [&](double r) {
    double d = 0.0;
    if (r < r_small) {
      d = d0 + (d_small - d0) * (r / r_small);
    } else {
      const double phi = tail.value(t_start - r);
      if (!std::isfinite(phi)) finite = false;
      d = f0 - phi;
    }
    return d * std::pow(delta + r, -1.0 - alpha);
  };
  const QuadResult q = integrate_half_line(g, delta > 0.0 ? delta : 1.0);
  if (!finite || !q.converged || !std::isfinite(q.value)) {
    throw NumericalError("past_tail_correction: tail integral did not converge (check the declared growth)");
  }
  return alpha / std::tgamma(1.0 - alpha) * q.value;
}

namespace {

double tail_term(const History& h, FracOrder a, std::size_t k) {
  const auto* tail = std::get_if<AnalyticTail>(&h.past_rule());
  if (tail == nullptr) return 0.0;
  return past_tail_correction(*tail, h[0], h.grid().t_start(), h.grid().at(k), a);
}

double caputo_core(const History& h, FracOrder a, std::size_t k, std::span<const double> b) {
  const auto& grid = h.grid();
  const auto v = h.values();
  if (a.is_classical()) {
    if (k > 0) return (v[k] - v[k - 1]) / grid.dt();
    if (const auto* tail = std::get_if<AnalyticTail>(&h.past_rule())) {
      return (v[0] - tail->value(grid.t_start() - grid.dt())) / grid.dt();
    }
    return 0.0;
  }
  const double alpha = a.value();
  CompensatedSum s;
  for (std::size_t j = 1; j <= k; ++j) s.add(b[k - j] * (v[j] - v[j - 1]));
  const double c = std::pow(grid.dt(), -alpha) / std::tgamma(2.0 - alpha);
  return c * s.value() + tail_term(h, a, k);
}

void check_index(const History& h, std::size_t k) {
  if (k > h.grid().n_steps()) {
    throw std::out_of_range("caputo_eval: index " + std::to_string(k) + " beyond n_steps " +
                            std::to_string(h.grid().n_steps()));
  }
}

}  // namespace

double caputo_eval(const History& h, FracOrder a, std::size_t k) {
  check_index(h, k);
  const auto b = l1_weights(a, k + 1);
  return caputo_core(h, a, k, b);
}

std::vector<double> caputo_eval_series(const History& h, FracOrder a) {
  const auto b = l1_weights(a, h.grid().size());
  std::vector<double> out(h.grid().size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = caputo_core(h, a, k, b);
  return out;
}

TimeKernel::TimeKernel(FracOrder a, std::function<double(double, double)> kernel, double bound)
    : order_(a), kernel_(std::move(kernel)), bound_(bound) {}

TimeKernel TimeKernel::caputo_power(FracOrder a) {
  if (a.is_classical()) throw std::invalid_argument("TimeKernel: the power kernel requires alpha < 1");
  const double alpha = a.value();
  const double c = alpha / std::tgamma(1.0 - alpha);
  return TimeKernel(a, nullptr, std::max(c, 1.0 / c));
}

TimeKernel TimeKernel::general(FracOrder a, std::function<double(double, double)> kernel,
                               double bound, double probe_t0, double probe_t1) {
  if (!kernel) throw std::invalid_argument("TimeKernel: empty kernel callable");
  if (!(bound >= 1.0) || !std::isfinite(bound)) {
    throw std::invalid_argument("TimeKernel: bound must be finite and >= 1");
  }
  if (!(probe_t1 > probe_t0)) throw std::invalid_argument("TimeKernel: empty probe window");
  const double alpha = a.value();
  const double span = probe_t1 - probe_t0;
  for (int i = 0; i < 32; ++i) {
    const double t = probe_t0 + span * (i + 1) / 32.0;
    for (int j = 0; j < 32; ++j) {
      const double lag = span * std::pow(10.0, -3.0 + 3.0 * j / 31.0);
      const double s = t - lag;
      const double k = kernel(t, s);
      const double ref = std::pow(lag, -1.0 - alpha);
      if (!std::isfinite(k) || k < ref / bound || k > ref * bound) {
        throw std::invalid_argument("TimeKernel: bounds violated at t = " + std::to_string(t) +
                                    ", s = " + std::to_string(s));
      }
    }
  }
  return TimeKernel(a, std::move(kernel), bound);
}

double TimeKernel::operator()(double t, double s) const {
  if (kernel_) return kernel_(t, s);
  const double alpha = order_.value();
  return alpha / std::tgamma(1.0 - alpha) * std::pow(t - s, -1.0 - alpha);
}

double kernel_derivative(const History& h, const TimeKernel& kernel, std::size_t k) {
  check_index(h, k);
  if (!std::holds_alternative<ConstantExtension>(h.past_rule())) {
    throw std::invalid_argument("kernel_derivative: only ConstantExtension histories are supported");
  }
  if (kernel.order().is_classical()) {
    throw std::invalid_argument("kernel_derivative: requires alpha < 1");
  }
  if (k == 0) return 0.0;
  static const GaussLegendre gl(16);
  const double alpha = kernel.order().value();
  const auto& grid = h.grid();
  const double dt = grid.dt();
  const double tk = grid.at(k);
  const auto v = h.values();
  const double fk = v[k];

  CompensatedSum total;
  for (std::size_t j = 1; j < k; ++j) {
    const double t0 = grid.at(j - 1);
    const double slope = (v[j] - v[j - 1]) / dt;
    total.add(gl.integrate(
        [&](double s) { return (fk - (v[j - 1] + slope * (s - t0))) * kernel(tk, s); }, t0,
        grid.at(j)));
  }
  // Last cell: f_k - f(s) = slope * (t_k - s); substitute lag = dt w^{1/(1-alpha)}.
  const double slope = (v[k] - v[k - 1]) / dt;
  const double q = 1.0 / (1.0 - alpha);
  const double last = gl.integrate(
      [&](double w) {
        const double lag = dt * std::pow(w, q);
        if (lag == 0.0) return 0.0;
        return std::pow(lag, 1.0 + alpha) * kernel(tk, tk - lag);
      },
      0.0, 1.0);
  total.add(slope * std::pow(dt, 1.0 - alpha) * q * last);

  if (fk != v[0]) {
    const double t_start = grid.t_start();
    const QuadResult tail =
        integrate_half_line([&](double r) { return kernel(tk, t_start - r); }, tk - t_start);
    if (!tail.converged) throw NumericalError("kernel_derivative: kernel tail did not converge");
    total.add((fk - v[0]) * tail.value);
  }
  return total.value();
}

namespace {

void check_c1(double C1) {
  if (!std::isfinite(C1) || C1 < 0.0) {
    throw std::invalid_argument("FODE solvers require a finite C1 >= 0");
  }
}

/// tau^{alpha-1} E_{alpha,alpha}(-C1 tau^alpha).
double fode_kernel(FracOrder a, double C1, double tau) {
  const double alpha = a.value();
  return std::pow(tau, alpha - 1.0) * alpha * mittag_leffler_deriv(a, -C1 * std::pow(tau, alpha));
}

}  // namespace

History solve_fode_explicit(FracOrder a, double C1, const History& f) {
  check_c1(C1);
  static const GaussLegendre gl(16);
  const auto& grid = f.grid();
  const std::size_t n = grid.n_steps();
  const double h = grid.dt();
  const double alpha = a.value();

  std::vector<double> P(n);
  std::vector<double> Q(n);
  {
    // First cell: the kernel is singular at tau = 0, so integrate exactly.
    const double z = C1 * std::pow(h, alpha);
    double I0 = 0.0;
    double J0 = 0.0;
    if (z <= 1.0) {
      CompensatedSum si;
      CompensatedSum sj;
      double cpow = 1.0;
      for (int m = 0; m < 200; ++m) {
        const double p = alpha * (m + 1);
        const double hp = std::pow(h, p);
        const double ti = cpow * hp / std::tgamma(p + 1.0);
        const double tj = cpow * hp / (std::tgamma(p) * (p + 1.0));
        si.add(ti);
        sj.add(tj);
        if (std::abs(ti) < 1e-18 * std::abs(si.value()) && std::abs(tj) < 1e-18 * std::abs(sj.value())) {
          break;
        }
        cpow *= -C1;
      }
      I0 = si.value();
      J0 = sj.value();
    } else {
      I0 = (1.0 - mittag_leffler(a, -z)) / C1;
      const double e = alpha / (alpha + 1.0);
      const QuadResult r = adaptive_gk15(
          [&](double w) { return alpha * mittag_leffler_deriv(a, -z * std::pow(w, e)); }, 0.0, 1.0,
          1e-300, 1e-13);
      if (!r.converged) throw NumericalError("solve_fode_explicit: first-cell quadrature failed");
      J0 = std::pow(h, alpha) / (alpha + 1.0) * r.value;
    }
    P[0] = I0 - J0;
    Q[0] = J0;
  }
  for (std::size_t m = 1; m < n; ++m) {
    const double lo = static_cast<double>(m) * h;
    const double hi = lo + h;
    double pm = 0.0;
    double qm = 0.0;
    const double half = 0.5 * h;
    const double mid = 0.5 * (lo + hi);
    for (std::size_t i = 0; i < gl.size(); ++i) {
      const double tau = mid + half * gl.nodes()[i];
      const double w = gl.weights()[i] * half * fode_kernel(a, C1, tau);
      pm += w * (hi - tau) / h;
      qm += w * (tau - lo) / h;
    }
    P[m] = pm;
    Q[m] = qm;
  }

  const auto fv = f.values();
  std::vector<double> u(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    CompensatedSum s;
    for (std::size_t m = 0; m < k; ++m) {
      s.add(P[m] * fv[k - m]);
      s.add(Q[m] * fv[k - m - 1]);
    }
    u[k] = s.value();
  }
  return History(grid, std::move(u));
}

History solve_fode_l1(FracOrder a, double C1, const History& f, const FodeL1Options& opts) {
  check_c1(C1);
  if (opts.substeps < 1) throw std::invalid_argument("solve_fode_l1: substeps must be >= 1");
  const auto& grid = f.grid();
  const std::size_t n = grid.n_steps();
  const double span = grid.t_end() - grid.t_start();
  const std::size_t nf = n * opts.substeps;
  const double hf = span / static_cast<double>(nf);
  const double alpha = a.value();

  // Stepping mesh: uniform refinement plus graded points clustering at t_start.
  std::vector<double> mesh(nf + 1);
  for (std::size_t i = 0; i <= nf; ++i) mesh[i] = span * static_cast<double>(i) / static_cast<double>(nf);
  if (opts.graded && !a.is_classical()) {
    const double r = (2.0 - alpha) / alpha;
    for (std::size_t i = 1; i < n; ++i) {
      const double tau = span * std::pow(static_cast<double>(i) / static_cast<double>(n), r);
      const double nearest = std::round(tau / hf) * hf;
      if (std::abs(tau - nearest) > 0.05 * hf) mesh.push_back(tau);
    }
    std::sort(mesh.begin(), mesh.end());
    mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());
  }
  const std::size_t M = mesh.size() - 1;

  std::vector<double> fm(M + 1);
  for (std::size_t i = 0; i <= M; ++i) fm[i] = f.value_at(grid.t_start() + mesh[i]);

  std::vector<double> u(M + 1, 0.0);
  if (a.is_classical()) {
    for (std::size_t k = 1; k <= M; ++k) {
      const double hk = mesh[k] - mesh[k - 1];
      u[k] = (u[k - 1] + hk * fm[k]) / (1.0 + C1 * hk);
    }
  } else {
    const double g = 1.0 / std::tgamma(2.0 - alpha);
    const double p = 1.0 - alpha;
    auto weight = [&](std::size_t k, std::size_t j) {
      const double hj = mesh[j] - mesh[j - 1];
      const double B = mesh[k] - mesh[j];
      const double diff = B > 0.0 ? std::pow(B, p) * std::expm1(p * std::log1p(hj / B)) : std::pow(hj, p);
      return g * diff / hj;
    };
    for (std::size_t k = 1; k <= M; ++k) {
      CompensatedSum hist;
      for (std::size_t j = 1; j < k; ++j) hist.add(weight(k, j) * (u[j] - u[j - 1]));
      const double ak = weight(k, k);
      u[k] = (fm[k] + ak * u[k - 1] - hist.value()) / (ak + C1);
    }
  }

  std::vector<double> out(n + 1, 0.0);
  std::size_t cursor = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double target = span * static_cast<double>(k) / static_cast<double>(n);
    while (cursor < M && mesh[cursor] < target - 1e-9 * hf) ++cursor;
    out[k] = u[cursor];
  }
  return History(grid, std::move(out));
}

double smooth_cutoff(double t) {
  const double x = (t - 0.25) / 0.25;
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

namespace {

double derivative_estimate(std::span<const double> v, double dt, std::size_t k) {
  const std::size_t n = v.size() - 1;
  if (n == 1) return (v[1] - v[0]) / dt;
  if (k == 0) return (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dt);
  if (k == n) return (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * dt);
  return (v[k + 1] - v[k - 1]) / (2.0 * dt);
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> caputo_product_split(const History& eta,
                                                                         const History& g,
                                                                         FracOrder a, SplitRule rule) {
  if (!(eta.grid() == g.grid())) throw std::invalid_argument("caputo_product_split: grid mismatch");
  if (!std::holds_alternative<ConstantExtension>(eta.past_rule())) {
    throw std::invalid_argument("caputo_product_split: the cutoff must use ConstantExtension");
  }
  const auto& grid = g.grid();
  const std::size_t n = grid.n_steps();
  const double dt = grid.dt();
  const auto ev = eta.values();
  const auto gv = g.values();

  std::vector<double> prod(n + 1);
  for (std::size_t k = 0; k <= n; ++k) prod[k] = ev[k] * gv[k];
  PastRule prod_past = ConstantExtension{};
  const auto* g_tail = std::get_if<AnalyticTail>(&g.past_rule());
  if (g_tail != nullptr) {
    const double e0 = ev[0];
    auto fn = g_tail->value;
    prod_past = AnalyticTail{[e0, fn](double t) { return e0 * fn(t); }, g_tail->growth};
  }
  const History eg(grid, std::move(prod), prod_past);

  std::vector<double> lhs = caputo_eval_series(eg, a);
  const std::vector<double> dg = caputo_eval_series(g, a);
  std::vector<double> rhs(n + 1);

  if (rule == SplitRule::same_weights) {
    // gtilde(t_k) is the Caputo derivative at t_k of psi(s) = g(s) (eta(s) - eta(t_k)).
    std::vector<double> psi(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      const double ek = ev[k];
      for (std::size_t j = 0; j <= n; ++j) psi[j] = gv[j] * (ev[j] - ek);
      PastRule past = ConstantExtension{};
      if (g_tail != nullptr) {
        const double c = ev[0] - ek;
        auto fn = g_tail->value;
        past = AnalyticTail{[c, fn](double t) { return c * fn(t); }, g_tail->growth};
      }
      rhs[k] = ek * dg[k] + caputo_eval(History(grid, psi, std::move(past)), a, k);
    }
    return {std::move(lhs), std::move(rhs)};
  }

  if (a.is_classical()) {
    for (std::size_t k = 0; k <= n; ++k) {
      const double gt = k == 0 ? 0.0 : gv[k] * derivative_estimate(ev, dt, k);
      rhs[k] = ev[k] * dg[k] + gt;
    }
    return {std::move(lhs), std::move(rhs)};
  }

  const double alpha = a.value();
  const double p = 1.0 - alpha;
  // Product-integration weights of (t_k - s)^{-alpha} against the two hats of
  // the cell at lag index m (unit spacing): near node, far node.
  std::vector<double> w_near(n);
  std::vector<double> w_far(n);
  const auto b = l1_weights(a, n);
  for (std::size_t m = 0; m < n; ++m) {
    const double md = static_cast<double>(m);
    const double i0 = b[m] / p;
    const double i1 = (std::pow(md + 1.0, 2.0 - alpha) - std::pow(md, 2.0 - alpha)) / (2.0 - alpha);
    w_far[m] = i1 - md * i0;
    w_near[m] = (md + 1.0) * i0 - i1;
  }
  const double scale = std::pow(dt, p);
  const double pref = alpha / std::tgamma(1.0 - alpha);

  std::vector<double> pk(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    if (k == 0) {
      rhs[0] = ev[0] * dg[0];
      continue;
    }
    const double tk = grid.at(k);
    for (std::size_t j = 0; j < k; ++j) pk[j] = gv[j] * (ev[k] - ev[j]) / (tk - grid.at(j));
    pk[k] = gv[k] * derivative_estimate(ev, dt, k);
    CompensatedSum s;
    for (std::size_t j = 1; j <= k; ++j) {
      s.add(w_near[k - j] * pk[j]);
      s.add(w_far[k - j] * pk[j - 1]);
    }
    double gt = s.value() * scale;
    const double jump = ev[k] - ev[0];
    if (jump != 0.0) {
      const double delta = tk - grid.t_start();
      if (g_tail == nullptr) {
        gt += gv[0] * jump * std::pow(delta, -alpha) / alpha;
      } else {
        const QuadResult q = integrate_half_line(
            [&](double r) { return g_tail->value(grid.t_start() - r) * std::pow(delta + r, -1.0 - alpha); },
            delta);
        if (!q.converged) throw NumericalError("caputo_product_split: tail integral did not converge");
        gt += jump * q.value;
      }
    }
    rhs[k] = ev[k] * dg[k] + pref * gt;
  }
  return {std::move(lhs), std::move(rhs)};
}

}  // namespace nlfrac
