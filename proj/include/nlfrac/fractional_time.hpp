#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace nlfrac {

/// Order of the Caputo derivative, 0 < alpha <= 1. alpha = 1 is the classical
/// first derivative and is handled by dedicated code paths everywhere.
class FracOrder {
 public:
  explicit FracOrder(double alpha);

  double value() const noexcept { return alpha_; }
  bool is_classical() const noexcept { return alpha_ == 1.0; }
  bool operator==(const FracOrder&) const = default;

 private:
  double alpha_;
};

/// Uniform time lattice t_k = t_start + k * dt, k = 0..n_steps.
class TimeGrid {
 public:
  TimeGrid(double t_start, double dt, std::size_t n_steps);

  /// Grid covering [t_start, t_end] with n_steps equal steps.
  static TimeGrid spanning(double t_start, double t_end, std::size_t n_steps);

  double t_start() const noexcept { return t_start_; }
  double dt() const noexcept { return dt_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  std::size_t size() const noexcept { return n_steps_ + 1; }
  double at(std::size_t k) const noexcept { return t_start_ + static_cast<double>(k) * dt_; }
  double t_end() const noexcept { return at(n_steps_); }
  bool operator==(const TimeGrid&) const = default;

 private:
  double t_start_;
  double dt_;
  std::size_t n_steps_;
};

/// Past values equal values[0] for every t < t_start.
struct ConstantExtension {};

/// Past values given by a callable, with |value(t)| growing at most like |t|^growth.
struct AnalyticTail {
  std::function<double(double)> value;
  double growth = 0.0;
};

using PastRule = std::variant<ConstantExtension, AnalyticTail>;

/// A sampled function of time together with its rule for t < t_start.
class History {
 public:
  History(TimeGrid grid, std::vector<double> values, PastRule past = ConstantExtension{});

  /// Samples f at every grid point.
  static History sample(const TimeGrid& grid, const std::function<double(double)>& f,
                        PastRule past = ConstantExtension{});

  const TimeGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t k) const { return values_.at(k); }
  const PastRule& past_rule() const noexcept { return past_; }

  /// Value at an arbitrary time: past rule below t_start, linear interpolation
  /// inside the grid, last value beyond t_end.
  double value_at(double t) const;

 private:
  TimeGrid grid_;
  std::vector<double> values_;
  PastRule past_;
};

/// L1 increment weights b_m = (m+1)^{1-alpha} - m^{1-alpha}, m = 0..count-1.
std::vector<double> l1_weights(FracOrder a, std::size_t count);

/// Contribution of the past to the Caputo derivative at t_eval when values
/// below t_start follow `tail` and the grid starts from f0:
///   alpha/Gamma(1-alpha) * int_{-inf}^{t_start} (f0 - tail(s)) / (t_eval - s)^{1+alpha} ds.
/// Throws std::invalid_argument when tail.growth >= alpha and NumericalError when
/// the quadrature does not settle.
double past_tail_correction(const AnalyticTail& tail, double f0, double t_start, double t_eval,
                            FracOrder a);

/// L1 discretization of the Caputo derivative at grid index k, including the
/// exact contribution of the past rule. k = 0 is accepted and returns the
/// past contribution alone.
double caputo_eval(const History& h, FracOrder a, std::size_t k);

/// caputo_eval for every k, bit-identical to the per-point calls.
std::vector<double> caputo_eval_series(const History& h, FracOrder a);

/// Memory kernel K(t, s) of a nonlocal time derivative.
class TimeKernel {
 public:
  /// alpha/Gamma(1-alpha) * (t-s)^{-1-alpha}.
  static TimeKernel caputo_power(FracOrder a);

  /// A user kernel that must satisfy
  ///   bound^{-1} (t-s)^{-1-alpha} <= K(t, s) <= bound (t-s)^{-1-alpha}.
  /// The bounds are checked on a 32 x 32 lattice of (t, s) pairs with t in
  /// [probe_t0, probe_t1]; passing the probe is necessary, not sufficient.
  static TimeKernel general(FracOrder a, std::function<double(double, double)> kernel,
                            double bound, double probe_t0, double probe_t1);

  double operator()(double t, double s) const;
  FracOrder order() const noexcept { return order_; }
  double bound() const noexcept { return bound_; }
  bool is_power() const noexcept { return !kernel_; }

 private:
  TimeKernel(FracOrder a, std::function<double(double, double)> kernel, double bound);

  FracOrder order_;
  std::function<double(double, double)> kernel_;
  double bound_;
};

/// int_{-inf}^{t_k} (h(t_k) - h(s)) K(t_k, s) ds for the piecewise-linear
/// interpolant of h with constant past extension, integrated numerically cell by cell.
double kernel_derivative(const History& h, const TimeKernel& kernel, std::size_t k);

/// Explicit solution u(t) = int_a^t W(t-s) f(s) ds of D^alpha u + C1 u = f,
/// u(a) = 0, with W(tau) = tau^{alpha-1} E_{alpha,alpha}(-C1 tau^alpha). f is
/// taken piecewise linear; the weights are integrated per cell.
History solve_fode_explicit(FracOrder a, double C1, const History& f);

struct FodeL1Options {
  /// Uniform refinement of the output grid used for stepping.
  std::size_t substeps = 2;
  /// Add the points t_start + T (i/n)^{(2-alpha)/alpha} to the stepping mesh.
  bool graded = true;
};

/// Implicit L1 stepping for D^alpha u + C1 u = f, u(a) = 0. The stepping mesh
/// refines the output grid near t_start; values are reported on the output grid.
History solve_fode_l1(FracOrder a, double C1, const History& f, const FodeL1Options& opts = {});

/// Smooth cutoff: 0 for t <= 1/4, 1 for t >= 1/2, C-infinity in between.
double smooth_cutoff(double t);

/// How the commutator term gtilde of caputo_product_split is discretized.
///   same_weights         L1 weights applied to g(s) (eta(s) - eta(t_k)), so lhs and
///                        rhs agree up to rounding.
///   product_integration  independent product integration of
///                        g(s) (eta(t)-eta(s))/(t-s) against (t-s)^{-alpha}; the
///                        residual then measures the L1 truncation error of eta * g.
enum class SplitRule { same_weights, product_integration };

/// lhs[k] = caputo_eval(eta * g, k); rhs[k] = eta_k * caputo_eval(g, k) + gtilde_k.
std::pair<std::vector<double>, std::vector<double>> caputo_product_split(
    const History& eta, const History& g, FracOrder a, SplitRule rule = SplitRule::same_weights);

}  // namespace nlfrac
