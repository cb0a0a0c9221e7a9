#include "nlfrac/mittag_leffler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "nlfrac/errors.hpp"
#include "nlfrac/quadrature.hpp"

namespace nlfrac {

namespace detail {

double ml_series(double alpha, double beta, double t, int max_terms, bool* converged,
                 double* max_term) {
  if (converged) *converged = true;
  if (t == 0.0) {
    const double v = 1.0 / std::tgamma(beta);
    if (max_term) *max_term = std::abs(v);
    return v;
  }
  const long double la = alpha;
  const long double lb = beta;
  const long double log_abs_t = std::log(std::abs(static_cast<long double>(t)));
  const bool negative = t < 0.0;
  // The terms decrease for good once alpha*j + beta passes |t|^{1/alpha}.
  const long double peak = std::pow(std::abs(static_cast<long double>(t)), 1.0L / la);

  long double sum = 0.0L;
  long double comp = 0.0L;
  long double biggest = 0.0L;
  for (int j = 0; j < max_terms; ++j) {
    const long double arg = la * j + lb;
    long double mag = std::exp(j * log_abs_t - std::lgamma(arg));
    // 1/Gamma vanishes at the poles, which only occur for beta - alpha*j <= 0.
    if (arg <= 0.0L && arg == std::floor(arg)) mag = 0.0L;
    const long double term = (negative && (j % 2 == 1)) ? -mag : mag;
    biggest = std::max(biggest, mag);
    const long double s = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - s) + term;
    } else {
      comp += (term - s) + sum;
    }
    sum = s;
    if (arg > peak + 1.0L && mag <= 1e-21L * std::abs(sum + comp)) {
      if (max_term) *max_term = static_cast<double>(biggest);
      return static_cast<double>(sum + comp);
    }
  }
  if (converged) *converged = false;
  if (max_term) *max_term = static_cast<double>(biggest);
  return static_cast<double>(sum + comp);
}

}  // namespace detail

namespace {

double rgamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) return 0.0;
  return 1.0 / std::tgamma(x);
}

/// E_{alpha,beta}(t) for large positive t from the exponential asymptotics.
double ml_asymptotic(double alpha, double beta, double t) {
  const double root = std::pow(t, 1.0 / alpha);
  if (root < 25.0) {
    throw NumericalError("mittag_leffler: argument outside the range of both series and asymptotics");
  }
  const double log_main = root + (1.0 - beta) / alpha * std::log(t) - std::log(alpha);
  if (log_main > std::log(std::numeric_limits<double>::max())) {
    return std::numeric_limits<double>::infinity();
  }
  double algebraic = 0.0;
  double tk = 1.0;
  for (int k = 1; k <= 40; ++k) {
    tk /= t;
    const double term = tk * rgamma(beta - alpha * k);
    algebraic += term;
    if (std::abs(term) < 1e-18 * std::exp(log_main)) break;
  }
  return std::exp(log_main) - algebraic;
}

/// E_{alpha,beta}(-x), x > 0, beta in {1, alpha}, from the spectral representation
///   E_alpha(-x)         = int_0^inf exp(-r T) sin(alpha pi) r^{alpha-1} / (pi D(r)) dr,
///   E_{alpha,alpha}(-x) = T^{1-alpha} int_0^inf exp(-r T) sin(alpha pi) r^alpha / (pi D(r)) dr,
/// with T = x^{1/alpha} and D(r) = r^{2 alpha} + 2 r^alpha cos(alpha pi) + 1,
/// integrated in log r.
double ml_negative_integral(double alpha, bool beta_is_alpha, double x) {
  const double T = std::pow(x, 1.0 / alpha);
  const double s = std::sin(alpha * std::numbers::pi);
  const double c = std::cos(alpha * std::numbers::pi);
  const double power = beta_is_alpha ? alpha + 1.0 : alpha;
  auto integrand = [=](double y) {
    const double r = std::exp(y);
    const double ra = std::exp(alpha * y);
    const double d = (ra + c) * (ra + c) + s * s;
    return std::exp(-r * T) * (s / std::numbers::pi) * std::exp(power * y) / d;
  };
  const double y_hi = std::log(80.0 / T);
  const double y_lo = std::min(-90.0 / alpha, y_hi - 10.0);
  std::vector<double> cuts{y_lo, y_hi};
  auto add_cut = [&](double y) {
    if (y > y_lo && y < y_hi) cuts.push_back(y);
  };
  add_cut(-std::log(T));
  if (c < 0.0) add_cut(std::log(-c) / alpha);
  std::sort(cuts.begin(), cuts.end());

  CompensatedSum total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    QuadResult piece = adaptive_gk15(integrand, cuts[i], cuts[i + 1], 1e-300, 1e-14, 4000);
    if (!piece.converged || !std::isfinite(piece.value)) {
      throw NumericalError("mittag_leffler: integral representation did not converge");
    }
    total.add(piece.value);
  }
  double v = total.value();
  if (beta_is_alpha) v *= std::pow(T, 1.0 - alpha);
  return v;
}

void check_argument(double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("mittag_leffler: argument must be finite");
}

double ml_two_param(double alpha, bool beta_is_alpha, double t, const MittagLefflerOptions& opts) {
  const double beta = beta_is_alpha ? alpha : 1.0;
  if (t < -opts.tau_switch) return ml_negative_integral(alpha, beta_is_alpha, -t);
  bool converged = true;
  double biggest = 0.0;
  const double v = detail::ml_series(alpha, beta, t, opts.max_terms, &converged, &biggest);
  if (t >= 0.0) {
    if (converged) return v;
    return ml_asymptotic(alpha, beta, t);
  }
  if (converged && biggest <= opts.max_cancellation * std::abs(v)) return v;
  return ml_negative_integral(alpha, beta_is_alpha, -t);
}

}  // namespace

double mittag_leffler(FracOrder a, double t, const MittagLefflerOptions& opts) {
  check_argument(t);
  if (a.is_classical()) return std::exp(t);
  return ml_two_param(a.value(), false, t, opts);
}

double mittag_leffler_deriv(FracOrder a, double t, const MittagLefflerOptions& opts) {
  check_argument(t);
  if (a.is_classical()) return std::exp(t);
  return ml_two_param(a.value(), true, t, opts) / a.value();
}

}  // namespace nlfrac
