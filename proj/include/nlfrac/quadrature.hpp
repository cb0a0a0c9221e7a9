#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace nlfrac {

/// Neumaier-compensated accumulator. Results depend on the order of add()
/// calls, so callers that need reproducibility must fix that order.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Gauss-Legendre rule on [-1, 1].
class GaussLegendre {
 public:
  explicit GaussLegendre(std::size_t n);

  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// Integrates f over [a, b].
  double integrate(const std::function<double(double)>& f, double a, double b) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on a finite interval.
QuadResult adaptive_gk15(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, double rel_tol, std::size_t max_intervals = 2000);

struct HalfLineOptions {
  double rel_tol = 1e-12;
  std::size_t min_panels = 12;
  std::size_t quiet_panels = 3;
  std::size_t max_panels = 4000;
};

/// Integrates g over (0, infinity) through r = exp(x), marching unit panels in x
/// away from log(center) in both directions. Each side stops once `quiet_panels`
/// consecutive panels contribute less than rel_tol times the running total.
/// Returns converged = false when a side exhausts max_panels.
QuadResult integrate_half_line(const std::function<double(double)>& g, double center,
                               const HalfLineOptions& opts = {});

}  // namespace nlfrac
