#pragma once

#include "nlfrac/fractional_time.hpp"

namespace nlfrac {

struct MittagLefflerOptions {
  /// Beyond this distance on the negative axis the integral representation is used.
  double tau_switch = 5.0;
  /// Series terms allowed before declaring the series unusable.
  int max_terms = 400;
  /// Largest acceptable ratio between the biggest series term and the result
  /// on the negative axis; above it the integral representation takes over.
  double max_cancellation = 1e5;
};

/// E_alpha(t) = sum_j t^j / Gamma(alpha j + 1).
double mittag_leffler(FracOrder a, double t, const MittagLefflerOptions& opts = {});

/// E_alpha'(t) = sum_{j>=1} j t^{j-1} / Gamma(alpha j + 1) = E_{alpha,alpha}(t) / alpha.
double mittag_leffler_deriv(FracOrder a, double t, const MittagLefflerOptions& opts = {});

namespace detail {

/// Plain long-double series for E_{alpha,beta}(t) with no restriction on alpha.
/// Sets *converged to false when max_terms is exhausted.
double ml_series(double alpha, double beta, double t, int max_terms, bool* converged = nullptr,
                 double* max_term = nullptr);

}  // namespace detail

}  // namespace nlfrac
