#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nlfrac/errors.hpp"
#include "nlfrac/fractional_time.hpp"
#include "nlfrac/mittag_leffler.hpp"

using namespace nlfrac;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST(TimeGrid, SpanningHitsEndpoints) {
  const TimeGrid g = TimeGrid::spanning(-1.0, 0.0, 8);
  EXPECT_EQ(g.size(), 9u);
  EXPECT_DOUBLE_EQ(g.dt(), 0.125);
  EXPECT_DOUBLE_EQ(g.t_end(), 0.0);
  EXPECT_THROW(TimeGrid(0.0, 0.0, 4), std::invalid_argument);
  EXPECT_THROW(TimeGrid::spanning(1.0, 0.0, 4), std::invalid_argument);
}

TEST(History, ValidatesValues) {
  const TimeGrid g = TimeGrid::spanning(0.0, 1.0, 2);
  EXPECT_THROW(History(g, {0.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(History(g, {0.0, std::nan(""), 1.0}), std::invalid_argument);
  EXPECT_THROW(History(g, {0.0, 0.5, 1.0}, AnalyticTail{}), std::invalid_argument);
  const History h(g, {0.0, 0.5, 2.0});
  EXPECT_DOUBLE_EQ(h.value_at(-3.0), 0.0);
  EXPECT_DOUBLE_EQ(h.value_at(0.75), 1.25);
  EXPECT_DOUBLE_EQ(h.value_at(5.0), 2.0);
}

TEST(L1Weights, MatchDefinition) {
  const auto b = l1_weights(FracOrder(0.3), 50);
  for (std::size_t m = 0; m < b.size(); ++m) {
    const double md = static_cast<double>(m);
    EXPECT_NEAR(b[m], std::pow(md + 1.0, 0.7) - std::pow(md, 0.7), 1e-14);
  }
}

TEST(CaputoEval, ConstantHistoryGivesZero) {
  const History h = History::sample(TimeGrid::spanning(0.0, 1.0, 40), [](double) { return 3.5; });
  for (double a : {0.2, 0.5, 0.9, 1.0}) {
    const auto d = caputo_eval_series(h, FracOrder(a));
    for (double v : d) EXPECT_EQ(v, 0.0);
  }
}

TEST(CaputoEval, PowerRuleConvergesAtInteriorPoint) {
  const double a = 0.5;
  double prev = INFINITY;
  for (std::size_t n : {32u, 64u, 128u, 256u}) {
    const History h = History::sample(TimeGrid::spanning(0.0, 1.0, n), [a](double t) { return std::pow(t, a); });
    const double err = std::abs(caputo_eval(h, FracOrder(a), n / 2) - std::tgamma(1.5));
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 2e-3);
}

TEST(CaputoEval, LinearHistoryIsExact) {
  const double a = 0.5;
  const TimeGrid g = TimeGrid::spanning(0.0, 1.0, 64);
  const History h = History::sample(g, [](double t) { return t; });
  const auto d = caputo_eval_series(h, FracOrder(a));
  for (std::size_t k = 1; k < g.size(); ++k) {
    EXPECT_NEAR(d[k], std::pow(g.at(k), 1.0 - a) / std::tgamma(2.0 - a), 1e-12);
  }
}

TEST(CaputoEval, NearClassicalLimit) {
  const TimeGrid g = TimeGrid::spanning(0.0, 1.0, 100);
  const History h = History::sample(g, [](double t) { return t; });
  EXPECT_NEAR(caputo_eval(h, FracOrder(0.999), 50), 1.0, 0.02);
  EXPECT_DOUBLE_EQ(caputo_eval(h, FracOrder(1.0), 50), 1.0);
}

TEST(CaputoEval, SeriesMatchesPointwiseBitForBit) {
  const TimeGrid g = TimeGrid::spanning(0.0, 1.0, 64);
  const History h(g, random_values(65, 3));
  for (double a : {0.3, 0.75, 1.0}) {
    const auto s = caputo_eval_series(h, FracOrder(a));
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(s[k], caputo_eval(h, FracOrder(a), k));
  }
}

TEST(CaputoEval, Linearity) {
  const TimeGrid g = TimeGrid::spanning(0.0, 2.0, 80);
  const auto v1 = random_values(81, 5);
  const auto v2 = random_values(81, 6);
  std::vector<double> mix(81);
  for (std::size_t k = 0; k < mix.size(); ++k) mix[k] = 2.0 * v1[k] - 0.5 * v2[k];
  const FracOrder a(0.6);
  const auto d1 = caputo_eval_series(History(g, v1), a);
  const auto d2 = caputo_eval_series(History(g, v2), a);
  const auto dm = caputo_eval_series(History(g, mix), a);
  for (std::size_t k = 0; k < mix.size(); ++k) {
    EXPECT_NEAR(dm[k], 2.0 * d1[k] - 0.5 * d2[k], 1e-11 * (1.0 + std::abs(dm[k])));
  }
}

TEST(CaputoEval, SignAtRunningMinimum) {
  const TimeGrid g = TimeGrid::spanning(0.0, 1.0, 30);
  auto v = random_values(31, 11);
  double lo = INFINITY;
  for (std::size_t k = 0; k < 30; ++k) lo = std::min(lo, v[k]);
  v[30] = lo - 0.1;
  EXPECT_LT(caputo_eval(History(g, v), FracOrder(0.4), 30), 0.0);
}

TEST(CaputoEval, IndexOutOfRange) {
  const History h = History::sample(TimeGrid::spanning(0.0, 1.0, 4), [](double t) { return t; });
  EXPECT_THROW(caputo_eval(h, FracOrder(0.5), 5), std::out_of_range);
}

TEST(CaputoEval, PastGrowthBoundAtStartTime) {
  // h = max(|t|^nu - 1, 0) on [-1, 0], continued by |t|^nu - 1 below -1.
  const double nu = 0.3;
  const double a = 0.5;
  const TimeGrid g = TimeGrid::spanning(-1.0, 0.0, 64);
  const History h = History::sample(
      g, [nu](double t) { return std::max(std::pow(std::abs(t), nu) - 1.0, 0.0); },
      AnalyticTail{[nu](double t) { return std::pow(std::abs(t), nu) - 1.0; }, nu});
  const double v = caputo_eval(h, FracOrder(a), 0);
  const double c = nu * std::tgamma(a - nu) / std::tgamma(1.0 - nu);
  EXPECT_LE(v, 0.0);
  EXPECT_GE(v, -c);
}

TEST(PastTail, ClosedFormForPowerGrowth) {
  // tail(s) = |s|^nu - 1 from t_start = -1 evaluated at t = -1: -nu Gamma(alpha - nu) / Gamma(1 - nu).
  for (double a : {0.4, 0.6, 0.9}) {
    for (double nu : {0.1, 0.3}) {
      if (nu >= a) continue;
      const AnalyticTail tail{[nu](double s) { return std::pow(std::abs(s), nu) - 1.0; }, nu};
      const double v = past_tail_correction(tail, 0.0, -1.0, -1.0, FracOrder(a));
      const double ref = -nu * std::tgamma(a - nu) / std::tgamma(1.0 - nu);
      EXPECT_NEAR(v / ref, 1.0, 1e-7) << a << " " << nu;
    }
  }
}

TEST(PastTail, RejectsGrowthAtOrAboveAlpha) {
  const AnalyticTail tail{[](double s) { return std::abs(s); }, 0.6};
  EXPECT_THROW(past_tail_correction(tail, 0.0, -1.0, -0.5, FracOrder(0.5)), std::invalid_argument);
}

TEST(TimeKernel, PowerKernelMatchesL1) {
  const TimeGrid g = TimeGrid::spanning(0.0, 1.0, 32);
  const History h(g, random_values(33, 21));
  const FracOrder a(0.45);
  const TimeKernel kern = TimeKernel::caputo_power(a);
  for (std::size_t k : {1u, 7u, 32u}) {
    const double ref = caputo_eval(h, a, k);
    EXPECT_NEAR(kernel_derivative(h, kern, k), ref, 1e-8 * (1.0 + std::abs(ref)));
  }
}

TEST(TimeKernel, GeneralKernelBoundsAreProbed) {
  const FracOrder a(0.5);
  auto good = [](double t, double s) { return (1.5 + 0.5 * std::sin(t + s)) * std::pow(t - s, -1.5); };
  EXPECT_NO_THROW(TimeKernel::general(a, good, 2.0, -1.0, 0.0));
  auto bad = [](double t, double s) { return 5.0 * std::pow(t - s, -1.5); };
  EXPECT_THROW(TimeKernel::general(a, bad, 2.0, -1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(TimeKernel::caputo_power(FracOrder(1.0)), std::invalid_argument);
}

TEST(TimeKernel, GeneralKernelDerivativeOfRunningMinimumIsNegative) {
  const FracOrder a(0.5);
  const TimeKernel kern = TimeKernel::general(
      a, [](double t, double s) { return (1.5 + 0.5 * std::cos(3.0 * s)) * std::pow(t - s, -1.5); }, 2.0, 0.0,
      1.0);
  const TimeGrid g = TimeGrid::spanning(0.0, 1.0, 20);
  const History h = History::sample(g, [](double t) { return 1.0 - t; });
  EXPECT_LT(kernel_derivative(h, kern, 20), 0.0);
}

TEST(FodeExplicit, ZeroForcing) {
  const History f = History::sample(TimeGrid::spanning(0.0, 1.0, 16), [](double) { return 0.0; });
  const History ue = solve_fode_explicit(FracOrder(0.5), 1.0, f);
  const History ul = solve_fode_l1(FracOrder(0.5), 1.0, f);
  for (double v : ue.values()) EXPECT_EQ(v, 0.0);
  for (double v : ul.values()) EXPECT_EQ(v, 0.0);
}

TEST(FodeExplicit, NoDecayIsPowerRule) {
  const double a = 0.5;
  const TimeGrid g = TimeGrid::spanning(0.0, 1.0, 64);
  const History f = History::sample(g, [](double) { return 1.0; });
  const History u = solve_fode_explicit(FracOrder(a), 0.0, f);
  EXPECT_EQ(u[0], 0.0);
  for (std::size_t k = 1; k < g.size(); ++k) {
    EXPECT_NEAR(u[k], std::pow(g.at(k), a) / std::tgamma(1.0 + a), 1e-12);
  }
}

TEST(FodeExplicit, ClassicalLimit) {
  const TimeGrid g = TimeGrid::spanning(0.0, 2.0, 50);
  const History f = History::sample(g, [](double) { return 1.0; });
  const History u = solve_fode_explicit(FracOrder(1.0), 1.0, f);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(u[k], 1.0 - std::exp(-g.at(k)), 1e-12);
}

TEST(FodeExplicit, ConstantForcingClosedForm) {
  // f = 1: u(t) = (1 - E_alpha(-C1 t^alpha)) / C1.
  const double a = 0.7;
  const double c1 = 2.0;
  const TimeGrid g = TimeGrid::spanning(0.0, 1.5, 60);
  const History f = History::sample(g, [](double) { return 1.0; });
  const History u = solve_fode_explicit(FracOrder(a), c1, f);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double ref = (1.0 - mittag_leffler(FracOrder(a), -c1 * std::pow(g.at(k), a))) / c1;
    EXPECT_NEAR(u[k], ref, 1e-10);
  }
}

TEST(FodeExplicit, RejectsNegativeDecay) {
  const History f = History::sample(TimeGrid::spanning(0.0, 1.0, 4), [](double) { return 1.0; });
  EXPECT_THROW(solve_fode_explicit(FracOrder(0.5), -1.0, f), std::invalid_argument);
  EXPECT_THROW(solve_fode_l1(FracOrder(0.5), -1.0, f), std::invalid_argument);
}

TEST(FodeL1, AgreesWithExplicit) {
  const TimeGrid g = TimeGrid::spanning(0.0, 1.0, 256);
  const History f = History::sample(g, [](double) { return 1.0; });
  const History ue = solve_fode_explicit(FracOrder(0.5), 1.0, f);
  const History ul = solve_fode_l1(FracOrder(0.5), 1.0, f);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(ue[k], ul[k], 1e-3);
}

TEST(FodeL1, NearClassicalLimit) {
  const TimeGrid g = TimeGrid::spanning(0.0, 1.0, 200);
  const History f = History::sample(g, [](double) { return 1.0; });
  const History u = solve_fode_l1(FracOrder(0.999), 1.0, f);
  double worst = 0.0;
  double sup = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double ref = 1.0 - std::exp(-g.at(k));
    worst = std::max(worst, std::abs(u[k] - ref));
    sup = std::max(sup, ref);
  }
  EXPECT_LE(worst, 0.02 * sup);
}

TEST(FodeL1, NonnegativeForNonnegativeForcing) {
  const TimeGrid g = TimeGrid::spanning(0.0, 3.0, 90);
  const History f = History::sample(g, [](double t) { return std::max(0.0, std::sin(4.0 * t)); });
  for (double a : {0.3, 0.8}) {
    const History ul = solve_fode_l1(FracOrder(a), 1.5, f);
    const History ue = solve_fode_explicit(FracOrder(a), 1.5, f);
    for (double v : ul.values()) EXPECT_GE(v, 0.0);
    for (double v : ue.values()) EXPECT_GE(v, -1e-14);
  }
}

TEST(FodeL1, LowerBoundFromEarlyMass) {
  // Forcing with mass >= 1/2 on [-2, -1] keeps u above (mu alpha / 2) E'(-2 C1) on [-1, 0].
  const double c1 = 2.0;
  const TimeGrid g = TimeGrid::spanning(-2.0, 0.0, 200);
  const History f = History::sample(g, [](double t) { return t < -1.4 ? 1.0 : 0.0; });
  for (double a : {0.4, 0.7, 0.95}) {
    const FracOrder fa(a);
    const double bound = 0.5 * (a / 2.0) * mittag_leffler_deriv(fa, -2.0 * c1);
    const History u = solve_fode_l1(fa, c1, f);
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (g.at(k) >= -1.0) EXPECT_GE(u[k], bound) << "t = " << g.at(k);
    }
  }
}

TEST(SmoothCutoff, Profile) {
  EXPECT_EQ(smooth_cutoff(0.0), 0.0);
  EXPECT_EQ(smooth_cutoff(0.25), 0.0);
  EXPECT_EQ(smooth_cutoff(0.5), 1.0);
  EXPECT_EQ(smooth_cutoff(0.9), 1.0);
  EXPECT_NEAR(smooth_cutoff(0.375), 0.5, 1e-15);
}

TEST(ProductSplit, TrivialCases) {
  const TimeGrid g = TimeGrid::spanning(0.0, 1.0, 64);
  const History eta = History::sample(g, smooth_cutoff);
  const History zero = History::sample(g, [](double) { return 0.0; });
  for (auto rule : {SplitRule::same_weights, SplitRule::product_integration}) {
    const auto [l0, r0] = caputo_product_split(eta, zero, FracOrder(0.5), rule);
    for (std::size_t k = 0; k < l0.size(); ++k) {
      EXPECT_EQ(l0[k], 0.0);
      EXPECT_EQ(r0[k], 0.0);
    }
    const History one = History::sample(g, [](double) { return 1.0; });
    const History gh = History::sample(g, [](double t) { return 1.0 + t * t; });
    const auto [l1, r1] = caputo_product_split(one, gh, FracOrder(0.5), rule);
    const auto d = caputo_eval_series(gh, FracOrder(0.5));
    for (std::size_t k = 0; k < l1.size(); ++k) {
      EXPECT_NEAR(l1[k], d[k], 1e-14);
      EXPECT_NEAR(r1[k], d[k], 1e-14);
    }
  }
}

TEST(ProductSplit, IndependentRuleConverges) {
  double prev = INFINITY;
  for (std::size_t n : {128u, 256u, 512u}) {
    const TimeGrid g = TimeGrid::spanning(0.0, 1.0, n);
    const auto [l, r] = caputo_product_split(History::sample(g, smooth_cutoff),
                                             History::sample(g, [](double t) { return 1.0 + t * t; }),
                                             FracOrder(0.5), SplitRule::product_integration);
    double worst = 0.0;
    for (std::size_t k = 0; k < l.size(); ++k) worst = std::max(worst, std::abs(l[k] - r[k]));
    EXPECT_LT(worst, 0.5 * prev);
    prev = worst;
  }
}

TEST(ProductSplit, GridMismatch) {
  const History a = History::sample(TimeGrid::spanning(0.0, 1.0, 10), smooth_cutoff);
  const History b = History::sample(TimeGrid::spanning(0.0, 1.0, 11), smooth_cutoff);
  EXPECT_THROW(caputo_product_split(a, b, FracOrder(0.5)), std::invalid_argument);
}
