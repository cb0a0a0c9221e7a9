#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "nlfrac/errors.hpp"
#include "nlfrac/pde_solver.hpp"

using namespace nlfrac;

namespace {

std::function<double(double, double)> const_forcing(double c) {
  return [c](double, double) { return c; };
}

SpaceTimeGrid stable_grid(const SpaceGrid& s, const Ellipticity& ell, FracOrder a, double t0, std::size_t steps,
                          double fraction = 0.9) {
  return {s, TimeGrid(t0, max_stable_dt(s, ell, a, fraction), steps), a, ell.sigma()};
}

}  // namespace

TEST(Solver, ConstantsAreSteadyStates) {
  const Ellipticity ell(0.5, 1.5, 0.5);
  const FracOrder a(0.6);
  const SpaceGrid s(-1.0, 1.0, 33, ConstantExterior{0.7, 0.7});
  const ProblemSpec spec{Extremal::plus, ell, a, const_forcing(0.0), [](double) { return 0.7; }, std::nullopt};
  const Field u = solve(spec, stable_grid(s, ell, a, 0.0, 60));
  for (double v : u.values()) EXPECT_NEAR(v, 0.7, 1e-13);
}

TEST(Solver, ZeroDataGivesZeroField) {
  const Ellipticity ell(1.0, 1.0, 0.5);
  const FracOrder a(0.8);
  const SpaceGrid s(-1.0, 1.0, 17, ConstantExterior{0.0, 0.0});
  const ProblemSpec spec{Extremal::minus, ell, a, const_forcing(0.0), [](double) { return 0.0; }, std::nullopt};
  const Field u = solve(spec, stable_grid(s, ell, a, 0.0, 30));
  for (double v : u.values()) EXPECT_EQ(v, 0.0);
}

TEST(Solver, LinearCaseSupNormDecreases) {
  const Ellipticity ell(1.0, 1.0, 0.5);
  const FracOrder a(0.7);
  const SpaceGrid s(-1.0, 1.0, 65, ConstantExterior{0.0, 0.0});
  const ProblemSpec spec{Extremal::plus, ell, a, const_forcing(0.0),
                         [](double x) { return std::exp(-100.0 * x * x); }, std::nullopt};
  const Field u = solve(spec, stable_grid(s, ell, a, 0.0, 200));
  double prev = INFINITY;
  for (std::size_t k = 0; k < u.n_times(); ++k) {
    double sup = 0.0;
    for (double v : u.row(k)) sup = std::max(sup, std::abs(v));
    EXPECT_LE(sup, prev + 1e-15);
    prev = sup;
  }
  EXPECT_LT(prev, 1.0);
}

TEST(Solver, EarlyGrowthMatchesFractionalOde) {
  // f = 1 and zero data: at the center, u follows D^alpha u + C1 u = 1 with C1
  // the loss rate seen after the first step.
  const Ellipticity ell(1.0, 1.0, 0.5);
  const FracOrder a(0.6);
  const SpaceGrid s(-1.0, 1.0, 65, ConstantExterior{0.0, 0.0});
  const ProblemSpec spec{Extremal::plus, ell, a, const_forcing(1.0), [](double) { return 0.0; }, std::nullopt};
  const SpaceTimeGrid grid = stable_grid(s, ell, a, 0.0, 120);
  const Field u = solve(spec, grid);
  const NonlocalOperator op(s, ell, Extremal::plus);
  const double c1 = -op.apply_at(u.row(1), 32, 0.0) / u.at(1, 32);
  ASSERT_GT(c1, 0.0);
  const History f = History::sample(grid.time, [](double) { return 1.0; });
  const History ref = solve_fode_explicit(a, c1, f);
  // The first L1 step of a t^alpha profile is short by the factor Gamma(2-alpha) Gamma(1+alpha).
  EXPECT_NEAR(u.at(1, 32), std::pow(grid.time.dt(), 0.6) * std::tgamma(1.4), 1e-12);
  EXPECT_NEAR(u.at(1, 32) / ref[1], std::tgamma(1.4) * std::tgamma(1.6), 0.01);
  for (std::size_t k = 3; k < grid.time.size(); ++k) {
    EXPECT_NEAR(u.at(k, 32) / ref[k], 1.0, 0.10) << "k = " << k;
  }
}

TEST(Solver, ComparisonPrinciple) {
  const Ellipticity ell(0.5, 1.5, 0.5);
  const FracOrder a(0.5);
  const KernelFamily fam = KernelFamily::constants(ell, {{0.5, 1.2}, {1.5, 0.9}});
  const SpaceGrid s1(-1.0, 1.0, 33, ConstantExterior{-0.2, 0.1});
  const SpaceGrid s2(-1.0, 1.0, 33, ConstantExterior{-0.1, 0.1});
  const ProblemSpec p1{fam, ell, a, const_forcing(0.0), [](double x) { return std::sin(3.0 * x); }, std::nullopt};
  const ProblemSpec p2{fam, ell, a, const_forcing(0.05), [](double x) { return std::sin(3.0 * x) + 0.1 * x * x; },
                       std::nullopt};
  const SpaceTimeGrid g1 = stable_grid(s1, ell, a, 0.0, 100);
  const SpaceTimeGrid g2{s2, g1.time, a, 0.5};
  const Field u1 = solve(p1, g1);
  const Field u2 = solve(p2, g2);
  for (std::size_t j = 0; j < u1.values().size(); ++j) EXPECT_LE(u1.values()[j], u2.values()[j] + 1e-12);
}

TEST(Solver, SandwichTransfer) {
  const Ellipticity ell(0.5, 1.5, 0.5);
  const FracOrder a(0.7);
  const SpaceGrid s(-1.0, 1.0, 33, ConstantExterior{0.3, -0.2});
  auto init = [](double x) { return std::cos(2.0 * x); };
  const KernelFamily fam = KernelFamily::constants(ell, {{0.5, 1.1}, {1.4, 0.8}});
  const SpaceTimeGrid g = stable_grid(s, ell, a, 0.0, 80);
  const Field up = solve(ProblemSpec{Extremal::plus, ell, a, const_forcing(0.1), init, std::nullopt}, g);
  const Field ui = solve(ProblemSpec{fam, ell, a, const_forcing(0.1), init, std::nullopt}, g);
  const Field um = solve(ProblemSpec{Extremal::minus, ell, a, const_forcing(0.1), init, std::nullopt}, g);
  for (std::size_t j = 0; j < up.values().size(); ++j) {
    EXPECT_LE(um.values()[j], ui.values()[j] + 1e-12);
    EXPECT_LE(ui.values()[j], up.values()[j] + 1e-12);
  }
}

TEST(Solver, ScalingCovariance) {
  // v(x, t) = u(4x, 4^{2 sigma/alpha} t) solves the problem with forcing 4^{2 sigma} f on the shrunken grid.
  const double sigma = 0.5;
  const FracOrder a(0.8);
  const Ellipticity ell(0.7, 1.3, sigma);
  const double tscale = std::pow(4.0, 2.0 * sigma / a.value());
  auto init = [](double x) { return std::exp(-x * x); };
  const SpaceGrid sv(-1.0, 1.0, 33, ConstantExterior{0.1, -0.1});
  const SpaceGrid su(-4.0, 4.0, 33, ConstantExterior{0.1, -0.1});
  const double dtv = max_stable_dt(sv, ell, a, 0.8);
  const SpaceTimeGrid gv{sv, TimeGrid(-1.0, dtv, 60), a, sigma};
  const SpaceTimeGrid gu{su, TimeGrid(-tscale, dtv * tscale, 60), a, sigma};
  const Field u = solve(ProblemSpec{Extremal::plus, ell, a, const_forcing(0.2), init, std::nullopt}, gu);
  const Field v = solve(ProblemSpec{Extremal::plus, ell, a, const_forcing(0.2 * std::pow(4.0, 2.0 * sigma)),
                                    [&](double x) { return init(4.0 * x); }, std::nullopt},
                        gv);
  for (std::size_t j = 0; j < u.values().size(); ++j) EXPECT_NEAR(u.values()[j], v.values()[j], 1e-10);
}

TEST(Solver, ConstantPastMatchesDefault) {
  const Ellipticity ell(1.0, 1.0, 0.5);
  const FracOrder a(0.6);
  const SpaceGrid s(-1.0, 1.0, 17, ConstantExterior{0.0, 0.0});
  auto init = [](double x) { return 1.0 - x * x; };
  const SpaceTimeGrid g = stable_grid(s, ell, a, -1.0, 40);
  const Field plain = solve(ProblemSpec{Extremal::plus, ell, a, const_forcing(0.0), init, std::nullopt}, g);
  const Field held = solve(
      ProblemSpec{Extremal::plus, ell, a, const_forcing(0.0), init, PastData{[&](double x, double) { return init(x); }, 0.0}},
      g);
  for (std::size_t j = 0; j < plain.values().size(); ++j) EXPECT_NEAR(plain.values()[j], held.values()[j], 1e-12);
}

TEST(Solver, RejectsUnstableStepAndBadPast) {
  const Ellipticity ell(1.0, 1.0, 0.5);
  const FracOrder a(0.6);
  const SpaceGrid s(-1.0, 1.0, 33);
  const ProblemSpec spec{Extremal::plus, ell, a, const_forcing(0.0), [](double) { return 0.0; }, std::nullopt};
  const double dt = max_stable_dt(s, ell, a, 1.0);
  EXPECT_THROW(Solver(spec, SpaceTimeGrid{s, TimeGrid(0.0, 1.01 * dt, 5), a, 0.5}), std::invalid_argument);
  ProblemSpec past = spec;
  past.past = PastData{[](double, double t) { return std::abs(t); }, 0.7};
  EXPECT_THROW(Solver(past, stable_grid(s, ell, a, 0.0, 5)), std::invalid_argument);
}

TEST(Solver, NonFiniteForcingIsReported) {
  const Ellipticity ell(1.0, 1.0, 0.5);
  const FracOrder a(0.6);
  const SpaceGrid s(-1.0, 1.0, 17);
  const ProblemSpec spec{Extremal::plus, ell, a, [](double x, double t) { return t > 0.0 && x > 0.5 ? NAN : 0.0; },
                         [](double) { return 0.0; }, std::nullopt};
  try {
    solve(spec, stable_grid(s, ell, a, 0.0, 10));
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("node"), std::string::npos);
  }
}

TEST(Solver, Deterministic) {
  const Ellipticity ell(0.5, 1.5, 0.4);
  const FracOrder a(0.75);
  const SpaceGrid s(-1.0, 1.0, 33, ConstantExterior{0.2, -0.4});
  const ProblemSpec spec{Extremal::minus, ell, a, const_forcing(0.01), [](double x) { return std::sin(5.0 * x); },
                         std::nullopt};
  const SpaceTimeGrid g = stable_grid(s, ell, a, 0.0, 50);
  const Field u = solve(spec, g);
  const Field v = solve(spec, g);
  ASSERT_EQ(u.values().size(), v.values().size());
  for (std::size_t j = 0; j < u.values().size(); ++j) EXPECT_EQ(u.values()[j], v.values()[j]);
}

TEST(Checkpoint, RoundTrip) {
  const Ellipticity ell(1.0, 1.0, 0.5);
  const FracOrder a(0.6);
  const SpaceGrid s(-1.0, 1.0, 17, ConstantExterior{0.0, 0.0});
  const ProblemSpec spec{Extremal::plus, ell, a, const_forcing(0.3), [](double x) { return x; }, std::nullopt};
  const Field u = solve(spec, stable_grid(s, ell, a, -1.0, 12));
  const auto path = std::filesystem::temp_directory_path() / "nlfrac_checkpoint_test.bin";
  write_checkpoint(u, path);
  EXPECT_EQ(std::filesystem::file_size(path), 8u + 8u * 8u + 8u * 13u * 17u);
  const Field back = read_checkpoint(path);
  EXPECT_TRUE(back.grid().space.same_lattice(s));
  EXPECT_EQ(back.grid().time, u.grid().time);
  EXPECT_EQ(back.grid().alpha, a);
  for (std::size_t j = 0; j < u.values().size(); ++j) EXPECT_EQ(back.values()[j], u.values()[j]);
  {
    std::ofstream os(path, std::ios::binary);
    os << "NOTAFILEATALL";
  }
  EXPECT_THROW(read_checkpoint(path), std::runtime_error);
  std::filesystem::remove(path);
}
