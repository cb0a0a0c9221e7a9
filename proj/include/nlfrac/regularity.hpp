#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nlfrac/pde_solver.hpp"

namespace nlfrac {

/// B_r(x0) x (t0 - r^{2 sigma/alpha}, t0].
struct Cylinder {
  double x0 = 0.0;
  double t0 = 0.0;
  double r = 1.0;
};

struct CylinderStats {
  double osc = 0.0;
  std::size_t n_space = 0;
  std::size_t n_time = 0;
  /// The cylinder reaches outside the solved region.
  bool partial = false;
};

/// Oscillation and node counts over the grid nodes inside the cylinder.
/// Throws std::invalid_argument when no node lies inside.
CylinderStats measure_cylinder(const Field& u, const Cylinder& c);

/// max - min of u over the grid nodes inside the cylinder.
double oscillation(const Field& u, const Cylinder& c);

struct OscillationReport {
  std::vector<double> scales;
  std::vector<double> osc;
  double kappa_fit = 0.0;
  double kappa_time_fit = 0.0;
  double alpha = 1.0;
  double sigma = 0.5;
  std::vector<double> theta_measured;
  /// Pure-time oscillation at x0 over (t0 - r^{2 sigma/alpha}, t0] for each scale.
  std::vector<double> time_osc;
  /// Scales that entered the spatial fit.
  std::vector<bool> used;
  bool zero_oscillation = false;
  bool partial = false;
  bool monotone = true;
};

struct HolderOptions {
  double ratio = 0.25;
  std::size_t depth = 4;
  /// A scale enters the fit only if its cylinder holds at least this many
  /// spatial nodes, time nodes and nodes overall.
  std::size_t min_space = 4;
  std::size_t min_time = 4;
  std::size_t min_nodes = 16;
  /// Fewer usable scales than this is an error.
  std::size_t min_scales = 3;
};

/// Oscillation over Q_{ratio^k}(x0, t0), k = 0..depth, with least-squares
/// exponents from log(osc) against log(scale). Exponents are NaN when the
/// oscillation vanishes.
OscillationReport fit_holder(const Field& u, double x0, double t0, const HolderOptions& opts = {});

std::string report_to_json(const OscillationReport& r);
OscillationReport report_from_json(const std::string& text);
/// One row per scale: k, r^k, osc, theta_k (empty for the last scale).
std::string report_to_csv(const OscillationReport& r);

struct SweepSummary {
  double kappa_min = 0.0;
  double kappa_max = 0.0;
  double ratio = 0.0;
};

struct SweepResult {
  std::vector<double> alphas;
  std::vector<OscillationReport> reports;
  SweepSummary summary;
  /// Set when a solve failed; reports holds the completed runs.
  std::optional<std::string> error;
};

struct SweepOptions {
  HolderOptions holder;
  SolverOptions solver;
  double x0 = 0.0;
};

/// Solves the template problem for each alpha on the template grid's space
/// lattice and time window, re-deriving dt from the monotonicity limit, and
/// fits exponents at (x0, t_end).
SweepResult alpha_sweep(const ProblemSpec& spec_template, const std::vector<double>& alphas,
                        const SpaceTimeGrid& grid, const SweepOptions& opts = {});

/// Time grid over [t_start, t_end] with the fewest steps meeting the monotonicity limit.
TimeGrid stable_time_grid(const SpaceGrid& space, const Ellipticity& ell, FracOrder alpha,
                          double t_start, double t_end, double c_stab = 0.9);

struct ProbeOptions {
  double epsilon0 = 0.05;
  double nu = 0.3;
  double noise_floor = 1e-3;
  SolverOptions solver;
};

struct ProbeResult {
  double theta = 0.0;
  bool passed = false;
  double osc_quarter = 0.0;
  double sup_abs = 0.0;
};

/// Solves on B_1 x [-1, 0] after checking the data hypotheses (|u| <= 1 at
/// t = -1 in B_1, exterior |u(x)| <= 2|4x|^nu - 1, past |u(x,t)| <= 2|4t|^nu - 1,
/// |f| <= epsilon0/2) and measures theta = 1 - osc over Q_{1/4}. Throws
/// HypothesisError listing every violated hypothesis.
ProbeResult diminish_oscillation_probe(const ProblemSpec& spec, const SpaceTimeGrid& grid,
                                       const ProbeOptions& opts = {});

}  // namespace nlfrac
