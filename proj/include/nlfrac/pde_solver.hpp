#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nlfrac/fractional_time.hpp"
#include "nlfrac/nonlocal_spatial.hpp"

namespace nlfrac {

/// Space and time lattices together with the orders of both derivatives.
struct SpaceTimeGrid {
  SpaceGrid space;
  TimeGrid time;
  FracOrder alpha;
  double sigma;
};

/// Values of u for t < t_start inside the domain, |value| <~ |t|^growth.
struct PastData {
  std::function<double(double x, double t)> value;
  double growth = 0.0;
};

/// D_t^alpha u - I u = f on the grid domain, with u given outside the domain by
/// the space grid's exterior rule and before t_start by `past` (or by the
/// initial slice, held constant, when `past` is empty).
struct ProblemSpec {
  OperatorChoice op;
  Ellipticity ell;
  FracOrder alpha;
  std::function<double(double x, double t)> forcing;
  std::function<double(double x)> initial;
  std::optional<PastData> past;
};

/// Sampled solution, values[k * n_points + i] = u(x_i, t_k).
class Field {
 public:
  Field(SpaceTimeGrid grid, std::vector<double> values);

  const SpaceTimeGrid& grid() const noexcept { return grid_; }
  std::size_t n_times() const noexcept { return grid_.time.size(); }
  std::size_t n_points() const noexcept { return grid_.space.n_points(); }
  double at(std::size_t k, std::size_t i) const { return values_[k * n_points() + i]; }
  std::span<const double> row(std::size_t k) const { return {values_.data() + k * n_points(), n_points()}; }
  std::span<double> row(std::size_t k) { return {values_.data() + k * n_points(), n_points()}; }
  std::span<const double> values() const noexcept { return values_; }
  SpatialField slice(std::size_t k) const;

 private:
  SpaceTimeGrid grid_;
  std::vector<double> values_;
};

struct SolverOptions {
  /// Fraction of the monotonicity limit the time step may use.
  double c_stab = 0.9;
};

/// Largest dt for which the explicit scheme is monotone with margin c_stab:
///   dt^alpha Gamma(2-alpha) D <= c_stab (2 - 2^{1-alpha}),
/// where D bounds the derivative of the spatial operator with respect to the
/// center value.
double max_stable_dt(const SpaceGrid& space, const Ellipticity& ell, FracOrder alpha, double c_stab = 0.9);

/// Explicit L1 time stepping of the problem. Construction validates the data,
/// checks the step-size bound and freezes the past contributions.
class Solver {
 public:
  Solver(ProblemSpec spec, SpaceTimeGrid grid, SolverOptions opts = {});

  /// Field holding the initial slice; later rows are zero until stepped.
  Field initial_field() const;

  /// Fills row k from rows 0..k-1.
  void step(Field& u, std::size_t k) const;

  Field solve() const;

  const SpaceTimeGrid& grid() const noexcept { return grid_; }
  const NonlocalOperator& op() const noexcept { return op_; }

 private:
  ProblemSpec spec_;
  SpaceTimeGrid grid_;
  SolverOptions opts_;
  NonlocalOperator op_;
  std::vector<double> l1_b_;
  std::vector<double> past_;  // [k * n + i], frozen tail contributions
};

Field solve(const ProblemSpec& spec, const SpaceTimeGrid& grid, SolverOptions opts = {});

/// Binary dump: 8-byte magic "NLFRACF1", then little-endian
///   f64 x_min, f64 x_max, u64 n_points, f64 t_start, f64 dt, u64 n_steps,
///   f64 alpha, f64 sigma,
/// followed by (n_steps + 1) * n_points f64 values in row-major [time][space] order.
void write_checkpoint(const Field& u, const std::filesystem::path& path);

/// Reads a checkpoint; the exterior rule is not stored and comes back as EdgeExtension.
Field read_checkpoint(const std::filesystem::path& path);

}  // namespace nlfrac
