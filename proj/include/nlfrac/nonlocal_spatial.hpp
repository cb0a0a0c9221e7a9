#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace nlfrac {

/// Outside the domain u equals the nearest boundary value.
struct EdgeExtension {};

/// Outside the domain u equals `left` below x_min and `right` above x_max.
struct ConstantExterior {
  double left = 0.0;
  double right = 0.0;
};

/// Outside the domain u is given by a callable whose growth |u(x)| <~ |x|^growth
/// must stay below 2 sigma for the operators to converge.
struct AnalyticExterior {
  std::function<double(double)> value;
  double growth = 0.0;
};

using ExteriorRule = std::variant<EdgeExtension, ConstantExterior, AnalyticExterior>;

/// Uniform one-dimensional lattice x_i = x_min + i * dx, i = 0..n_points-1, with
/// the rule that defines u outside [x_min, x_max].
class SpaceGrid {
 public:
  SpaceGrid(double x_min, double x_max, std::size_t n_points, ExteriorRule exterior = EdgeExtension{});

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double dx() const noexcept { return dx_; }
  std::size_t n_points() const noexcept { return n_; }
  double x(std::ptrdiff_t i) const noexcept { return x_min_ + static_cast<double>(i) * dx_; }
  const ExteriorRule& exterior() const noexcept { return exterior_; }

  /// Same lattice (the exterior rule is not compared).
  bool same_lattice(const SpaceGrid& o) const noexcept {
    return x_min_ == o.x_min_ && x_max_ == o.x_max_ && n_ == o.n_;
  }

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double dx_;
  ExteriorRule exterior_;
};

/// Ellipticity constants and the order 2 sigma of the spatial operators.
class Ellipticity {
 public:
  Ellipticity(double lambda, double Lambda, double sigma);

  double lambda() const noexcept { return lambda_; }
  double Lambda() const noexcept { return Lambda_; }
  double sigma() const noexcept { return sigma_; }

 private:
  double lambda_;
  double Lambda_;
  double sigma_;
};

/// One time slice u(., t) sampled on a SpaceGrid.
class SpatialField {
 public:
  SpatialField(SpaceGrid grid, std::vector<double> values);

  const SpaceGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_.at(i); }
  std::size_t size() const noexcept { return values_.size(); }

  /// Value at lattice index i, which may lie outside the domain.
  double node_value(std::ptrdiff_t i) const;

  /// Value at an arbitrary point: 4-point Lagrange interpolation inside the
  /// domain (exact at nodes), exterior rule outside.
  double value_at(double x) const;

  /// -u, including the exterior data.
  SpatialField operator-() const;

 private:
  SpaceGrid grid_;
  std::vector<double> values_;
};

/// delta(u, x_k, y) = u(x_k + y) + u(x_k - y) - 2 u(x_k).
double second_difference(const SpatialField& u, std::size_t k, double y);

/// Weights of the singular integral
///   int_0^inf delta(u, x, y) a(y) y^{-1-2 sigma} dy
/// at every node. Inside the lattice reach, delta is sampled at grid-aligned
/// y = m dx; the near field [0, dx] uses delta(dx) (y/dx)^2 and each following
/// pair of cells is integrated exactly against the quadratic interpolant of
/// delta. All weights are nonnegative, so every operator built from them is
/// monotone. Beyond the lattice reach the exterior rule is sampled on graded
/// Gauss panels up to R_cut = 10 (x_max - x_min); the remainder to infinity is
/// integrated in closed form. An analytic exterior has no closed-form remainder:
/// its R_cut is scaled by max(1, (x_max - x_min) / (64 dx)) and the part beyond
/// it is dropped.
class NonlocalStencil {
 public:
  NonlocalStencil(const SpaceGrid& grid, double sigma);

  const SpaceGrid& grid() const noexcept { return grid_; }
  double sigma() const noexcept { return sigma_; }
  double r_cut() const noexcept { return r_cut_; }

  /// Calls fn(y, weight, delta) for every quadrature term at node k, in a fixed order.
  template <class Fn>
  void visit(std::span<const double> u, std::size_t k, Fn&& fn) const;

  /// Sum of all weights at node k.
  double total_weight(std::size_t k) const;
  double max_total_weight() const;

 private:
  double ghost(std::span<const double> u, std::ptrdiff_t i) const;
  double exterior_sum_at_infinity(std::span<const double> u) const;
  std::size_t pairs_for(std::size_t k) const;

  SpaceGrid grid_;
  double sigma_;
  double scale_;
  double r_cut_;
  double w_inf_;
  std::vector<double> w_inner_;  // scaled weight of node m when m is not the last node
  std::vector<double> w_last_;   // scaled weight of node 2P+1 when it closes P pairs (index P)
  std::vector<std::vector<double>> tail_y_;
  std::vector<std::vector<double>> tail_w_;
  std::vector<std::vector<double>> tail_s_;  // exterior sums, analytic exteriors only
  std::vector<double> ghost_left_;   // analytic exterior at x_min - i dx, i >= 1
  std::vector<double> ghost_right_;  // analytic exterior at x_max + i dx, i >= 1
};

/// Maximal Pucci operator
///   M+ u(x) = int_0^inf (Lambda delta_+ - lambda delta_-) y^{-1-2 sigma} dy.
double pucci_plus(const SpatialField& u, std::size_t k, const Ellipticity& ell);
double pucci_plus(const NonlocalStencil& st, std::span<const double> u, std::size_t k,
                  const Ellipticity& ell);

/// Minimal Pucci operator
///   M- u(x) = int_0^inf (lambda delta_+ - Lambda delta_-) y^{-1-2 sigma} dy.
double pucci_minus(const SpatialField& u, std::size_t k, const Ellipticity& ell);
double pucci_minus(const NonlocalStencil& st, std::span<const double> u, std::size_t k,
                   const Ellipticity& ell);

using KernelFn = std::function<double(double t, double x, double y)>;

/// Points at which the symmetry and ellipticity of a KernelFamily are checked.
struct KernelProbe {
  std::vector<double> t{-2.0, -1.5, -1.0, -0.5, 0.0};
  std::vector<double> x{-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0};
  std::vector<double> y{1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0};
};

/// Finite family a^{ij}(t, x, y); rows are maximized over, columns minimized over.
class KernelFamily {
 public:
  KernelFamily(Ellipticity ell, std::vector<std::vector<KernelFn>> members,
               const KernelProbe& probe = {});

  /// Family of constant kernels a^{ij} = values[i][j].
  static KernelFamily constants(Ellipticity ell, const std::vector<std::vector<double>>& values);

  const Ellipticity& ell() const noexcept { return ell_; }
  std::size_t rows() const noexcept { return members_.size(); }
  std::size_t cols() const noexcept { return members_.front().size(); }
  double operator()(std::size_t i, std::size_t j, double t, double x, double y) const {
    return members_[i][j](t, x, y);
  }

 private:
  Ellipticity ell_;
  std::vector<std::vector<KernelFn>> members_;
};

/// sup_i inf_j int_0^inf delta(u, x_k, y) a^{ij}(t, x_k, y) y^{-1-2 sigma} dy,
/// which equals the full-line integral of (u(x+y) - u(x)) a^{ij} |y|^{-1-2 sigma}
/// for symmetric kernels. Ties go to the lowest index.
double isaacs_apply(const SpatialField& u, std::size_t k, const KernelFamily& fam, double t);
double isaacs_apply(const NonlocalStencil& st, std::span<const double> u, std::size_t k,
                    const KernelFamily& fam, double t);

enum class Extremal { plus, minus };

using OperatorChoice = std::variant<Extremal, KernelFamily>;

/// A spatial operator bound to one grid, reusing its stencil across calls.
class NonlocalOperator {
 public:
  NonlocalOperator(const SpaceGrid& grid, Ellipticity ell, OperatorChoice choice);

  double apply_at(std::span<const double> u, std::size_t k, double t) const;
  void apply(std::span<const double> u, double t, std::span<double> out) const;

  /// Upper bound on the derivative of the operator at node k with respect to u(x_k).
  double diagonal_bound() const noexcept { return 2.0 * ell_.Lambda() * stencil_.max_total_weight(); }
  const NonlocalStencil& stencil() const noexcept { return stencil_; }
  const Ellipticity& ell() const noexcept { return ell_; }

 private:
  NonlocalStencil stencil_;
  Ellipticity ell_;
  OperatorChoice choice_;
};

// ---------------------------------------------------------------------------

template <class Fn>
void NonlocalStencil::visit(std::span<const double> u, std::size_t k, Fn&& fn) const {
  const auto n = static_cast<std::ptrdiff_t>(grid_.n_points());
  const auto kk = static_cast<std::ptrdiff_t>(k);
  const double uk = u[k];
  const double h = grid_.dx();
  auto node = [&](std::ptrdiff_t i) { return (i >= 0 && i < n) ? u[static_cast<std::size_t>(i)] : ghost(u, i); };

  const std::size_t pairs = pairs_for(k);
  const std::size_t last = 2 * pairs + 1;
  for (std::size_t m = 1; m <= last; ++m) {
    const auto mm = static_cast<std::ptrdiff_t>(m);
    const double w = (m == last) ? w_last_[pairs] : w_inner_[m];
    const double delta = node(kk + mm) + node(kk - mm) - 2.0 * uk;
    fn(static_cast<double>(m) * h, w, delta);
  }
  const auto& ys = tail_y_[k];
  const auto& ws = tail_w_[k];
  if (std::holds_alternative<AnalyticExterior>(grid_.exterior())) {
    const auto& ss = tail_s_[k];
    for (std::size_t q = 0; q < ys.size(); ++q) fn(ys[q], ws[q], ss[q] - 2.0 * uk);
  } else {
    const double s = exterior_sum_at_infinity(u);
    for (std::size_t q = 0; q < ys.size(); ++q) fn(ys[q], ws[q], s - 2.0 * uk);
  }
  fn(r_cut_, w_inf_, exterior_sum_at_infinity(u) - 2.0 * uk);
}

}  // namespace nlfrac
