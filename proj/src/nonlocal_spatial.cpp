#include "nlfrac/nonlocal_spatial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nlfrac/quadrature.hpp"

namespace nlfrac {

SpaceGrid::SpaceGrid(double x_min, double x_max, std::size_t n_points, ExteriorRule exterior)
    : x_min_(x_min), x_max_(x_max), n_(n_points), dx_(0.0), exterior_(std::move(exterior)) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    throw std::invalid_argument("SpaceGrid: need finite x_min < x_max");
  }
  if (n_points < 2) throw std::invalid_argument("SpaceGrid: need at least 2 points");
  dx_ = (x_max - x_min) / static_cast<double>(n_points - 1);
  if (const auto* ext = std::get_if<AnalyticExterior>(&exterior_)) {
    if (!ext->value) throw std::invalid_argument("SpaceGrid: AnalyticExterior needs a callable");
    if (!(ext->growth >= 0.0) || !std::isfinite(ext->growth)) {
      throw std::invalid_argument("SpaceGrid: AnalyticExterior growth must be finite and >= 0");
    }
  }
  if (const auto* ext = std::get_if<ConstantExterior>(&exterior_)) {
    if (!std::isfinite(ext->left) || !std::isfinite(ext->right)) {
      throw std::invalid_argument("SpaceGrid: ConstantExterior values must be finite");
    }
  }
}

Ellipticity::Ellipticity(double lambda, double Lambda, double sigma)
    : lambda_(lambda), Lambda_(Lambda), sigma_(sigma) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("Ellipticity: lambda must be > 0");
  if (!(Lambda >= lambda) || !std::isfinite(Lambda)) {
    throw std::invalid_argument("Ellipticity: Lambda must be finite and >= lambda");
  }
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("Ellipticity: sigma must lie in (0, 1)");
}

SpatialField::SpatialField(SpaceGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.n_points()) {
    throw std::invalid_argument("SpatialField: expected " + std::to_string(grid_.n_points()) +
                                " values, got " + std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::invalid_argument("SpatialField: non-finite value at index " + std::to_string(i));
    }
  }
}

namespace {

double exterior_value(const SpaceGrid& grid, std::span<const double> u, double x) {
  const bool left = x < grid.x_min();
  return std::visit(
      [&](const auto& rule) -> double {
        using T = std::decay_t<decltype(rule)>;
        if constexpr (std::is_same_v<T, EdgeExtension>) {
          return left ? u.front() : u.back();
        } else if constexpr (std::is_same_v<T, ConstantExterior>) {
          return left ? rule.left : rule.right;
        } else {
          return rule.value(x);
        }
      },
      grid.exterior());
}

}  // namespace

double SpatialField::node_value(std::ptrdiff_t i) const {
  const auto n = static_cast<std::ptrdiff_t>(values_.size());
  if (i >= 0 && i < n) return values_[static_cast<std::size_t>(i)];
  return exterior_value(grid_, values_, grid_.x(i));
}

double SpatialField::value_at(double x) const {
  const double h = grid_.dx();
  const double tol = 1e-12 * h;
  if (x < grid_.x_min() - tol || x > grid_.x_max() + tol) return exterior_value(grid_, values_, x);
  const double s = (x - grid_.x_min()) / h;
  const double r = std::round(s);
  if (std::abs(s - r) < 1e-12) {
    return node_value(static_cast<std::ptrdiff_t>(r));
  }
  auto j = static_cast<std::ptrdiff_t>(std::floor(s));
  j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(values_.size()) - 2);
  const double w = s - static_cast<double>(j);
  const double lm = -w * (w - 1.0) * (w - 2.0) / 6.0;
  const double l0 = (w + 1.0) * (w - 1.0) * (w - 2.0) / 2.0;
  const double l1 = -(w + 1.0) * w * (w - 2.0) / 2.0;
  const double l2 = (w + 1.0) * w * (w - 1.0) / 6.0;
  return lm * node_value(j - 1) + l0 * node_value(j) + l1 * node_value(j + 1) + l2 * node_value(j + 2);
}

SpatialField SpatialField::operator-() const {
  ExteriorRule ext = std::visit(
      [](const auto& rule) -> ExteriorRule {
        using T = std::decay_t<decltype(rule)>;
        if constexpr (std::is_same_v<T, EdgeExtension>) {
          return rule;
        } else if constexpr (std::is_same_v<T, ConstantExterior>) {
          return ConstantExterior{-rule.left, -rule.right};
        } else {
          auto fn = rule.value;
          return AnalyticExterior{[fn](double x) { return -fn(x); }, rule.growth};
        }
      },
      grid_.exterior());
  std::vector<double> neg(values_.size());
  for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -values_[i];
  return SpatialField(SpaceGrid(grid_.x_min(), grid_.x_max(), grid_.n_points(), std::move(ext)),
                      std::move(neg));
}

double second_difference(const SpatialField& u, std::size_t k, double y) {
  if (k >= u.size()) throw std::out_of_range("second_difference: node index out of range");
  const double x = u.grid().x(static_cast<std::ptrdiff_t>(k));
  const double d = u.value_at(x + y) + u.value_at(x - y) - 2.0 * u[k];
  if (!std::isfinite(d)) throw std::domain_error("second_difference: non-finite interpolant");
  return d;
}

// ---------------------------------------------------------------------------

NonlocalStencil::NonlocalStencil(const SpaceGrid& grid, double sigma)
    : grid_(grid), sigma_(sigma), scale_(0.0), r_cut_(0.0), w_inf_(0.0) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("NonlocalStencil: sigma must lie in (0, 1)");
  const auto* analytic = std::get_if<AnalyticExterior>(&grid_.exterior());
  if (analytic != nullptr && !(analytic->growth < 2.0 * sigma)) {
    throw std::invalid_argument("NonlocalStencil: divergent tail, exterior growth " +
                                std::to_string(analytic->growth) + " must be below 2 sigma = " +
                                std::to_string(2.0 * sigma));
  }
  const std::size_t n = grid_.n_points();
  const double h = grid_.dx();
  const double width = grid_.x_max() - grid_.x_min();
  const double s2 = 2.0 * sigma;
  scale_ = std::pow(h, -s2);
  r_cut_ = 10.0 * width;
  // Analytic exteriors have no closed-form remainder, so the cut moves out as the grid refines.
  if (analytic != nullptr) r_cut_ *= std::max(1.0, width / (64.0 * h));
  w_inf_ = std::pow(r_cut_, -s2) / s2;

  // Unit-spacing weights of the quadratic interpolant on [2p+1, 2p+3].
  const std::size_t p_max = (n + 1) / 2;
  static const GaussLegendre gl12(12);
  std::vector<double> pl(p_max);
  std::vector<double> pm(p_max);
  std::vector<double> pr(p_max);
  for (std::size_t p = 0; p < p_max; ++p) {
    const double a = 2.0 * static_cast<double>(p) + 1.0;
    double l = 0.0;
    double m = 0.0;
    double r = 0.0;
    for (std::size_t q = 0; q < gl12.size(); ++q) {
      const double v = a + 1.0 + gl12.nodes()[q];
      const double kw = gl12.weights()[q] * std::pow(v, -1.0 - s2);
      const double z = v - a;
      l += kw * (z - 1.0) * (z - 2.0) / 2.0;
      m += kw * (-z * (z - 2.0));
      r += kw * z * (z - 1.0) / 2.0;
    }
    pl[p] = l;
    pm[p] = m;
    pr[p] = r;
  }
  const double near = 1.0 / (2.0 - s2);
  w_inner_.assign(2 * p_max + 2, 0.0);
  for (std::size_t mm = 1; mm <= 2 * p_max + 1; ++mm) {
    double w = 0.0;
    if (mm == 1) {
      w = near + pl[0];
    } else if (mm % 2 == 1) {
      const std::size_t p = (mm - 1) / 2;
      w = pr[p - 1] + (p < p_max ? pl[p] : 0.0);
    } else {
      w = pm[(mm - 2) / 2];
    }
    w_inner_[mm] = w * scale_;
  }
  w_last_.assign(p_max + 1, 0.0);
  for (std::size_t p = 1; p <= p_max; ++p) w_last_[p] = pr[p - 1] * scale_;

  if (analytic != nullptr) {
    const std::size_t g = 2 * p_max + 3;
    ghost_left_.resize(g + 1);
    ghost_right_.resize(g + 1);
    for (std::size_t i = 1; i <= g; ++i) {
      ghost_left_[i] = analytic->value(grid_.x_min() - static_cast<double>(i) * h);
      ghost_right_[i] = analytic->value(grid_.x_max() + static_cast<double>(i) * h);
    }
  }

  // Graded panels on [Y_k, R_cut].
  static const GaussLegendre gl8(8);
  const GaussLegendre& gl = analytic != nullptr ? gl12 : gl8;
  tail_y_.resize(n);
  tail_w_.resize(n);
  if (analytic != nullptr) tail_s_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double y0 = static_cast<double>(2 * pairs_for(k) + 1) * h;
    double a = y0;
    while (a < r_cut_) {
      double b = std::min(1.25 * a, r_cut_);
      if (analytic != nullptr) b = std::min(b, a + width / 8.0);
      const double half = 0.5 * (b - a);
      const double mid = 0.5 * (a + b);
      for (std::size_t q = 0; q < gl.size(); ++q) {
        const double y = mid + half * gl.nodes()[q];
        tail_y_[k].push_back(y);
        tail_w_[k].push_back(gl.weights()[q] * half * std::pow(y, -1.0 - s2));
        if (analytic != nullptr) {
          const double x = grid_.x(static_cast<std::ptrdiff_t>(k));
          tail_s_[k].push_back(analytic->value(x + y) + analytic->value(x - y));
        }
      }
      a = b;
    }
  }
}

std::size_t NonlocalStencil::pairs_for(std::size_t k) const {
  const std::size_t n = grid_.n_points();
  const std::size_t reach = std::max(k, n - 1 - k) + 1;
  return reach / 2;  // smallest P with 2P + 1 >= reach
}

double NonlocalStencil::ghost(std::span<const double> u, std::ptrdiff_t i) const {
  const auto n = static_cast<std::ptrdiff_t>(grid_.n_points());
  const bool left = i < 0;
  return std::visit(
      [&](const auto& rule) -> double {
        using T = std::decay_t<decltype(rule)>;
        if constexpr (std::is_same_v<T, EdgeExtension>) {
          return left ? u.front() : u.back();
        } else if constexpr (std::is_same_v<T, ConstantExterior>) {
          return left ? rule.left : rule.right;
        } else {
          return left ? ghost_left_[static_cast<std::size_t>(-i)]
                      : ghost_right_[static_cast<std::size_t>(i - n + 1)];
        }
      },
      grid_.exterior());
}

double NonlocalStencil::exterior_sum_at_infinity(std::span<const double> u) const {
  return std::visit(
      [&](const auto& rule) -> double {
        using T = std::decay_t<decltype(rule)>;
        if constexpr (std::is_same_v<T, EdgeExtension>) {
          return u.front() + u.back();
        } else if constexpr (std::is_same_v<T, ConstantExterior>) {
          return rule.left + rule.right;
        } else {
          return 0.0;
        }
      },
      grid_.exterior());
}

double NonlocalStencil::total_weight(std::size_t k) const {
  const std::size_t pairs = pairs_for(k);
  double s = 0.0;
  for (std::size_t m = 1; m < 2 * pairs + 1; ++m) s += w_inner_[m];
  s += w_last_[pairs];
  for (double w : tail_w_[k]) s += w;
  return s + w_inf_;
}

double NonlocalStencil::max_total_weight() const {
  double best = 0.0;
  for (std::size_t k = 0; k < grid_.n_points(); ++k) best = std::max(best, total_weight(k));
  return best;
}

// ---------------------------------------------------------------------------

namespace {

void check_node(std::span<const double> u, const NonlocalStencil& st, std::size_t k) {
  if (u.size() != st.grid().n_points()) throw std::invalid_argument("operator: field size does not match the stencil grid");
  if (k >= u.size()) throw std::out_of_range("operator: node index out of range");
}

double pucci(const NonlocalStencil& st, std::span<const double> u, std::size_t k, double up,
             double down) {
  check_node(u, st, k);
  CompensatedSum s;
  st.visit(u, k, [&](double, double w, double d) {
    s.add(w * (d > 0.0 ? up * d : down * d));
  });
  return s.value();
}

}  // namespace

double pucci_plus(const NonlocalStencil& st, std::span<const double> u, std::size_t k,
                  const Ellipticity& ell) {
  return pucci(st, u, k, ell.Lambda(), ell.lambda());
}

double pucci_minus(const NonlocalStencil& st, std::span<const double> u, std::size_t k,
                   const Ellipticity& ell) {
  return pucci(st, u, k, ell.lambda(), ell.Lambda());
}

double pucci_plus(const SpatialField& u, std::size_t k, const Ellipticity& ell) {
  return pucci_plus(NonlocalStencil(u.grid(), ell.sigma()), u.values(), k, ell);
}

double pucci_minus(const SpatialField& u, std::size_t k, const Ellipticity& ell) {
  return pucci_minus(NonlocalStencil(u.grid(), ell.sigma()), u.values(), k, ell);
}

KernelFamily::KernelFamily(Ellipticity ell, std::vector<std::vector<KernelFn>> members,
                           const KernelProbe& probe)
    : ell_(ell), members_(std::move(members)) {
  if (members_.empty() || members_.front().empty()) throw std::invalid_argument("KernelFamily: empty family");
  const std::size_t cols = members_.front().size();
  const double tol = 1e-12 * ell_.Lambda();
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i].size() != cols) throw std::invalid_argument("KernelFamily: ragged member table");
    for (std::size_t j = 0; j < cols; ++j) {
      const auto& a = members_[i][j];
      if (!a) throw std::invalid_argument("KernelFamily: empty member callable");
      for (double t : probe.t) {
        for (double x : probe.x) {
          for (double y : probe.y) {
            const double ap = a(t, x, y);
            const double am = a(t, x, -y);
            const std::string where = " for member (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") at t=" + std::to_string(t) + " x=" + std::to_string(x) +
                                      " y=" + std::to_string(y);
            if (!std::isfinite(ap) || !std::isfinite(am)) throw std::invalid_argument("KernelFamily: non-finite value" + where);
            if (std::abs(ap - am) > tol) throw std::invalid_argument("KernelFamily: asymmetric kernel" + where);
            if (ap < ell_.lambda() - tol || ap > ell_.Lambda() + tol) {
              throw std::invalid_argument("KernelFamily: ellipticity bounds violated" + where);
            }
          }
        }
      }
    }
  }
}

KernelFamily KernelFamily::constants(Ellipticity ell, const std::vector<std::vector<double>>& values) {
  std::vector<std::vector<KernelFn>> members;
  for (const auto& row : values) {
    std::vector<KernelFn> r;
    for (double v : row) r.emplace_back([v](double, double, double) { return v; });
    members.push_back(std::move(r));
  }
  return KernelFamily(ell, std::move(members));
}

double isaacs_apply(const NonlocalStencil& st, std::span<const double> u, std::size_t k,
                    const KernelFamily& fam, double t) {
  check_node(u, st, k);
  struct Term {
    double y, w, d;
  };
  thread_local std::vector<Term> terms;
  terms.clear();
  st.visit(u, k, [&](double y, double w, double d) { terms.push_back({y, w, d}); });
  const double x = st.grid().x(static_cast<std::ptrdiff_t>(k));
  double best = 0.0;
  for (std::size_t i = 0; i < fam.rows(); ++i) {
    double row_min = 0.0;
    for (std::size_t j = 0; j < fam.cols(); ++j) {
      CompensatedSum s;
      for (const auto& term : terms) s.add(term.w * fam(i, j, t, x, term.y) * term.d);
      const double v = s.value();
      if (j == 0 || v < row_min) row_min = v;
    }
    if (i == 0 || row_min > best) best = row_min;
  }
  return best;
}

double isaacs_apply(const SpatialField& u, std::size_t k, const KernelFamily& fam, double t) {
  return isaacs_apply(NonlocalStencil(u.grid(), fam.ell().sigma()), u.values(), k, fam, t);
}

NonlocalOperator::NonlocalOperator(const SpaceGrid& grid, Ellipticity ell, OperatorChoice choice)
    : stencil_(grid, ell.sigma()), ell_(ell), choice_(std::move(choice)) {
  if (const auto* fam = std::get_if<KernelFamily>(&choice_)) {
    if (fam->ell().sigma() != ell.sigma() || fam->ell().Lambda() > ell.Lambda() ||
        fam->ell().lambda() < ell.lambda()) {
      throw std::invalid_argument("NonlocalOperator: kernel family constants are incompatible");
    }
  }
}

double NonlocalOperator::apply_at(std::span<const double> u, std::size_t k, double t) const {
  if (const auto* ext = std::get_if<Extremal>(&choice_)) {
    return *ext == Extremal::plus ? pucci_plus(stencil_, u, k, ell_) : pucci_minus(stencil_, u, k, ell_);
  }
  return isaacs_apply(stencil_, u, k, std::get<KernelFamily>(choice_), t);
}

void NonlocalOperator::apply(std::span<const double> u, double t, std::span<double> out) const {
  if (out.size() != u.size()) throw std::invalid_argument("NonlocalOperator: output size mismatch");
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = apply_at(u, k, t);
}

}  // namespace nlfrac
