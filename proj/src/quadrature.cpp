#include "nlfrac/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace nlfrac {

GaussLegendre::GaussLegendre(std::size_t n) : nodes_(n), weights_(n) {
  if (n == 0) throw std::invalid_argument("GaussLegendre: need at least one node");
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes_[i] = -x;
    nodes_[n - 1 - i] = x;
    weights_[i] = w;
    weights_[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes_[n / 2] = 0.0;
}

double GaussLegendre::integrate(const std::function<double(double)>& f, double a,
                                double b) const {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(mid + half * nodes_[i]);
  return s * half;
}

namespace {

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082,
                           0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975,
                           0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double fsum = f(c - dx) + f(c + dx);
    kron += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace

QuadResult adaptive_gk15(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, double rel_tol, std::size_t max_intervals) {
  if (a == b) return {};
  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  double total = first.value;
  double err = first.error;
  heap.push(first);
  std::size_t count = 1;
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (count >= max_intervals) {
      return {total, err, false};
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      return {total, err, false};
    }
    Segment left = gk15(f, worst.a, mid);
    Segment right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum the accepted segments in a fixed order to avoid drift from the
  // incremental updates above.
  std::vector<Segment> segs;
  segs.reserve(heap.size());
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(), [](const Segment& l, const Segment& r) { return l.a < r.a; });
  CompensatedSum s;
  double e = 0.0;
  for (const auto& seg : segs) {
    s.add(seg.value);
    e += seg.error;
  }
  return {s.value(), e, true};
}

QuadResult integrate_half_line(const std::function<double(double)>& g, double center,
                               const HalfLineOptions& opts) {
  if (!(center > 0.0) || !std::isfinite(center)) center = 1.0;
  const double xc = std::log(center);
  auto mapped = [&](double x) {
    const double r = std::exp(x);
    return g(r) * r;
  };

  CompensatedSum total;
  QuadResult out;
  for (int dir : {+1, -1}) {
    std::size_t quiet = 0;
    bool done = false;
    for (std::size_t p = 0; p < opts.max_panels; ++p) {
      const double lo = dir > 0 ? xc + static_cast<double>(p) : xc - static_cast<double>(p + 1);
      const double hi = lo + 1.0;
      // Beyond this range exp(x) either underflows or overflows.
      if (lo < -700.0 || hi > 700.0) {
        done = quiet > 0;
        break;
      }
      const double scale = std::abs(total.value());
      QuadResult panel = adaptive_gk15(mapped, lo, hi, 1e-3 * opts.rel_tol * scale,
                                       1e-2 * opts.rel_tol, 400);
      if (!std::isfinite(panel.value)) return {panel.value, panel.error, false};
      total.add(panel.value);
      out.error += panel.error;
      const double now = std::abs(total.value());
      if (std::abs(panel.value) <= opts.rel_tol * now || (now == 0.0 && panel.value == 0.0)) {
        ++quiet;
      } else {
        quiet = 0;
      }
      if (p + 1 >= opts.min_panels && quiet >= opts.quiet_panels) {
        done = true;
        break;
      }
    }
    if (!done) {
      out.value = total.value();
      out.converged = false;
      return out;
    }
  }
  out.value = total.value();
  return out;
}

}  // namespace nlfrac
