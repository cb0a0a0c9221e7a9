#include "nlfrac/pde_solver.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "nlfrac/errors.hpp"

namespace nlfrac {

Field::Field(SpaceTimeGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.time.size() * grid_.space.n_points()) {
    throw std::invalid_argument("Field: value count does not match the grid");
  }
  if (!(grid_.sigma > 0.0 && grid_.sigma < 1.0)) throw std::invalid_argument("Field: sigma must lie in (0, 1)");
}

SpatialField Field::slice(std::size_t k) const {
  if (k >= n_times()) throw std::out_of_range("Field::slice: time index out of range");
  const auto r = row(k);
  return SpatialField(grid_.space, std::vector<double>(r.begin(), r.end()));
}

double max_stable_dt(const SpaceGrid& space, const Ellipticity& ell, FracOrder alpha, double c_stab) {
  if (!(c_stab > 0.0 && c_stab <= 1.0)) throw std::invalid_argument("max_stable_dt: c_stab must lie in (0, 1]");
  const NonlocalStencil st(space, ell.sigma());
  const double d = 2.0 * ell.Lambda() * st.max_total_weight();
  const double a = alpha.value();
  const double room = c_stab * (2.0 - std::pow(2.0, 1.0 - a));
  return std::pow(room / (std::tgamma(2.0 - a) * d), 1.0 / a);
}

namespace {

NonlocalOperator make_operator(const ProblemSpec& spec, const SpaceTimeGrid& grid) {
  if (!(spec.alpha == grid.alpha)) throw std::invalid_argument("Solver: alpha differs between spec and grid");
  if (spec.ell.sigma() != grid.sigma) throw std::invalid_argument("Solver: sigma differs between spec and grid");
  if (!spec.forcing) throw std::invalid_argument("Solver: missing forcing");
  if (!spec.initial) throw std::invalid_argument("Solver: missing initial data");
  return NonlocalOperator(grid.space, spec.ell, spec.op);
}

}  // namespace

Solver::Solver(ProblemSpec spec, SpaceTimeGrid grid, SolverOptions opts)
    : spec_(std::move(spec)), grid_(std::move(grid)), opts_(opts), op_(make_operator(spec_, grid_)) {
  const double limit = max_stable_dt(grid_.space, spec_.ell, grid_.alpha, opts_.c_stab);
  if (grid_.time.dt() > limit * (1.0 + 1e-12)) {
    throw std::invalid_argument("Solver: dt = " + std::to_string(grid_.time.dt()) +
                                " exceeds the monotonicity limit " + std::to_string(limit));
  }
  const std::size_t n = grid_.space.n_points();
  const std::size_t steps = grid_.time.n_steps();
  l1_b_ = l1_weights(grid_.alpha, steps + 1);

  if (spec_.past && !grid_.alpha.is_classical()) {
    const auto& past = *spec_.past;
    if (!past.value) throw std::invalid_argument("Solver: past data needs a callable");
    if (!(past.growth >= 0.0 && past.growth < grid_.alpha.value())) {
      throw std::invalid_argument("Solver: past growth must lie in [0, alpha)");
    }
    past_.assign((steps + 1) * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = grid_.space.x(static_cast<std::ptrdiff_t>(i));
      const AnalyticTail tail{[&past, x](double t) { return past.value(x, t); }, past.growth};
      const double u0 = spec_.initial(x);
      for (std::size_t k = 1; k <= steps; ++k) {
        past_[k * n + i] = past_tail_correction(tail, u0, grid_.time.t_start(), grid_.time.at(k), grid_.alpha);
      }
    }
  }
}

Field Solver::initial_field() const {
  const std::size_t n = grid_.space.n_points();
  std::vector<double> values(grid_.time.size() * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = spec_.initial(grid_.space.x(static_cast<std::ptrdiff_t>(i)));
    if (!std::isfinite(v)) throw std::invalid_argument("Solver: non-finite initial value at node " + std::to_string(i));
    values[i] = v;
  }
  return Field(grid_, std::move(values));
}

void Solver::step(Field& u, std::size_t k) const {
  if (k < 1 || k > grid_.time.n_steps()) throw std::out_of_range("Solver::step: time index out of range");
  const std::size_t n = grid_.space.n_points();
  const double tk = grid_.time.at(k);
  const double dt = grid_.time.dt();
  const auto prev = u.row(k - 1);
  thread_local std::vector<double> op_values;
  op_values.resize(n);
  op_.apply(prev, grid_.time.at(k - 1), op_values);

  auto next = u.row(k);
  const bool classical = grid_.alpha.is_classical();
  const double alpha = grid_.alpha.value();
  const double c = classical ? 1.0 / dt : std::pow(dt, -alpha) / std::tgamma(2.0 - alpha);

  // History sums H_i = sum_{j=1}^{k-1} b_{k-j} (u_j - u_{j-1}), Neumaier-compensated
  // per node and accumulated in ascending j.
  thread_local std::vector<double> hsum;
  thread_local std::vector<double> hcomp;
  hsum.assign(n, 0.0);
  hcomp.assign(n, 0.0);
  if (!classical) {
    for (std::size_t j = 1; j < k; ++j) {
      const double b = l1_b_[k - j];
      const auto rj = u.row(j);
      const auto rm = u.row(j - 1);
      for (std::size_t i = 0; i < n; ++i) {
        const double x = b * (rj[i] - rm[i]);
        const double t = hsum[i] + x;
        if (std::abs(hsum[i]) >= std::abs(x)) {
          hcomp[i] += (hsum[i] - t) + x;
        } else {
          hcomp[i] += (x - t) + hsum[i];
        }
        hsum[i] = t;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid_.space.x(static_cast<std::ptrdiff_t>(i));
    double rhs = spec_.forcing(x, tk) + op_values[i];
    if (!classical) {
      rhs -= c * (hsum[i] + hcomp[i]);
      if (!past_.empty()) rhs -= past_[k * n + i];
    }
    const double v = prev[i] + rhs / c;
    if (!std::isfinite(v)) {
      throw NumericalError("Solver: non-finite value at time index " + std::to_string(k) +
                           ", node " + std::to_string(i) + " (x = " + std::to_string(x) + ")");
    }
    next[i] = v;
  }
}

Field Solver::solve() const {
  Field u = initial_field();
  for (std::size_t k = 1; k <= grid_.time.n_steps(); ++k) step(u, k);
  return u;
}

Field solve(const ProblemSpec& spec, const SpaceTimeGrid& grid, SolverOptions opts) {
  return Solver(spec, grid, opts).solve();
}

namespace {

constexpr char kMagic[8] = {'N', 'L', 'F', 'R', 'A', 'C', 'F', '1'};

template <class T>
void put(std::ostream& os, T v) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits = 0;
  std::memcpy(&bits, &v, 8);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  os.write(reinterpret_cast<const char*>(&bits), 8);
}

template <class T>
T get(std::istream& is) {
  std::uint64_t bits = 0;
  is.read(reinterpret_cast<char*>(&bits), 8);
  if (!is) throw std::runtime_error("read_checkpoint: truncated file");
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  T v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void write_checkpoint(const Field& u, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_checkpoint: cannot open " + path.string());
  const auto& g = u.grid();
  os.write(kMagic, 8);
  put<double>(os, g.space.x_min());
  put<double>(os, g.space.x_max());
  put<std::uint64_t>(os, g.space.n_points());
  put<double>(os, g.time.t_start());
  put<double>(os, g.time.dt());
  put<std::uint64_t>(os, g.time.n_steps());
  put<double>(os, g.alpha.value());
  put<double>(os, g.sigma);
  for (double v : u.values()) put<double>(os, v);
  if (!os) throw std::runtime_error("write_checkpoint: write failed for " + path.string());
}

Field read_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_checkpoint: cannot open " + path.string());
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0) throw std::runtime_error("read_checkpoint: bad magic");
  const double x_min = get<double>(is);
  const double x_max = get<double>(is);
  const auto n_points = get<std::uint64_t>(is);
  const double t_start = get<double>(is);
  const double dt = get<double>(is);
  const auto n_steps = get<std::uint64_t>(is);
  const double alpha = get<double>(is);
  const double sigma = get<double>(is);
  SpaceTimeGrid grid{SpaceGrid(x_min, x_max, n_points), TimeGrid(t_start, dt, n_steps), FracOrder(alpha), sigma};
  std::vector<double> values((n_steps + 1) * n_points);
  for (double& v : values) v = get<double>(is);
  return Field(std::move(grid), std::move(values));
}

}  // namespace nlfrac
