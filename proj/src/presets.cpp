#include "nlfrac/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace nlfrac {

Preset parse_preset(std::string_view name) {
  if (name == "constant") return Preset::constant;
  if (name == "bump") return Preset::bump;
  if (name == "half_negative") return Preset::half_negative;
  if (name == "adversarial") return Preset::adversarial;
  if (name == "planted_exponent") return Preset::planted_exponent;
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

std::string preset_name(Preset p) {
  switch (p) {
    case Preset::constant: return "constant";
    case Preset::bump: return "bump";
    case Preset::half_negative: return "half_negative";
    case Preset::adversarial: return "adversarial";
    case Preset::planted_exponent: return "planted_exponent";
  }
  return "unknown";
}

PresetData make_preset(Preset p, const PresetParams& params) {
  if (!(params.width > 0.0)) throw std::invalid_argument("preset width must be positive");
  const double f0 = params.forcing;
  PresetData d;
  d.forcing = [f0](double, double) { return f0; };
  switch (p) {
    case Preset::constant: {
      const double c = params.value;
      d.initial = [c](double) { return c; };
      d.exterior = ConstantExterior{c, c};
      break;
    }
    case Preset::bump: {
      const double a = params.amplitude;
      const double c = params.center;
      const double w = params.width;
      d.initial = [a, c, w](double x) { return a * std::exp(-((x - c) / w) * ((x - c) / w)); };
      d.exterior = ConstantExterior{0.0, 0.0};
      break;
    }
    case Preset::half_negative: {
      const double a = params.amplitude;
      const double w = params.width;
      d.initial = [a, w](double x) { return a * std::tanh(x / w); };
      d.exterior = ConstantExterior{-a, a};
      break;
    }
    case Preset::adversarial: {
      const double a = params.amplitude;
      const double w = params.width;
      const double nu = params.nu;
      d.initial = [a, w](double x) { return a * std::exp(-(x / w) * (x / w)); };
      d.exterior = AnalyticExterior{[nu](double x) { return -(2.0 * std::pow(std::abs(4.0 * x), nu) - 1.0); }, nu};
      break;
    }
    case Preset::planted_exponent:
      throw std::invalid_argument("planted_exponent is a synthetic field, not solver data");
  }
  return d;
}

AssembledProblem assemble(const PresetData& data, OperatorChoice op, const Ellipticity& ell,
                          FracOrder alpha, double x_min, double x_max, std::size_t n_points) {
  ProblemSpec spec{std::move(op), ell, alpha, data.forcing, data.initial, data.past};
  return {std::move(spec), SpaceGrid(x_min, x_max, n_points, data.exterior)};
}

Field planted_field(const SpaceTimeGrid& grid, double space_exponent, double time_exponent,
                    double x0, double t0) {
  if (space_exponent < 0.0 || time_exponent < 0.0) {
    throw std::invalid_argument("planted_field: exponents must be nonnegative");
  }
  const std::size_t n = grid.space.n_points();
  std::vector<double> v(grid.time.size() * n);
  for (std::size_t k = 0; k < grid.time.size(); ++k) {
    const double dt = std::abs(grid.time.at(k) - t0);
    const double tt = time_exponent > 0.0 ? std::pow(dt, time_exponent) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = std::abs(grid.space.x(static_cast<std::ptrdiff_t>(i)) - x0);
      const double xx = space_exponent > 0.0 ? std::pow(dx, space_exponent) : 0.0;
      v[k * n + i] = xx + tt;
    }
  }
  return Field(grid, std::move(v));
}

}  // namespace nlfrac
