#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "nlfrac/pde_solver.hpp"

namespace nlfrac {

/// Named data sets used by the CLI and the tests.
///   constant        u = value everywhere, f = forcing.
///   bump            Gaussian bump amplitude * exp(-((x - center)/width)^2), zero exterior.
///   half_negative   smooth step amplitude * tanh(x / width): u <= 0 on the left half
///                   of the ball for all past times, exterior -amplitude / +amplitude.
///   adversarial     centered bump with the largest admissible opposite-sign exterior
///                   -(2|4x|^nu - 1).
///   planted_exponent  synthetic field |x - x0|^a + |t - t0|^b (see planted_field); not solver data.
enum class Preset { constant, bump, half_negative, adversarial, planted_exponent };

Preset parse_preset(std::string_view name);
std::string preset_name(Preset p);

struct PresetParams {
  double value = 1.0;
  double amplitude = 1.0;
  double center = 0.3;
  double width = 0.25;
  double nu = 0.3;
  double forcing = 0.0;
};

struct PresetData {
  std::function<double(double)> initial;
  ExteriorRule exterior;
  std::optional<PastData> past;
  std::function<double(double, double)> forcing;
};

PresetData make_preset(Preset p, const PresetParams& params = {});

/// Assembles a problem and its grid from preset data: the space grid spans
/// [x_min, x_max] with n_points nodes under the preset's exterior rule.
struct AssembledProblem {
  ProblemSpec spec;
  SpaceGrid space;
};
AssembledProblem assemble(const PresetData& data, OperatorChoice op, const Ellipticity& ell,
                          FracOrder alpha, double x_min, double x_max, std::size_t n_points);

/// u(x, t) = |x - x0|^space_exponent + |t - t0|^time_exponent sampled on the
/// grid; an exponent of zero drops that term.
Field planted_field(const SpaceTimeGrid& grid, double space_exponent, double time_exponent,
                    double x0, double t0);

}  // namespace nlfrac
