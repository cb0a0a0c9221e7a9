#include "nlfrac/cli_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlfrac/errors.hpp"
#include "nlfrac/fractional_time.hpp"
#include "nlfrac/mittag_leffler.hpp"
#include "nlfrac/presets.hpp"
#include "nlfrac/regularity.hpp"

#ifndef NLFRAC_VERSION
#define NLFRAC_VERSION "0.0.0"
#endif

namespace nlfrac {

using json = nlohmann::ordered_json;

Mode parse_mode(std::string_view name) {
  if (name == "ml") return Mode::ml;
  if (name == "caputo") return Mode::caputo;
  if (name == "fode") return Mode::fode;
  if (name == "solve") return Mode::solve;
  if (name == "holder") return Mode::holder;
  if (name == "sweep") return Mode::sweep;
  throw ConfigError("unknown mode '" + std::string(name) + "'");
}

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::ml: return "ml";
    case Mode::caputo: return "caputo";
    case Mode::fode: return "fode";
    case Mode::solve: return "solve";
    case Mode::holder: return "holder";
    case Mode::sweep: return "sweep";
  }
  return "unknown";
}

namespace {

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double num(const json& obj, const char* key, double def, const std::string& where) {
  if (!obj.contains(key)) return def;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + "." + key + ": must be finite");
  return d;
}

std::size_t count(const json& obj, const char* key, std::size_t def, const std::string& where) {
  if (!obj.contains(key)) return def;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(where + "." + key + ": expected a nonnegative integer");
  }
  return v.get<std::size_t>();
}

std::string text(const json& obj, const char* key, const std::string& def, const std::string& where) {
  if (!obj.contains(key)) return def;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

json echo_config(const ExperimentConfig& c) {
  json j;
  j["mode"] = mode_name(c.mode);
  j["alpha"] = c.alpha;
  j["alphas"] = c.alphas;
  j["sigma"] = c.sigma;
  j["lambda"] = c.lambda;
  j["Lambda"] = c.Lambda;
  j["C1"] = c.C1;
  j["epsilon0"] = c.epsilon0;
  j["nu"] = c.nu;
  j["c_stab"] = c.c_stab;
  j["depth"] = c.depth;
  j["ratio"] = c.ratio;
  j["operator"] = c.op;
  j["history"] = c.history;
  j["time"] = {{"t_start", c.time.t_start}, {"t_end", c.time.t_end}, {"n_steps", c.time.n_steps}};
  j["space"] = {{"x_min", c.space.x_min}, {"x_max", c.space.x_max}, {"n_points", c.space.n_points}};
  j["ml"] = {{"t_min", c.ml.t_min}, {"t_max", c.ml.t_max}, {"n_points", c.ml.n_points}};
  j["data"] = {{"preset", c.data.preset},       {"value", c.data.value},
               {"amplitude", c.data.amplitude}, {"center", c.data.center},
               {"width", c.data.width},         {"forcing", c.data.forcing},
               {"space_exponent", c.data.space_exponent}, {"time_exponent", c.data.time_exponent},
               {"x0", c.data.x0},               {"t0", c.data.t0}};
  j["output"] = {{"dir", c.output.dir}, {"checkpoint", c.output.checkpoint}};
  return j;
}

}  // namespace

ExperimentConfig parse_config(std::string_view source, Mode mode) {
  json j;
  try {
    j = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const std::string top = "config";
  check_keys(j, {"mode", "alpha", "alphas", "sigma", "lambda", "Lambda", "C1", "epsilon0", "nu", "c_stab", "depth",
                 "ratio", "operator", "history", "time", "space", "ml", "data", "output"},
             top);
  ExperimentConfig c;
  c.mode = mode;
  if (j.contains("mode")) {
    require(j.at("mode").is_string(), "config.mode: expected a string");
    require(parse_mode(j.at("mode").get<std::string>()) == mode, "config.mode does not match the command-line mode");
  }
  c.alpha = num(j, "alpha", c.alpha, top);
  require(c.alpha > 0.0 && c.alpha <= 1.0, "config.alpha must lie in (0, 1]");
  if (j.contains("alphas")) {
    const auto& a = j.at("alphas");
    require(a.is_array() && !a.empty(), "config.alphas: expected a nonempty array");
    c.alphas.clear();
    for (const auto& v : a) {
      require(v.is_number(), "config.alphas: expected numbers");
      const double d = v.get<double>();
      require(d > 0.0 && d <= 1.0, "config.alphas entries must lie in (0, 1]");
      c.alphas.push_back(d);
    }
  }
  c.sigma = num(j, "sigma", c.sigma, top);
  require(c.sigma > 0.0 && c.sigma < 1.0, "config.sigma must lie in (0, 1)");
  c.lambda = num(j, "lambda", c.lambda, top);
  c.Lambda = num(j, "Lambda", c.Lambda, top);
  require(c.lambda > 0.0 && c.Lambda >= c.lambda, "config needs 0 < lambda <= Lambda");
  c.C1 = num(j, "C1", c.C1, top);
  require(c.C1 >= 0.0, "config.C1 must be >= 0");
  c.epsilon0 = num(j, "epsilon0", c.epsilon0, top);
  require(c.epsilon0 > 0.0, "config.epsilon0 must be > 0");
  c.nu = num(j, "nu", c.nu, top);
  require(c.nu >= 0.0 && c.nu < 2.0 * c.sigma, "config.nu must lie in [0, 2 sigma)");
  c.c_stab = num(j, "c_stab", c.c_stab, top);
  require(c.c_stab > 0.0 && c.c_stab <= 1.0, "config.c_stab must lie in (0, 1]");
  c.depth = count(j, "depth", c.depth, top);
  require(c.depth >= 2, "config.depth must be at least 2");
  c.ratio = num(j, "ratio", c.ratio, top);
  require(c.ratio > 0.0 && c.ratio < 1.0, "config.ratio must lie in (0, 1)");
  c.op = text(j, "operator", c.op, top);
  require(c.op == "pucci_plus" || c.op == "pucci_minus", "config.operator must be pucci_plus or pucci_minus");
  c.history = text(j, "history", c.history, top);
  require(c.history == "power" || c.history == "linear" || c.history == "constant" || c.history == "random",
          "config.history must be one of power, linear, constant, random");

  if (mode == Mode::solve || mode == Mode::holder || mode == Mode::sweep) {
    c.time = TimeSection{-1.0, 0.0, 0};
  }
  if (j.contains("time")) {
    const auto& t = j.at("time");
    check_keys(t, {"t_start", "t_end", "n_steps"}, "config.time");
    c.time.t_start = num(t, "t_start", c.time.t_start, "config.time");
    c.time.t_end = num(t, "t_end", c.time.t_end, "config.time");
    c.time.n_steps = count(t, "n_steps", c.time.n_steps, "config.time");
  }
  require(c.time.t_end > c.time.t_start, "config.time: t_end must exceed t_start");
  if (mode == Mode::caputo || mode == Mode::fode) require(c.time.n_steps >= 1, "config.time.n_steps must be >= 1");
  if (j.contains("space")) {
    const auto& s = j.at("space");
    check_keys(s, {"x_min", "x_max", "n_points"}, "config.space");
    c.space.x_min = num(s, "x_min", c.space.x_min, "config.space");
    c.space.x_max = num(s, "x_max", c.space.x_max, "config.space");
    c.space.n_points = count(s, "n_points", c.space.n_points, "config.space");
  }
  require(c.space.x_max > c.space.x_min, "config.space: x_max must exceed x_min");
  require(c.space.n_points >= 2, "config.space.n_points must be >= 2");
  if (j.contains("ml")) {
    const auto& m = j.at("ml");
    check_keys(m, {"t_min", "t_max", "n_points"}, "config.ml");
    c.ml.t_min = num(m, "t_min", c.ml.t_min, "config.ml");
    c.ml.t_max = num(m, "t_max", c.ml.t_max, "config.ml");
    c.ml.n_points = count(m, "n_points", c.ml.n_points, "config.ml");
  }
  require(c.ml.t_max >= c.ml.t_min && c.ml.n_points >= 1, "config.ml: need t_min <= t_max and n_points >= 1");
  if (c.ml.n_points == 1) require(c.ml.t_max == c.ml.t_min, "config.ml: a single point needs t_min == t_max");
  if (j.contains("data")) {
    const auto& d = j.at("data");
    check_keys(d, {"preset", "value", "amplitude", "center", "width", "forcing", "space_exponent", "time_exponent",
                   "x0", "t0"},
               "config.data");
    c.data.preset = text(d, "preset", c.data.preset, "config.data");
    c.data.value = num(d, "value", c.data.value, "config.data");
    c.data.amplitude = num(d, "amplitude", c.data.amplitude, "config.data");
    c.data.center = num(d, "center", c.data.center, "config.data");
    c.data.width = num(d, "width", c.data.width, "config.data");
    c.data.forcing = num(d, "forcing", c.data.forcing, "config.data");
    c.data.space_exponent = num(d, "space_exponent", c.data.space_exponent, "config.data");
    c.data.time_exponent = num(d, "time_exponent", c.data.time_exponent, "config.data");
    c.data.x0 = num(d, "x0", c.data.x0, "config.data");
    c.data.t0 = num(d, "t0", c.data.t0, "config.data");
  }
  try {
    (void)parse_preset(c.data.preset);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config.data.preset: ") + e.what());
  }
  require(c.data.width > 0.0, "config.data.width must be > 0");
  require(c.data.space_exponent >= 0.0 && c.data.time_exponent >= 0.0, "config.data exponents must be >= 0");
  if (j.contains("output")) {
    const auto& o = j.at("output");
    check_keys(o, {"dir", "checkpoint"}, "config.output");
    c.output.dir = text(o, "dir", c.output.dir, "config.output");
    if (o.contains("checkpoint")) {
      require(o.at("checkpoint").is_boolean(), "config.output.checkpoint: expected a boolean");
      c.output.checkpoint = o.at("checkpoint").get<bool>();
    }
  }
  c.echo = echo_config(c).dump(2);
  return c;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& p, const std::string& body) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
  os << body;
  if (!os) throw std::runtime_error("write failed for " + p.string());
}

class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      if (!first) os_ << ',';
      os_ << h;
      first = false;
    }
    os_ << "\r\n";
  }
  template <class... T>
  void row(const T&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
    os_ << "\r\n";
  }
  std::string str() const { return os_.str(); }

 private:
  static std::string cell(double v) { return std::isfinite(v) ? fmt(v) : std::string(); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  std::ostringstream os_;
};

Ellipticity make_ell(const ExperimentConfig& c) { return Ellipticity(c.lambda, c.Lambda, c.sigma); }

OperatorChoice make_op(const ExperimentConfig& c) {
  return c.op == "pucci_plus" ? OperatorChoice{Extremal::plus} : OperatorChoice{Extremal::minus};
}

PresetParams preset_params(const ExperimentConfig& c) {
  PresetParams p;
  p.value = c.data.value;
  p.amplitude = c.data.amplitude;
  p.center = c.data.center;
  p.width = c.data.width;
  p.nu = c.nu;
  p.forcing = c.data.forcing;
  return p;
}

struct Assembled {
  ProblemSpec spec;
  SpaceTimeGrid grid;
};

Assembled assemble_from(const ExperimentConfig& c, FracOrder alpha) {
  const Preset preset = parse_preset(c.data.preset);
  if (preset == Preset::planted_exponent) throw ConfigError("preset planted_exponent cannot drive a solve");
  const Ellipticity ell = make_ell(c);
  AssembledProblem ap = assemble(make_preset(preset, preset_params(c)), make_op(c), ell, alpha, c.space.x_min,
                                 c.space.x_max, c.space.n_points);
  const TimeGrid tg = c.time.n_steps == 0
                          ? stable_time_grid(ap.space, ell, alpha, c.time.t_start, c.time.t_end, c.c_stab)
                          : TimeGrid::spanning(c.time.t_start, c.time.t_end, c.time.n_steps);
  SpaceTimeGrid grid{ap.space, tg, alpha, c.sigma};
  return {std::move(ap.spec), std::move(grid)};
}

using Paths = std::vector<std::filesystem::path>;

void run_ml(const ExperimentConfig& c, const std::filesystem::path& dir, Paths& files) {
  const FracOrder a(c.alpha);
  Csv csv({"t", "E", "E_deriv"});
  for (std::size_t i = 0; i < c.ml.n_points; ++i) {
    const double t = c.ml.n_points == 1
                         ? c.ml.t_min
                         : c.ml.t_min + (c.ml.t_max - c.ml.t_min) * static_cast<double>(i) /
                                            static_cast<double>(c.ml.n_points - 1);
    csv.row(t, mittag_leffler(a, t), mittag_leffler_deriv(a, t));
  }
  files.push_back(dir / "ml.csv");
  write_text(files.back(), csv.str());
}

void run_caputo(const ExperimentConfig& c, const std::filesystem::path& dir, std::uint64_t seed, Paths& files) {
  const FracOrder a(c.alpha);
  const TimeGrid g = TimeGrid::spanning(c.time.t_start, c.time.t_end, c.time.n_steps);
  const double t0 = g.t_start();
  std::vector<double> v(g.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double s = g.at(k) - t0;
    if (c.history == "power") v[k] = std::pow(s, c.alpha);
    else if (c.history == "linear") v[k] = s;
    else if (c.history == "constant") v[k] = c.data.value;
    else v[k] = uni(rng);
  }
  const History h(g, v);
  const auto d = caputo_eval_series(h, a);
  Csv csv({"k", "t", "value", "caputo", "exact"});
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double s = g.at(k) - t0;
    double exact = std::nan("");
    if (c.history == "power") exact = k == 0 ? 0.0 : std::tgamma(1.0 + c.alpha);
    else if (c.history == "linear") exact = k == 0 ? 0.0 : std::pow(s, 1.0 - c.alpha) / std::tgamma(2.0 - c.alpha);
    else if (c.history == "constant") exact = 0.0;
    csv.row(k, g.at(k), v[k], d[k], exact);
  }
  files.push_back(dir / "caputo.csv");
  write_text(files.back(), csv.str());
}

void run_fode(const ExperimentConfig& c, const std::filesystem::path& dir, Paths& files) {
  const FracOrder a(c.alpha);
  const TimeGrid g = TimeGrid::spanning(c.time.t_start, c.time.t_end, c.time.n_steps);
  const Preset p = parse_preset(c.data.preset);
  std::function<double(double)> f;
  if (p == Preset::constant) {
    const double v = c.data.value;
    f = [v](double) { return v; };
  } else if (p == Preset::bump) {
    const double am = c.data.amplitude;
    const double ce = c.data.center;
    const double w = c.data.width;
    f = [=](double t) { return am * std::exp(-((t - ce) / w) * ((t - ce) / w)); };
  } else {
    throw ConfigError("fode mode supports the constant and bump presets");
  }
  const History fh = History::sample(g, f);
  const History ue = solve_fode_explicit(a, c.C1, fh);
  const History ul = solve_fode_l1(a, c.C1, fh);
  Csv csv({"k", "t", "f", "explicit", "l1", "abs_diff"});
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double diff = std::abs(ue[k] - ul[k]);
    worst = std::max(worst, diff);
    csv.row(k, g.at(k), fh[k], ue[k], ul[k], diff);
  }
  files.push_back(dir / "fode.csv");
  write_text(files.back(), csv.str());
  json s;
  s["alpha"] = c.alpha;
  s["C1"] = c.C1;
  s["n_steps"] = g.n_steps();
  s["max_abs_diff"] = worst;
  files.push_back(dir / "fode_summary.json");
  write_text(files.back(), s.dump(2) + "\n");
}

void write_field_csv(const Field& u, const std::filesystem::path& p) {
  Csv csv({"k", "t", "i", "x", "u"});
  const auto& g = u.grid();
  for (std::size_t k = 0; k < u.n_times(); ++k) {
    for (std::size_t i = 0; i < u.n_points(); ++i) {
      csv.row(k, g.time.at(k), i, g.space.x(static_cast<std::ptrdiff_t>(i)), u.at(k, i));
    }
  }
  write_text(p, csv.str());
}

void run_solve(const ExperimentConfig& c, const std::filesystem::path& dir, Paths& files) {
  const Assembled as = assemble_from(c, FracOrder(c.alpha));
  const Field u = solve(as.spec, as.grid, SolverOptions{c.c_stab});
  files.push_back(dir / "solution.csv");
  write_field_csv(u, files.back());
  double sup = 0.0;
  for (double v : u.values()) sup = std::max(sup, std::abs(v));
  json s;
  s["alpha"] = c.alpha;
  s["sigma"] = c.sigma;
  s["n_points"] = u.n_points();
  s["n_steps"] = as.grid.time.n_steps();
  s["dt"] = as.grid.time.dt();
  s["dt_limit"] = max_stable_dt(as.grid.space, as.spec.ell, as.grid.alpha, c.c_stab);
  s["sup_abs"] = sup;
  files.push_back(dir / "solve_summary.json");
  write_text(files.back(), s.dump(2) + "\n");
  if (c.output.checkpoint) {
    files.push_back(dir / "field.bin");
    write_checkpoint(u, files.back());
  }
}

HolderOptions holder_options(const ExperimentConfig& c) {
  HolderOptions h;
  h.ratio = c.ratio;
  h.depth = c.depth;
  return h;
}

void run_holder(const ExperimentConfig& c, const std::filesystem::path& dir, Paths& files) {
  const Preset p = parse_preset(c.data.preset);
  OscillationReport rep;
  if (p == Preset::planted_exponent) {
    require(c.time.n_steps >= 1, "config.time.n_steps must be >= 1 for planted fields");
    const FracOrder a(c.alpha);
    const SpaceTimeGrid grid{SpaceGrid(c.space.x_min, c.space.x_max, c.space.n_points),
                             TimeGrid::spanning(c.time.t_start, c.time.t_end, c.time.n_steps), a, c.sigma};
    const Field u = planted_field(grid, c.data.space_exponent, c.data.time_exponent, c.data.x0, c.data.t0);
    rep = fit_holder(u, c.data.x0, c.data.t0, holder_options(c));
  } else {
    const Assembled as = assemble_from(c, FracOrder(c.alpha));
    const Field u = solve(as.spec, as.grid, SolverOptions{c.c_stab});
    rep = fit_holder(u, c.data.x0, as.grid.time.t_end(), holder_options(c));
  }
  files.push_back(dir / "report.json");
  write_text(files.back(), report_to_json(rep) + "\n");
  files.push_back(dir / "report.csv");
  write_text(files.back(), report_to_csv(rep));
}

void run_sweep(const ExperimentConfig& c, const std::filesystem::path& dir, Paths& files) {
  const Assembled as = assemble_from(c, FracOrder(c.alphas.front()));
  SweepOptions opts;
  opts.holder = holder_options(c);
  opts.solver.c_stab = c.c_stab;
  opts.x0 = c.data.x0;
  const SweepResult res = alpha_sweep(as.spec, c.alphas, as.grid, opts);
  json summary;
  json rows = json::array();
  for (std::size_t i = 0; i < res.reports.size(); ++i) {
    char tag_buf[40];
    std::snprintf(tag_buf, sizeof tag_buf, "alpha_%.6g", res.alphas[i]);
    const std::string tag = tag_buf;
    files.push_back(dir / ("report_" + tag + ".json"));
    write_text(files.back(), report_to_json(res.reports[i]) + "\n");
    files.push_back(dir / ("report_" + tag + ".csv"));
    write_text(files.back(), report_to_csv(res.reports[i]));
    const double k = res.reports[i].kappa_fit;
    rows.push_back({{"alpha", res.alphas[i]}, {"kappa_fit", std::isfinite(k) ? json(k) : json(nullptr)}});
  }
  summary["runs"] = rows;
  summary["kappa_min"] = res.summary.kappa_min;
  summary["kappa_max"] = res.summary.kappa_max;
  summary["ratio"] = res.summary.ratio;
  summary["complete"] = !res.error.has_value();
  if (res.error) summary["error"] = *res.error;
  files.push_back(dir / "sweep_summary.json");
  write_text(files.back(), summary.dump(2) + "\n");
  if (res.error) throw NumericalError("sweep aborted: " + *res.error);
}

}  // namespace

std::vector<std::filesystem::path> run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                                       std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(out_dir);
  Paths files;
  std::optional<std::string> failure;
  auto write_manifest = [&]() {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json m;
    m["tool"] = "nlfrac";
    m["version"] = NLFRAC_VERSION;
    m["mode"] = mode_name(cfg.mode);
    m["seed"] = seed;
    m["config"] = json::parse(cfg.echo);
    json outs = json::array();
    for (const auto& f : files) outs.push_back(f.filename().string());
    m["outputs"] = outs;
    m["status"] = failure ? "failed" : "ok";
    m["wall_time_seconds"] = wall;
    write_text(out_dir / "manifest.json", m.dump(2) + "\n");
  };
  try {
    switch (cfg.mode) {
      case Mode::ml: run_ml(cfg, out_dir, files); break;
      case Mode::caputo: run_caputo(cfg, out_dir, seed, files); break;
      case Mode::fode: run_fode(cfg, out_dir, files); break;
      case Mode::solve: run_solve(cfg, out_dir, files); break;
      case Mode::holder: run_holder(cfg, out_dir, files); break;
      case Mode::sweep: run_sweep(cfg, out_dir, files); break;
    }
  } catch (const std::exception& e) {
    failure = e.what();
    write_manifest();
    throw;
  }
  write_manifest();
  return files;
}

namespace {

void report_error(std::ostream& err, const char* kind, const std::string& message) {
  json e;
  e["error"] = kind;
  e["message"] = message;
  err << e.dump() << std::endl;
}

}  // namespace

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"nlfrac: fractional-time nonlocal parabolic equations"};
  std::string mode;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  app.add_option("mode", mode, "ml | caputo | fode | solve | holder | sweep")->required();
  app.add_option("--config", config_path, "JSON experiment configuration")->required();
  app.add_option("--out", out_dir, "output directory (overrides output.dir)");
  app.add_option("--seed", seed, "random seed (used by the random caputo history)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, "config", e.what());
    return 2;
  }
  ExperimentConfig cfg;
  try {
    const Mode m = parse_mode(mode);
    std::ifstream is(config_path, std::ios::binary);
    if (!is) throw ConfigError("cannot read config file '" + config_path + "'");
    std::stringstream buf;
    buf << is.rdbuf();
    cfg = parse_config(buf.str(), m);
  } catch (const std::exception& e) {
    report_error(err, "config", e.what());
    return 2;
  }
  const std::filesystem::path dir = out_dir.empty() ? std::filesystem::path(cfg.output.dir) : std::filesystem::path(out_dir);
  try {
    const auto files = run(cfg, dir, seed);
    json ok;
    ok["status"] = "ok";
    json names = json::array();
    for (const auto& f : files) names.push_back(f.string());
    ok["outputs"] = names;
    out << ok.dump() << std::endl;
    return 0;
  } catch (const ConfigError& e) {
    report_error(err, "config", e.what());
    return 2;
  } catch (const HypothesisError& e) {
    report_error(err, "config", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    report_error(err, "config", e.what());
    return 2;
  } catch (const std::exception& e) {
    report_error(err, "numerical", e.what());
    return 3;
  }
}

}  // namespace nlfrac
