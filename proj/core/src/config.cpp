#include "charwave/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "charwave/errors.hpp"

namespace charwave {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void invalid(std::string_view key, const std::string& why) {
  throw ConfigError(ConfigErrorKind::invalid_value, std::string(key), fmt::format("invalid value for '{}': {}", key, why));
}

double to_real(std::string_view key, std::string_view v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x))
    invalid(key, fmt::format("'{}' is not a finite number", v));
  return x;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view v) {
  std::uint64_t x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty())
    invalid(key, fmt::format("'{}' is not a non-negative integer", v));
  return x;
}

std::size_t to_count(std::string_view key, std::string_view v) { return static_cast<std::size_t>(to_unsigned(key, v)); }

std::vector<std::size_t> to_list(std::string_view key, std::string_view v) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const auto item = trim(v.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    out.push_back(to_count(key, item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::size_t or_default(std::size_t v, std::size_t fallback) { return v != 0 ? v : fallback; }

}  // namespace

Problem ExperimentConfig::effective_problem() const {
  if (!derivative) return problem;
  switch (problem) {
    case Problem::nullplane: return Problem::nullplane_deriv;
    case Problem::nullcone: return Problem::nullcone_deriv;
    default: return problem;
  }
}

GridSpec ExperimentConfig::grid(std::size_t resolution) const {
  const bool study = resolution != 0;
  const std::size_t n = study ? resolution : N;
  const auto axis = [&](std::size_t set) { return study ? n : or_default(set, n); };
  const auto polar = [&](std::size_t set) { return study ? 3 * n / 4 : or_default(set, 3 * n / 4); };
  switch (geometry_of(problem)) {
    case Geometry::cartesian_cauchy: {
      CauchyGridParams p;
      p.T = T;
      p.lengths = {L_x, L_y, L_z};
      p.cells = {axis(N_x), axis(N_y), axis(N_z)};
      p.steps = study ? 0 : N_u;
      p.order = scheme_order;
      p.cfl_factor = cfl_factor;
      return make_cauchy_grid(p);
    }
    case Geometry::nullplane: {
      PlaneGridParams p;
      p.T = T;
      p.L_x = L_x;
      p.L_y = L_y;
      p.N_u = study ? 0 : N_u;
      p.N_z = axis(N_z);
      p.N_x = axis(N_x);
      p.N_y = axis(N_y);
      p.order = scheme_order;
      p.cfl_factor = cfl_factor;
      return make_nullplane_grid(p);
    }
    case Geometry::nullcone: {
      ConeGridParams p;
      p.T = T;
      p.r0 = r0;
      p.N_u = study ? 0 : N_u;
      p.N_r = axis(N_r);
      p.N_s = polar(N_s);
      p.N_phi = polar(N_phi);
      p.order = scheme_order;
      p.cfl_factor = cfl_factor;
      return make_nullcone_grid(p);
    }
  }
  throw UsageError("unknown geometry");
}

OracleSolution ExperimentConfig::make_oracle(const GridSpec& g) const {
  const double pi = 3.141592653589793;
  switch (g.geometry) {
    case Geometry::nullplane:
      if (oracle == "transverse") return oracle_plane_transverse(2.0 * pi * mode / L_x, L_x);
      if (oracle == "plane_wave") return oracle_plane_wave(mode, mode, 1.0, L_x, L_y);
      break;
    case Geometry::nullcone:
      if (oracle == "ingoing") return oracle_cone_ingoing(default_ingoing_profile(g.T, g.r0));
      if (oracle == "outgoing") return oracle_cone_outgoing(default_dipole_profile(g.T));
      if (oracle == "dipole") return oracle_cone_dipole(default_dipole_profile(g.T));
      if (oracle == "rotated_dipole") return oracle_cone_rotated_dipole(default_dipole_profile(g.T));
      break;
    case Geometry::cartesian_cauchy:
      if (oracle == "plane_wave") return oracle_cauchy_plane_wave(mode, mode, mode, {L_x, L_y, L_z});
      break;
  }
  invalid("oracle", fmt::format("'{}' is not available for {} runs (nullplane: transverse, plane_wave; nullcone: "
                                "ingoing, outgoing, dipole, rotated_dipole; cauchy: plane_wave)",
                                oracle, to_string(g.geometry)));
}

void ExperimentConfig::validate() const {
  if (!(T > 0.0)) invalid("T", "must be positive");
  if (scheme_order != 2 && scheme_order != 4)
    invalid("scheme_order", fmt::format("{} is not one of {{2, 4}}", scheme_order));
  if (!(cfl_factor > 0.0)) invalid("cfl_factor", "must be positive");
  if (N < 4) invalid("N", "must be at least 4");
  const std::pair<const char*, std::size_t> counts[] = {{"N_z", N_z}, {"N_r", N_r}, {"N_x", N_x},
                                                         {"N_y", N_y}, {"N_s", N_s}, {"N_phi", N_phi}};
  for (const auto& [key, v] : counts)
    if (v != 0 && v < 4) invalid(key, "must be at least 4 (or 0 for the default)");
  if (!(L_x > 0.0)) invalid("L_x", "must be positive");
  if (!(L_y > 0.0)) invalid("L_y", "must be positive");
  if (!(L_z > 0.0)) invalid("L_z", "must be positive");
  if (problem == Problem::nullcone || problem == Problem::nullcone_deriv)
    if (!(r0 > 0.0)) invalid("r0", "must be positive; the cone vertex r = 0 is excluded");
  if (mode < 1) invalid("mode", "must be a positive integer");
  if (!(tol_constant >= 0.0)) invalid("tol_constant", "must be non-negative");
  if (resolutions.size() < 3) invalid("resolutions", "needs at least 3 entries");
  for (std::size_t i = 0; i < resolutions.size(); ++i) {
    if (resolutions[i] < 4) invalid("resolutions", "every entry must be at least 4");
    if (i > 0 && resolutions[i] != 2 * resolutions[i - 1])
      invalid("resolutions", fmt::format("{} is not double {}", resolutions[i], resolutions[i - 1]));
  }
  if (output.empty()) invalid("output", "must not be empty");
  try {
    grid().validate();
    if (data == DataSource::oracle) make_oracle(grid());
  } catch (const UsageError& e) {
    invalid("grid", e.what());
  }
}

void set_config_value(ExperimentConfig& c, std::string_view key, std::string_view value) {
  const std::string_view v = trim(value);
  if (key == "problem") {
    if (v == "nullplane_deriv" || v == "nullcone_deriv")
      invalid(key, "use problem=nullplane|nullcone with system=derivative");
    try {
      c.problem = problem_from_string(v);
    } catch (const UsageError&) {
      invalid(key, fmt::format("'{}' is not one of cauchy, nullplane, nullcone", v));
    }
  } else if (key == "system") {
    if (v == "main") c.derivative = false;
    else if (v == "derivative") c.derivative = true;
    else invalid(key, fmt::format("'{}' is not one of main, derivative", v));
  } else if (key == "T") {
    c.T = to_real(key, v);
  } else if (key == "scheme_order") {
    const auto p = to_unsigned(key, v);
    if (p != 2 && p != 4) invalid(key, fmt::format("{} is not one of {{2, 4}}", p));
    c.scheme_order = static_cast<int>(p);
  } else if (key == "cfl_factor") {
    c.cfl_factor = to_real(key, v);
  } else if (key == "N") {
    c.N = to_count(key, v);
  } else if (key == "N_u") {
    c.N_u = to_count(key, v);
  } else if (key == "N_z") {
    c.N_z = to_count(key, v);
  } else if (key == "N_r") {
    c.N_r = to_count(key, v);
  } else if (key == "N_x") {
    c.N_x = to_count(key, v);
  } else if (key == "N_y") {
    c.N_y = to_count(key, v);
  } else if (key == "N_s") {
    c.N_s = to_count(key, v);
  } else if (key == "N_phi") {
    c.N_phi = to_count(key, v);
  } else if (key == "L_x") {
    c.L_x = to_real(key, v);
  } else if (key == "L_y") {
    c.L_y = to_real(key, v);
  } else if (key == "L_z") {
    c.L_z = to_real(key, v);
  } else if (key == "r0") {
    c.r0 = to_real(key, v);
  } else if (key == "data") {
    if (v == "zero") c.data = DataSource::zero;
    else if (v == "random") c.data = DataSource::random;
    else if (v == "oracle") c.data = DataSource::oracle;
    else invalid(key, fmt::format("'{}' is not one of zero, random, oracle", v));
  } else if (key == "oracle") {
    if (v.empty()) invalid(key, "must not be empty");
    c.oracle = std::string(v);
  } else if (key == "mode") {
    c.mode = static_cast<int>(to_unsigned(key, v));
  } else if (key == "seed") {
    c.seed = to_unsigned(key, v);
  } else if (key == "samples") {
    c.samples = to_count(key, v);
  } else if (key == "resolutions") {
    c.resolutions = to_list(key, v);
  } else if (key == "tol_constant") {
    c.tol_constant = to_real(key, v);
  } else if (key == "metric") {
    if (v == "balance") c.metric = StudyMetric::balance;
    else if (v == "oracle_error") c.metric = StudyMetric::oracle_error;
    else invalid(key, fmt::format("'{}' is not one of balance, oracle_error", v));
  } else if (key == "output") {
    c.output = std::string(v);
  } else {
    throw ConfigError(ConfigErrorKind::invalid_value, std::string(key), fmt::format("unknown key '{}'", key));
  }
}

void apply_override(ExperimentConfig& c, std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto key = trim(assignment.substr(0, eq));
  if (eq == std::string_view::npos || key.empty())
    throw ConfigError(ConfigErrorKind::syntax, std::string(key),
                      fmt::format("malformed setting '{}': expected key=value", assignment));
  set_config_value(c, key, assignment.substr(eq + 1));
}

ExperimentConfig parse_config_text(std::string_view text, std::string_view origin) {
  ExperimentConfig c;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const auto key = eq == std::string_view::npos ? line : trim(line.substr(0, eq));
    const bool ident = !key.empty() && key.find_first_of(" \t") == std::string_view::npos;
    if (eq == std::string_view::npos || !ident)
      throw ConfigError(ConfigErrorKind::syntax, std::string(key),
                        fmt::format("{}:{}: expected key = value, got '{}'", origin, line_no, line));
    set_config_value(c, key, line.substr(eq + 1));
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(ConfigErrorKind::missing_file, "", fmt::format("cannot read config file '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string config_schema() {
  return R"(Config keys (flat key = value, '#' starts a comment):
  problem       cauchy | nullplane | nullcone                 [nullplane]
  system        main | derivative                             [main]
  T             evolution length                              [1]
  scheme_order  2 | 4                                         [2]
  cfl_factor    marching step bound du <= k * dz              [0.25]
  N             base resolution                               [16]
  N_u           marching steps, 0 = derived from cfl_factor   [0]
  N_z N_r N_x N_y  per-axis cells, 0 = N                      [0]
  N_s N_phi     polar / azimuthal cells, 0 = 3N/4             [0]
  L_x L_y L_z   periodic lengths                              [2 pi]
  r0            worldtube radius (cone), > 0                  [1]
  data          zero | random | oracle                        [random]
  oracle        transverse | plane_wave | ingoing | outgoing | dipole | rotated_dipole  [transverse]
  mode          oracle wave number index                      [1]
  seed          random-data seed                              [1]
  samples       property-sweep sample count                   [1]
  resolutions   comma list, each double the last              [16,32,64]
  tol_constant  C in tol = C * dmax^p                         [1]
  metric        balance | oracle_error (convergence)          [balance]
  output        output directory                              [.]
)";
}

}  // namespace charwave
