#include "charwave/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "charwave/errors.hpp"
#include "charwave/nullcone.hpp"
#include "charwave/nullplane.hpp"
#include "charwave/operators.hpp"
#include "charwave/random_data.hpp"

namespace charwave {

namespace {

constexpr std::string_view kProblemNames[] = {"cauchy", "nullplane", "nullcone", "nullplane_deriv",
                                              "nullcone_deriv"};

// Integral over a slice of sum_v weight_v * f_v^2.
double weighted_square(const State& fields, std::size_t first, const std::vector<double>& weight, int order) {
  if (fields.empty()) return 0.0;
  FieldSlice acc(fields[first].axes());
  for (std::size_t v = 0; v < weight.size(); ++v) {
    if (weight[v] == 0.0) continue;
    auto a = acc.values();
    auto f = fields[first + v].values();
    for (std::size_t j = 0; j < a.size(); ++j) a[j] += weight[v] * f[j] * f[j];
  }
  return quadrature_slice(acc, order);
}

// Volume integral over the region below Sigma_T: station i contributes its
// u-prefix up to the step where it meets the diagonal.
double region_volume(const EvolutionRecord& rec) {
  if (!rec.has_volume_source()) return 0.0;
  const GridSpec& g = rec.grid;
  const std::size_t stations = g.axes[0].points();
  const std::size_t stride = g.stride();
  std::vector<double> per_station(stations, 0.0);
  std::vector<double> series;
  for (std::size_t i = 0; i < stations; ++i) {
    const std::size_t last = (stations - 1 - i) * stride;
    series.clear();
    for (std::size_t n = 0; n <= last; ++n) series.push_back(rec.volume[n][i]);
    per_station[i] = quadrature_volume(series, g.step(), g.order);
  }
  const auto w = quadrature_weights(g.axes[0], g.order);
  double total = 0.0;
  for (std::size_t i = 0; i < stations; ++i) total += w[i] * per_station[i];
  return total;
}

void check_record(const EvolutionRecord& rec) {
  if (!rec.diagonal.complete()) throw UsageError("assemble_report: diagonal record is incomplete");
  if (rec.initial.size() != rec.names.size() || rec.face.size() != rec.names.size())
    throw UsageError("assemble_report: record is missing surface samples");
  if (rec.has_volume_source() && rec.volume.size() != rec.grid.steps + 1)
    throw UsageError("assemble_report: volume series has the wrong length");
}

FieldSlice sample_oracle(const OracleSolution& o, const Axes& axes, const std::string& var, bool on_face,
                         double face_value) {
  // Slice samples are (x0, x1, x2) at u = 0; face samples are (u, x1, x2) at x0 = face_value.
  return FieldSlice::sample(axes, [&](double a, double b, double c) {
    return on_face ? o.eval(var, a, face_value, b, c) : o.eval(var, 0.0, a, b, c);
  });
}

bool has_all(const OracleSolution& o, std::initializer_list<const char*> vars) {
  return std::all_of(vars.begin(), vars.end(), [&](const char* v) { return o.has(v); });
}

PlaneDerivData plane_deriv_data_from(const OracleSolution& o, const GridSpec& grid) {
  if (!has_all(o, {"R_x", "R_y", "R_z", "P_x", "Q_x", "P_y", "Q_y", "P_u", "Q_u"}))
    return PlaneDerivData::from(plane_data_from(o, grid));
  const Axes t = transverse_axes(grid);
  const double z0 = grid.axes[0].lower;
  PlaneDerivData d;
  d.grid = grid;
  d.R_x = sample_oracle(o, grid.axes, "R_x", false, 0.0);
  d.R_y = sample_oracle(o, grid.axes, "R_y", false, 0.0);
  d.R_z = sample_oracle(o, grid.axes, "R_z", false, 0.0);
  d.P_x = sample_oracle(o, t, "P_x", true, z0);
  d.Q_x = sample_oracle(o, t, "Q_x", true, z0);
  d.P_y = sample_oracle(o, t, "P_y", true, z0);
  d.Q_y = sample_oracle(o, t, "Q_y", true, z0);
  d.P_u = sample_oracle(o, t, "P_u", true, z0);
  d.Q_u = sample_oracle(o, t, "Q_u", true, z0);
  d.validate();
  return d;
}

ConeDerivData cone_deriv_data_from(const OracleSolution& o, const GridSpec& grid) {
  if (!has_all(o, {"Rhat_s", "Rhat_phi", "R_r", "Phat_s", "Phat_phi", "Qhat_s", "Qhat_phi", "P_u", "Q_u"}))
    return ConeDerivData::from(cone_data_from(o, grid));
  const Axes t = transverse_axes(grid);
  ConeDerivData d;
  d.grid = grid;
  d.Rhat_s = sample_oracle(o, grid.axes, "Rhat_s", false, 0.0);
  d.Rhat_phi = sample_oracle(o, grid.axes, "Rhat_phi", false, 0.0);
  d.R_r = sample_oracle(o, grid.axes, "R_r", false, 0.0);
  d.Phat_s = sample_oracle(o, t, "Phat_s", true, grid.r0);
  d.Phat_phi = sample_oracle(o, t, "Phat_phi", true, grid.r0);
  d.Qhat_s = sample_oracle(o, t, "Qhat_s", true, grid.r0);
  d.Qhat_phi = sample_oracle(o, t, "Qhat_phi", true, grid.r0);
  d.P_u = sample_oracle(o, t, "P_u", true, grid.r0);
  d.Q_u = sample_oracle(o, t, "Q_u", true, grid.r0);
  d.validate();
  return d;
}

void require_geometry(Problem p, const GridSpec& grid) {
  if (grid.geometry != geometry_of(p))
    throw UsageError(fmt::format("problem {} needs a {} grid, got {}", to_string(p), to_string(geometry_of(p)),
                                 to_string(grid.geometry)));
}

EstimateReport evolve_and_report(Problem problem, const GridSpec& grid, const PlaneCharData* plane,
                                 const ConeCharData* cone, EvolutionRecord* record_out) {
  EvolutionRecord rec;
  double c = 0.0;
  switch (problem) {
    case Problem::nullplane: rec = plane_evolve(*plane); break;
    case Problem::nullplane_deriv: rec = plane_derivative_evolve(PlaneDerivData::from(*plane)); break;
    case Problem::nullcone: rec = cone_evolve(*cone); break;
    case Problem::nullcone_deriv:
      rec = cone_derivative_evolve(ConeDerivData::from(*cone));
      c = derive_Dtilde(grid).c;
      break;
    case Problem::cauchy: throw UsageError("evolve_and_report: Cauchy runs are not characteristic");
  }
  EstimateReport r = assemble_report(rec, problem, c);
  if (record_out) *record_out = std::move(rec);
  return r;
}

}  // namespace

std::string_view to_string(Problem p) { return kProblemNames[static_cast<int>(p)]; }

Problem problem_from_string(std::string_view s) {
  for (int i = 0; i < 5; ++i)
    if (kProblemNames[i] == s) return static_cast<Problem>(i);
  throw UsageError(fmt::format("unknown problem '{}' (expected cauchy, nullplane, nullcone, nullplane_deriv or "
                               "nullcone_deriv)",
                               s));
}

Geometry geometry_of(Problem p) {
  switch (p) {
    case Problem::cauchy: return Geometry::cartesian_cauchy;
    case Problem::nullplane:
    case Problem::nullplane_deriv: return Geometry::nullplane;
    case Problem::nullcone:
    case Problem::nullcone_deriv: return Geometry::nullcone;
  }
  return Geometry::nullplane;
}

bool is_derivative(Problem p) { return p == Problem::nullplane_deriv || p == Problem::nullcone_deriv; }

std::vector<std::string> energy_variables(Problem p) {
  switch (p) {
    case Problem::cauchy: return {"U", "P", "Q", "R"};
    case Problem::nullplane:
    case Problem::nullcone: return {"R", "P", "Q"};
    case Problem::nullplane_deriv: return {"R_x", "R_y", "R_z", "P_x", "Q_x", "P_y", "Q_y"};
    case Problem::nullcone_deriv: return {"Rhat_s", "Rhat_phi", "R_r", "Phat_s", "Phat_phi", "Qhat_s", "Qhat_phi"};
  }
  return {};
}

EstimateReport assemble_report(const EvolutionRecord& rec, Problem problem, double c) {
  check_record(rec);
  if (problem == Problem::cauchy) throw UsageError("assemble_report: use assemble_cauchy_report for Cauchy runs");
  if (rec.grid.geometry != geometry_of(problem))
    throw UsageError(fmt::format("assemble_report: record geometry does not match problem {}", to_string(problem)));
  const std::size_t nn = rec.normal_count;
  const std::size_t ne = nn + rec.null_count;
  const int p = rec.grid.order;
  const auto& bu = rec.forms.b_u;
  const auto& bp = rec.forms.b_perp;

  std::vector<double> w_t(ne), w_plain(ne, 1.0), w_char(ne, 0.0), w_trans(ne, 0.0);
  std::vector<double> w_u_drop(ne, 0.0), w_perp_drop(ne), w_t_drop(ne);
  for (std::size_t v = 0; v < ne; ++v) {
    const bool normal = v < nn;
    w_t[v] = bu[v] + bp[v];
    (normal ? w_char : w_trans)[v] = 1.0;
    if (normal) w_u_drop[v] = 2.0 - bu[v];
    w_perp_drop[v] = (normal ? 0.0 : 2.0) - bp[v];
  }

  EstimateReport r;
  r.problem = problem;
  r.grid = rec.grid;
  const double t_form = weighted_square(rec.diagonal.fields, 0, w_t, p);
  const double u_form = weighted_square(rec.initial, 0, bu, p);
  const double perp_form = weighted_square(rec.face, 0, bp, p);
  r.volume_source = region_volume(rec);
  r.lhs_norm = t_form;
  r.data_norm_char = weighted_square(rec.initial, 0, w_char, p);
  r.data_norm_transverse = weighted_square(rec.face, 0, w_trans, p);

  const double base = 2.0 * (r.data_norm_char + r.data_norm_transverse);
  r.c = c;
  r.cT = c * rec.grid.T;
  const double growth = problem == Problem::nullcone_deriv ? std::exp(r.cT) : 1.0;
  r.rhs_bound = growth * base;
  r.margin = r.rhs_bound - r.lhs_norm;
  r.signed_balance = t_form - (u_form + perp_form + r.volume_source);
  r.balance_residual = std::abs(r.signed_balance);
  r.dropped_terms = weighted_square(rec.initial, 0, w_u_drop, p) + weighted_square(rec.face, 0, w_perp_drop, p) -
                    r.volume_source + (growth - 1.0) * base;
  return r;
}

EstimateReport assemble_cauchy_report(const CauchyState& initial, const CauchyState& final_state) {
  if (!initial.U.same_layout(final_state.U)) throw UsageError("assemble_cauchy_report: states differ in layout");
  EstimateReport r;
  r.problem = Problem::cauchy;
  r.grid = initial.grid;
  r.data_norm_char = cauchy_norm(initial);
  r.lhs_norm = cauchy_norm(final_state);
  r.rhs_bound = r.data_norm_char;
  r.margin = r.rhs_bound - r.lhs_norm;
  r.signed_balance = r.lhs_norm - r.data_norm_char;
  r.balance_residual = std::abs(r.signed_balance);
  return r;
}

double tolerance(const GridSpec& grid, double constant) {
  return constant * std::pow(grid.max_spacing(), grid.order);
}

bool ConvergenceTable::ratios_within(int p, double lo, double hi) const {
  if (rows.size() < 2) return false;
  const double target = std::pow(2.0, p);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double q = rows[i].ratio;
    if (!(q >= lo * target && q <= hi * target)) return false;
  }
  return true;
}

double ConvergenceTable::last_order() const {
  return rows.size() < 2 ? std::numeric_limits<double>::quiet_NaN() : rows.back().order;
}

ConvergenceTable make_convergence_table(std::string metric, const std::vector<std::size_t>& resolutions,
                                        const std::vector<double>& values) {
  if (resolutions.size() < 3) throw UsageError("refinement study needs at least 3 resolutions");
  if (values.size() != resolutions.size()) throw UsageError("refinement study: one value per resolution");
  for (std::size_t i = 1; i < resolutions.size(); ++i)
    if (resolutions[i] != 2 * resolutions[i - 1])
      throw UsageError(fmt::format("refinement study: resolution {} is not double {}", resolutions[i],
                                   resolutions[i - 1]));
  ConvergenceTable t;
  t.metric = std::move(metric);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < resolutions.size(); ++i) {
    ConvergenceRow row{resolutions[i], values[i], nan, nan};
    if (i > 0) {
      row.ratio = values[i - 1] / values[i];
      row.order = std::log2(row.ratio);
    }
    t.rows.push_back(row);
  }
  return t;
}

ConvergenceTable refinement_study(std::string metric, const std::vector<std::size_t>& resolutions,
                                  const std::function<double(std::size_t)>& run) {
  // Validate before spending time on runs.
  make_convergence_table(metric, resolutions, std::vector<double>(resolutions.size(), 1.0));
  std::vector<double> values;
  for (std::size_t n : resolutions) values.push_back(run(n));
  return make_convergence_table(std::move(metric), resolutions, values);
}

double diagonal_error(const EvolutionRecord& rec, const OracleSolution& o, const std::vector<std::string>& vars) {
  if (!rec.diagonal.complete()) throw UsageError("diagonal_error: diagonal record is incomplete");
  double err = 0.0;
  for (const auto& v : vars)
    err = std::max(err, max_abs_diff(rec.diagonal.fields[rec.index_of(v)], oracle_diagonal(o, rec.grid, v)));
  return err;
}

EstimateReport run_oracle(Problem problem, const GridSpec& grid, const OracleSolution& o,
                          EvolutionRecord* record_out) {
  require_geometry(problem, grid);
  switch (problem) {
    case Problem::cauchy: {
      const CauchyState init = cauchy_state_from(o, grid);
      return assemble_cauchy_report(init, cauchy_evolve(init));
    }
    case Problem::nullplane: {
      const PlaneCharData d = plane_data_from(o, grid);
      return evolve_and_report(problem, grid, &d, nullptr, record_out);
    }
    case Problem::nullcone: {
      const ConeCharData d = cone_data_from(o, grid);
      return evolve_and_report(problem, grid, nullptr, &d, record_out);
    }
    case Problem::nullplane_deriv: {
      EvolutionRecord rec = plane_derivative_evolve(plane_deriv_data_from(o, grid));
      EstimateReport r = assemble_report(rec, problem);
      if (record_out) *record_out = std::move(rec);
      return r;
    }
    case Problem::nullcone_deriv: {
      EvolutionRecord rec = cone_derivative_evolve(cone_deriv_data_from(o, grid));
      EstimateReport r = assemble_report(rec, problem, derive_Dtilde(grid).c);
      if (record_out) *record_out = std::move(rec);
      return r;
    }
  }
  throw UsageError("run_oracle: unknown problem");
}

EstimateReport run_random(Problem problem, const GridSpec& grid, std::uint64_t seed, double scale) {
  require_geometry(problem, grid);
  EstimateReport r;
  switch (problem) {
    case Problem::cauchy: {
      CauchyState init = random_cauchy_state(grid, seed);
      for (FieldSlice* f : {&init.U, &init.P, &init.Q, &init.R, &init.psi}) *f *= scale;
      r = assemble_cauchy_report(init, cauchy_evolve(init));
      break;
    }
    case Problem::nullplane:
    case Problem::nullplane_deriv: {
      PlaneCharData d = random_plane_data(grid, seed);
      for (FieldSlice* f : {&d.R_on_u0, &d.P_on_z0, &d.Q_on_z0, &d.psi_on_z0}) *f *= scale;
      r = evolve_and_report(problem, grid, &d, nullptr, nullptr);
      break;
    }
    case Problem::nullcone:
    case Problem::nullcone_deriv: {
      ConeCharData d = random_cone_data(grid, seed);
      for (FieldSlice* f : {&d.R_on_u0, &d.g_on_r0, &d.P_on_r0, &d.Q_on_r0}) *f *= scale;
      r = evolve_and_report(problem, grid, nullptr, &d, nullptr);
      break;
    }
  }
  r.seed = seed;
  return r;
}

std::vector<EstimateReport> property_sweep(Problem problem, const GridSpec& grid, std::size_t n_samples,
                                           std::uint64_t seed, const SweepOptions& options) {
  std::vector<EstimateReport> out;
  out.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    EstimateReport r = run_random(problem, grid, seed + i);
    r.flagged = r.margin < -options.tolerance;
    if (options.on_report) options.on_report(r);
    if (r.flagged && options.stop_on_violation)
      throw EstimateViolation(fmt::format("{}: margin {:.6g} below -{:.6g} for seed {}", to_string(problem),
                                          r.margin, options.tolerance, r.seed),
                              r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace charwave
