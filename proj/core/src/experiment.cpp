#include "charwave/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "charwave/errors.hpp"

namespace charwave {

namespace {

void log_line(std::ostream* log, const std::string& s) {
  if (log) *log << s << '\n';
}

std::string write_file(const ExperimentConfig& c, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(c.output);
  const std::string path = (std::filesystem::path(c.output) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError(fmt::format("cannot write '{}'", path));
  out << content;
  return path;
}

EstimateReport single_run(const ExperimentConfig& c, Problem p, const GridSpec& g, EvolutionRecord* rec) {
  EstimateReport r;
  switch (c.data) {
    case DataSource::zero: r = run_random(p, g, c.seed, 0.0); break;
    case DataSource::random: r = run_random(p, g, c.seed); break;
    case DataSource::oracle: r = run_oracle(p, g, c.make_oracle(g), rec); break;
  }
  r.seed = c.seed;
  return r;
}

double cauchy_oracle_error(const ExperimentConfig& c, const GridSpec& g) {
  const OracleSolution o = c.make_oracle(g);
  const CauchyState end = cauchy_evolve(cauchy_state_from(o, g));
  const CauchyState exact = cauchy_state_from(o, g, g.T);
  return std::max({max_abs_diff(end.U, exact.U), max_abs_diff(end.P, exact.P), max_abs_diff(end.Q, exact.Q),
                   max_abs_diff(end.R, exact.R)});
}

std::vector<std::string> oracle_variables(const OracleSolution& o, Problem p) {
  std::vector<std::string> out;
  for (auto& v : energy_variables(p))
    if (o.has(v)) out.push_back(v);
  return out;
}

}  // namespace

int exit_code_for(const ConfigError& e) {
  switch (e.kind()) {
    case ConfigErrorKind::missing_file: return exit_code::missing_file;
    case ConfigErrorKind::syntax: return exit_code::syntax_error;
    case ConfigErrorKind::invalid_value: return exit_code::config_error;
  }
  return exit_code::config_error;
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"run-cauchy",       "run-nullplane", "run-nullcone",
                                              "verify-estimates", "convergence",   "derivatives"};
  return names;
}

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

std::string report_csv(const std::vector<EstimateReport>& reports) {
  std::string out =
      "problem,N_u,N_z,N_x,N_y,order,T,lhs_norm,data_norm_char,data_norm_transverse,volume_source,rhs_bound,margin,"
      "balance_residual,c,cT,seed,flag\n";
  for (const auto& r : reports) {
    const GridSpec& g = r.grid;
    // Cauchy slices are (x, y, z); characteristic slices put the bounded axis first.
    const bool cauchy = g.geometry == Geometry::cartesian_cauchy;
    const std::size_t nz = g.axes[cauchy ? 2 : 0].cells;
    const std::size_t nx = g.axes[cauchy ? 0 : 1].cells;
    const std::size_t ny = g.axes[cauchy ? 1 : 2].cells;
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(r.problem), g.steps, nz,
                       nx, ny, g.order, format_real(g.T), format_real(r.lhs_norm), format_real(r.data_norm_char),
                       format_real(r.data_norm_transverse), format_real(r.volume_source), format_real(r.rhs_bound),
                       format_real(r.margin), format_real(r.balance_residual), format_real(r.c), format_real(r.cT),
                       r.seed, r.flagged ? 1 : 0);
  }
  return out;
}

std::string convergence_csv(const ConvergenceTable& t) {
  std::string out = "resolution,residual,ratio,order\n";
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    if (i == 0)
      out += fmt::format("{},{},,\n", row.resolution, format_real(row.value));
    else
      out += fmt::format("{},{},{},{}\n", row.resolution, format_real(row.value), format_real(row.ratio),
                         format_real(row.order));
  }
  return out;
}

RunOutcome run_experiment(std::string_view sub, ExperimentConfig c, std::ostream* log) {
  if (sub == "run-cauchy") c.problem = Problem::cauchy;
  else if (sub == "run-nullplane") c.problem = Problem::nullplane;
  else if (sub == "run-nullcone") c.problem = Problem::nullcone;
  else if (sub == "derivatives") {
    if (c.problem == Problem::cauchy)
      throw ConfigError(ConfigErrorKind::invalid_value, "problem", "derivatives needs problem=nullplane or nullcone");
    c.derivative = true;
  } else if (sub != "verify-estimates" && sub != "convergence")
    throw UsageError(fmt::format("unknown subcommand '{}'", sub));
  c.validate();

  const Problem p = c.effective_problem();
  RunOutcome out;

  if (sub == "verify-estimates") {
    const GridSpec g = c.grid();
    SweepOptions opt;
    opt.tolerance = tolerance(g, c.tol_constant);
    opt.stop_on_violation = false;
    opt.on_report = [&](const EstimateReport& r) {
      log_line(log, fmt::format("seed {}: margin {:.6e}{}", r.seed, r.margin, r.flagged ? "  FLAGGED" : ""));
    };
    out.reports = property_sweep(p, g, c.samples, c.seed, opt);
  } else if (sub == "convergence") {
    std::vector<double> values;
    for (std::size_t n : c.resolutions) {
      const GridSpec g = c.grid(n);
      EvolutionRecord rec;
      EstimateReport r = single_run(c, p, g, &rec);
      double v = r.balance_residual;
      if (c.metric == StudyMetric::oracle_error) {
        if (c.data != DataSource::oracle)
          throw ConfigError(ConfigErrorKind::invalid_value, "metric", "metric=oracle_error needs data=oracle");
        v = p == Problem::cauchy ? cauchy_oracle_error(c, g)
                                 : diagonal_error(rec, c.make_oracle(g), oracle_variables(c.make_oracle(g), p));
      }
      r.flagged = r.margin < -tolerance(g, c.tol_constant);
      log_line(log, fmt::format("N = {}: {} {:.6e}", n, c.metric == StudyMetric::balance ? "balance" : "error", v));
      values.push_back(v);
      out.reports.push_back(std::move(r));
    }
    out.table = make_convergence_table(c.metric == StudyMetric::balance ? "balance_residual" : "oracle_error",
                                       c.resolutions, values);
    if (!out.table->ratios_within(c.scheme_order)) {
      log_line(log, fmt::format("convergence ratios outside [{}, {}]", 0.7 * (1 << c.scheme_order),
                                1.3 * (1 << c.scheme_order)));
      out.exit_code = exit_code::invariant_failure;
    }
    out.files.push_back(write_file(c, "convergence.csv", convergence_csv(*out.table)));
  } else {
    const GridSpec g = c.grid();
    EstimateReport r = single_run(c, p, g, nullptr);
    r.flagged = r.margin < -tolerance(g, c.tol_constant);
    log_line(log, fmt::format("{}: lhs {:.6e} rhs {:.6e} margin {:.6e} balance {:.3e}", to_string(p), r.lhs_norm,
                              r.rhs_bound, r.margin, r.balance_residual));
    out.reports.push_back(std::move(r));
  }

  if (std::any_of(out.reports.begin(), out.reports.end(), [](const EstimateReport& r) { return r.flagged; }))
    out.exit_code = exit_code::invariant_failure;
  out.files.insert(out.files.begin(), write_file(c, "report.csv", report_csv(out.reports)));
  return out;
}

}  // namespace charwave
