#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "charwave/cauchy.hpp"
#include "charwave/grid.hpp"
#include "charwave/marching.hpp"
#include "charwave/oracles.hpp"

namespace charwave {

enum class Problem { cauchy, nullplane, nullcone, nullplane_deriv, nullcone_deriv };

std::string_view to_string(Problem p);
Problem problem_from_string(std::string_view s);
Geometry geometry_of(Problem p);
bool is_derivative(Problem p);

struct EstimateReport {
  Problem problem = Problem::nullplane;
  GridSpec grid;
  double lhs_norm = 0.0;              // ||v||_T^2 or ||w||_T^2 (Cauchy: ||v(T)||^2)
  double data_norm_char = 0.0;        // normal variables on Sigma_u (Cauchy: ||v(0)||^2)
  double data_norm_transverse = 0.0;  // null variables on Sigma_z / Sigma_r
  double volume_source = 0.0;         // integral of the source over the region
  double rhs_bound = 0.0;
  double margin = 0.0;                // rhs_bound - lhs_norm
  double balance_residual = 0.0;      // |signed_balance|
  double signed_balance = 0.0;        // Sigma_T form minus the right side of the identity
  double dropped_terms = 0.0;         // slack the identity predicts; margin = dropped_terms - signed_balance
  double c = 0.0;
  double cT = 0.0;
  std::uint64_t seed = 0;
  bool flagged = false;
};

// Integrates the record over Sigma_T, Sigma_u, the transverse surface and
// the volume. `c` multiplies into the bound as e^{cT} (cone derivative runs).
EstimateReport assemble_report(const EvolutionRecord& record, Problem problem, double c = 0.0);
EstimateReport assemble_cauchy_report(const CauchyState& initial, const CauchyState& final_state);

// C * (largest grid spacing)^p.
double tolerance(const GridSpec& grid, double constant);

struct ConvergenceRow {
  std::size_t resolution = 0;
  double value = 0.0;
  double ratio = 0.0;  // previous value / this value; NaN on the first row
  double order = 0.0;  // log2(ratio)
};

struct ConvergenceTable {
  std::string metric;
  std::vector<ConvergenceRow> rows;

  // Every ratio within [lo * 2^p, hi * 2^p].
  bool ratios_within(int p, double lo = 0.7, double hi = 1.3) const;
  double last_order() const;
};

// Checks the resolutions (>= 3, each double the last) and tabulates ratios.
ConvergenceTable make_convergence_table(std::string metric, const std::vector<std::size_t>& resolutions,
                                        const std::vector<double>& values);
ConvergenceTable refinement_study(std::string metric, const std::vector<std::size_t>& resolutions,
                                  const std::function<double(std::size_t)>& run);

// Largest |recorded - exact| over Sigma_T for the listed variables.
double diagonal_error(const EvolutionRecord& record, const OracleSolution& oracle,
                      const std::vector<std::string>& variables);

// Evolves the oracle's data on `grid` and assembles the report. `record_out`
// receives the run record when non-null.
EstimateReport run_oracle(Problem problem, const GridSpec& grid, const OracleSolution& oracle,
                          EvolutionRecord* record_out = nullptr);

// Random band-limited data for `problem` on `grid`, evolved and assembled.
EstimateReport run_random(Problem problem, const GridSpec& grid, std::uint64_t seed, double scale = 1.0);

// Variables of the evolved system (normal then null).
std::vector<std::string> energy_variables(Problem problem);

class EstimateViolation : public std::runtime_error {
 public:
  EstimateViolation(const std::string& what, EstimateReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const EstimateReport& report() const { return report_; }
  std::uint64_t seed() const { return report_.seed; }

 private:
  EstimateReport report_;
};

struct SweepOptions {
  double tolerance = 0.0;
  bool stop_on_violation = true;
  std::function<void(const EstimateReport&)> on_report;
};

// Runs samples seed, seed + 1, ..., flags reports with margin < -tolerance
// and throws EstimateViolation on the first one unless told otherwise.
std::vector<EstimateReport> property_sweep(Problem problem, const GridSpec& grid, std::size_t n_samples,
                                           std::uint64_t seed, const SweepOptions& options);

}  // namespace charwave
