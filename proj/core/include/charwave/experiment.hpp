#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "charwave/config.hpp"
#include "charwave/estimates.hpp"

namespace charwave {

namespace exit_code {
inline constexpr int pass = 0;
inline constexpr int invariant_failure = 1;
inline constexpr int config_error = 2;
inline constexpr int numerical_abort = 3;
inline constexpr int missing_file = 4;
inline constexpr int syntax_error = 5;
}  // namespace exit_code

int exit_code_for(const ConfigError& e);

const std::vector<std::string>& subcommands();

struct RunOutcome {
  int exit_code = exit_code::pass;
  std::vector<EstimateReport> reports;
  std::optional<ConvergenceTable> table;
  std::vector<std::string> files;  // paths written
};

// Runs one subcommand and writes report.csv (and convergence.csv for
// `convergence`) under config.output. Progress goes to `log` when non-null.
// Throws ConfigError, UsageError and NumericalAbort; the CLI maps them.
RunOutcome run_experiment(std::string_view subcommand, ExperimentConfig config, std::ostream* log = nullptr);

// 17 significant digits, shortest exponent form.
std::string format_real(double x);
std::string report_csv(const std::vector<EstimateReport>& reports);
std::string convergence_csv(const ConvergenceTable& table);

}  // namespace charwave
