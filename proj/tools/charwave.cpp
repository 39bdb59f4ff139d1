#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "charwave/config.hpp"
#include "charwave/errors.hpp"
#include "charwave/experiment.hpp"

int main(int argc, char** argv) {
  namespace cw = charwave;
  CLI::App app{"Characteristic evolution and energy-estimate checks for the scalar wave equation"};
  app.footer(cw::config_schema());

  std::string subcommand;
  std::string config_path;
  std::vector<std::string> settings;
  std::string output;
  std::uint64_t seed = 0;
  bool quiet = false;

  app.add_option("subcommand", subcommand, "What to run")
      ->required()
      ->check(CLI::IsMember(cw::subcommands()));
  app.add_option("--config", config_path, "Config file (key = value lines)");
  app.add_option("--set", settings, "Override one key, key=value (repeatable)")->allow_extra_args(false);
  app.add_option("--output", output, "Output directory for the CSV files");
  auto* seed_opt = app.add_option("--seed", seed, "Random-data seed");
  app.add_flag("--quiet", quiet, "Print nothing but errors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cw::exit_code::config_error;
  }

  try {
    cw::ExperimentConfig config = config_path.empty() ? cw::ExperimentConfig{} : cw::load_config(config_path);
    for (const auto& s : settings) cw::apply_override(config, s);
    if (!output.empty()) config.output = output;
    if (*seed_opt) config.seed = seed;

    const cw::RunOutcome outcome = cw::run_experiment(subcommand, config, quiet ? nullptr : &std::cout);
    if (!quiet) {
      for (const auto& f : outcome.files) std::cout << "wrote " << f << '\n';
      if (outcome.exit_code != cw::exit_code::pass) std::cout << "invariant check failed\n";
    }
    return outcome.exit_code;
  } catch (const cw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cw::exit_code_for(e);
  } catch (const cw::EstimateViolation& e) {
    std::cerr << e.what() << '\n';
    return cw::exit_code::invariant_failure;
  } catch (const cw::NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return cw::exit_code::numerical_abort;
  } catch (const cw::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cw::exit_code::config_error;
  }
}
