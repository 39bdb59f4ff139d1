#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "charwave/estimates.hpp"
#include "charwave/grid.hpp"

namespace charwave {

enum class ConfigErrorKind { missing_file, syntax, invalid_value };

class ConfigError : public std::runtime_error {
 public:
  ConfigError(ConfigErrorKind kind, std::string key, const std::string& what)
      : std::runtime_error(what), kind_(kind), key_(std::move(key)) {}
  ConfigErrorKind kind() const { return kind_; }
  const std::string& key() const { return key_; }

 private:
  ConfigErrorKind kind_;
  std::string key_;
};

enum class DataSource { zero, random, oracle };
enum class StudyMetric { balance, oracle_error };

struct ExperimentConfig {
  Problem problem = Problem::nullplane;
  bool derivative = false;  // system = derivative
  double T = 1.0;
  int scheme_order = 2;
  double cfl_factor = 0.25;
  std::size_t N = 16;
  std::size_t N_u = 0;  // 0: derived from the CFL factor
  std::size_t N_z = 0, N_r = 0, N_x = 0, N_y = 0;  // 0: N
  std::size_t N_s = 0, N_phi = 0;                  // 0: 3N/4
  double L_x = 6.283185307179586, L_y = 6.283185307179586, L_z = 6.283185307179586;
  double r0 = 1.0;
  DataSource data = DataSource::random;
  std::string oracle = "transverse";
  int mode = 1;
  std::uint64_t seed = 1;
  std::size_t samples = 1;
  std::vector<std::size_t> resolutions{16, 32, 64};
  double tol_constant = 1.0;
  StudyMetric metric = StudyMetric::balance;
  std::string output = ".";

  // The problem actually evolved (derivative variant when system=derivative).
  Problem effective_problem() const;
  // Grid at resolution N (or `resolution` when nonzero, which then also
  // drives every per-axis count left at its default).
  GridSpec grid(std::size_t resolution = 0) const;
  OracleSolution make_oracle(const GridSpec& grid) const;
  // Throws ConfigError(invalid_value) naming the offending key.
  void validate() const;
};

// Parses flat `key = value` lines; `#` starts a comment.
ExperimentConfig parse_config_text(std::string_view text, std::string_view origin = "<inline>");
ExperimentConfig load_config(const std::string& path);
// Applies one `key=value` override.
void apply_override(ExperimentConfig& config, std::string_view assignment);
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);

// Documentation of every key and its default, for --help.
std::string config_schema();

}  // namespace charwave
