#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "charwave/grid.hpp"

namespace charwave {

// Diagonal entries of B^u and B^perp (B^z or B^r) per variable, in the
// order normal variables then coupled null variables. Auxiliary variables
// (psi, g) do not enter the energy.
struct EnergyForms {
  std::vector<double> b_u;
  std::vector<double> b_perp;
};

// A characteristic problem in canonical form: normal variables are marched
// in u, null variables are integrated along axis 0 inside each u-slice.
// Boundary data on the transverse surface is sampled on the half-step grid
// u_h = h * du / 2, h = 0 .. 2 N_u.
class CharSystem {
 public:
  virtual ~CharSystem() = default;

  virtual const GridSpec& grid() const = 0;
  virtual std::vector<std::string> normal_names() const = 0;
  virtual std::vector<std::string> null_names() const = 0;
  virtual std::vector<std::string> auxiliary_names() const { return {}; }
  virtual EnergyForms energy_forms() const = 0;

  virtual State initial_normal() const = 0;
  virtual void solve_null(std::size_t half_step, const State& normal, State& null) const = 0;
  virtual void solve_auxiliary(std::size_t /*half_step*/, const State& /*normal*/, const State& /*null*/,
                               State& /*aux*/) const {}
  virtual void normal_rhs(std::size_t half_step, const State& normal, const State& null, State& out) const = 0;

  // 2 v D~ v, pointwise. Only consulted when has_volume_source().
  virtual bool has_volume_source() const { return false; }
  virtual void volume_density(const State& /*normal*/, const State& /*null*/, FieldSlice& /*out*/) const {}
};

// Samples on Sigma_T: station i of axis 0 is captured at the u-step where
// u + (x_i - x_0) = T.
struct DiagonalRecord {
  std::vector<std::string> names;
  State fields;
  std::vector<bool> station_filled;

  bool complete() const;
};

struct EvolutionRecord {
  GridSpec grid;
  std::vector<std::string> names;  // normal, null, auxiliary
  std::size_t normal_count = 0;
  std::size_t null_count = 0;
  EnergyForms forms;

  State initial;            // every variable on the u = 0 slice
  DiagonalRecord diagonal;  // every variable on Sigma_T
  State face;               // every variable at the lower end of axis 0, over (u, axis 1, axis 2)
  // volume[n][i]: integral over axes 1, 2 of the volume density at step n, station i.
  std::vector<std::vector<double>> volume;
  std::map<std::size_t, State> snapshots;  // full-step index -> every variable

  std::size_t index_of(const std::string& name) const;
  bool has_volume_source() const { return !volume.empty(); }
};

struct MarchOptions {
  std::vector<std::size_t> snapshot_steps;
  bool all_snapshots = false;
};

// Runs u = 0 .. T. Throws NumericalAbort naming the first non-finite step.
EvolutionRecord march(const CharSystem& system, const MarchOptions& options = {});

// Centered u-difference of order p of a recorded variable, built from the
// snapshots around `step` (which must have been requested).
FieldSlice snapshot_u_derivative(const EvolutionRecord& record, const std::string& name, std::size_t step);

}  // namespace charwave
