#pragma once

#include <functional>
#include <span>

#include "charwave/grid.hpp"
#include "charwave/marching.hpp"

namespace charwave {

using Sampler3 = std::function<double(double, double, double)>;

// Free data for the null-plane problem. R lives on u = 0 over (z, x, y);
// P, Q, psi live on z = 0 over (u, x, y), sampled at half steps
// (2 N_u + 1 samples in u) so every Runge-Kutta stage sees exact data.
struct PlaneCharData {
  GridSpec grid;
  FieldSlice R_on_u0;
  FieldSlice P_on_z0;
  FieldSlice Q_on_z0;
  FieldSlice psi_on_z0;

  static PlaneCharData zero(const GridSpec& grid);
  // R(z, x, y); P, Q, psi as functions of (u, x, y).
  static PlaneCharData sample(const GridSpec& grid, const Sampler3& R, const Sampler3& P, const Sampler3& Q,
                              const Sampler3& psi);
  void validate() const;
};

// Axes (u at half steps, x, y) for transverse-surface samples.
Axes transverse_axes(const GridSpec& grid);

// Differentiated free data for the seven-variable system. The z = 0 entries
// come from differencing the prescribed P, Q; no new free functions enter.
struct PlaneDerivData {
  GridSpec grid;
  FieldSlice R_x, R_y, R_z;       // on u = 0
  FieldSlice P_x, Q_x, P_y, Q_y;  // on z = 0, half-step u grid
  FieldSlice P_u, Q_u;            // on z = 0, half-step u grid

  static PlaneDerivData from(const PlaneCharData& data);
  void validate() const;
};

struct PlaneNull {
  FieldSlice P, Q, psi;
};

// P = int R_x dz, Q = int R_y dz, psi = int R dz from the z = 0 values.
PlaneNull plane_hypersurface_solve(const FieldSlice& R, std::span<const double> P0, std::span<const double> Q0,
                                   std::span<const double> psi0, int order);

// R_u = (P_x + Q_y + R_z) / 2 on one slice.
FieldSlice plane_R_rhs(const FieldSlice& R, const FieldSlice& P, const FieldSlice& Q, int order);

class PlaneSystem final : public CharSystem {
 public:
  explicit PlaneSystem(PlaneCharData data);

  const GridSpec& grid() const override { return data_.grid; }
  std::vector<std::string> normal_names() const override { return {"R"}; }
  std::vector<std::string> null_names() const override { return {"P", "Q"}; }
  std::vector<std::string> auxiliary_names() const override { return {"psi"}; }
  EnergyForms energy_forms() const override { return {{2.0, 0.0, 0.0}, {-1.0, 1.0, 1.0}}; }

  State initial_normal() const override { return {data_.R_on_u0}; }
  void solve_null(std::size_t half_step, const State& normal, State& null) const override;
  void solve_auxiliary(std::size_t half_step, const State& normal, const State& null, State& aux) const override;
  void normal_rhs(std::size_t half_step, const State& normal, const State& null, State& out) const override;

  const PlaneCharData& data() const { return data_; }

 private:
  PlaneCharData data_;
  mutable FieldSlice a_, b_;
};

class PlaneDerivSystem final : public CharSystem {
 public:
  explicit PlaneDerivSystem(PlaneDerivData data);

  const GridSpec& grid() const override { return data_.grid; }
  std::vector<std::string> normal_names() const override { return {"R_x", "R_y", "R_z"}; }
  std::vector<std::string> null_names() const override { return {"P_x", "Q_x", "P_y", "Q_y"}; }
  EnergyForms energy_forms() const override {
    return {{2.0, 2.0, 2.0, 0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, -1.0, 1.0, 1.0, 1.0, 1.0}};
  }

  State initial_normal() const override { return {data_.R_x, data_.R_y, data_.R_z}; }
  void solve_null(std::size_t half_step, const State& normal, State& null) const override;
  void normal_rhs(std::size_t half_step, const State& normal, const State& null, State& out) const override;

  const PlaneDerivData& data() const { return data_; }

 private:
  PlaneDerivData data_;
  mutable FieldSlice a_, b_;
};

EvolutionRecord plane_evolve(const PlaneCharData& data, const MarchOptions& options = {});
EvolutionRecord plane_derivative_evolve(const PlaneDerivData& data, const MarchOptions& options = {});

// One u-step of R from full step `step` to step + 1.
FieldSlice plane_advance_R(const PlaneCharData& data, const FieldSlice& R, std::size_t step);

struct UDerivatives {
  FieldSlice P_u, Q_u;
};

// P_u = P_u|z=0 + (1/2) d_x int_0^z (P_x + Q_y + R_z) dz', likewise Q_u with d_y,
// using the derivative-system snapshot at full step `step`.
UDerivatives plane_reconstruct_PuQu(const PlaneDerivData& data, const EvolutionRecord& deriv_record,
                                    std::size_t step);

}  // namespace charwave
