#pragma once

#include <array>
#include <functional>
#include <span>

#include "charwave/grid.hpp"
#include "charwave/marching.hpp"
#include "charwave/nullplane.hpp"

namespace charwave {

// Free data for the null-cone problem in (u, r, s = cos(theta), phi).
// R lives on u = 0 over (r, s, phi); g, P, Q live on r = r0 over
// (u, s, phi) sampled at half steps in u.
struct ConeCharData {
  GridSpec grid;
  FieldSlice R_on_u0;
  FieldSlice g_on_r0;
  FieldSlice P_on_r0;
  FieldSlice Q_on_r0;

  static ConeCharData zero(const GridSpec& grid);
  // R(r, s, phi); g, P, Q as functions of (u, s, phi).
  static ConeCharData sample(const GridSpec& grid, const Sampler3& R, const Sampler3& g, const Sampler3& P,
                             const Sampler3& Q);
  void validate() const;
};

// Rescaled first derivatives, w = (Rh_s, Rh_phi, R_r, Ph_s, Ph_phi, Qh_s, Qh_phi):
//   Rh_s = a R_s / r,  Rh_phi = R_phi / (r a),
//   Ph_s = (a P)_s / r, Ph_phi = P_phi / (r a),
//   Qh_s = a Q_s / r,   Qh_phi = Q_phi / (r a),   a = sqrt(1 - s^2).
struct ConeDerivData {
  GridSpec grid;
  FieldSlice Rhat_s, Rhat_phi, R_r;                  // on u = 0
  FieldSlice Phat_s, Phat_phi, Qhat_s, Qhat_phi;     // on r = r0, half-step u grid
  FieldSlice P_u, Q_u;                               // on r = r0, half-step u grid

  static ConeDerivData from(const ConeCharData& data);
  void validate() const;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;
using Matrix7 = std::array<std::array<double, 7>, 7>;

// Principal and source matrices of A^a d_a v = D v, v = (R, P, Q).
Matrix3 cone_A(int direction, double r, double s);  // direction: 0 u, 1 r, 2 s, 3 phi
Matrix3 cone_D(double r, double s);
// D + (1/2) d_s A^s; v D~ v = -(P^2 + Q^2) / r.
Matrix3 cone_Dtilde_main(double r, double s);

// B^a d_a w = D w for the rescaled derivative variables.
Matrix7 cone_B(int direction, double r, double s);
Matrix7 cone_deriv_D(double r, double s);
// 2 D + d_s B^s, so that d_a (w B^a w) = w D~ w.
Matrix7 cone_Dtilde(double r, double s);

struct DtildeField {
  GridSpec grid;
  std::vector<Matrix7> entries;  // index i_r * N_s + j_s
  double c = 0.0;                // max |D~_ij| over the grid

  const Matrix7& at(std::size_t i_r, std::size_t j_s) const { return entries[i_r * grid.axes[1].points() + j_s]; }
};

// Evaluates D~ at every (r, s) grid point of the run volume. The entries do
// not depend on u or phi.
DtildeField derive_Dtilde(const GridSpec& grid);

struct ConeNull {
  FieldSlice P, Q, g;
};

// P_r = (a/r) R_s - P/r, Q_r = R_phi/(r a) - Q/r, g_r = R from the r0 values.
ConeNull cone_hypersurface_solve(const FieldSlice& R, std::span<const double> P0, std::span<const double> Q0,
                                 std::span<const double> g0, int order);

// R_u = [R_r + (1/r)(a P)_s + Q_phi/(r a)] / 2 on one slice.
FieldSlice cone_R_rhs(const FieldSlice& R, const FieldSlice& P, const FieldSlice& Q, int order);

class ConeSystem final : public CharSystem {
 public:
  explicit ConeSystem(ConeCharData data);

  const GridSpec& grid() const override { return data_.grid; }
  std::vector<std::string> normal_names() const override { return {"R"}; }
  std::vector<std::string> null_names() const override { return {"P", "Q"}; }
  std::vector<std::string> auxiliary_names() const override { return {"g"}; }
  EnergyForms energy_forms() const override { return {{2.0, 0.0, 0.0}, {-1.0, 1.0, 1.0}}; }

  State initial_normal() const override { return {data_.R_on_u0}; }
  void solve_null(std::size_t half_step, const State& normal, State& null) const override;
  void solve_auxiliary(std::size_t half_step, const State& normal, const State& null, State& aux) const override;
  void normal_rhs(std::size_t half_step, const State& normal, const State& null, State& out) const override;
  bool has_volume_source() const override { return true; }
  void volume_density(const State& normal, const State& null, FieldSlice& out) const override;

  const ConeCharData& data() const { return data_; }

 private:
  ConeCharData data_;
  mutable FieldSlice a_, b_;
};

class ConeDerivSystem final : public CharSystem {
 public:
  explicit ConeDerivSystem(ConeDerivData data);

  const GridSpec& grid() const override { return data_.grid; }
  std::vector<std::string> normal_names() const override { return {"Rhat_s", "Rhat_phi", "R_r"}; }
  std::vector<std::string> null_names() const override { return {"Phat_s", "Phat_phi", "Qhat_s", "Qhat_phi"}; }
  EnergyForms energy_forms() const override {
    return {{2.0, 2.0, 2.0, 0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, -1.0, 1.0, 1.0, 1.0, 1.0}};
  }

  State initial_normal() const override { return {data_.Rhat_s, data_.Rhat_phi, data_.R_r}; }
  void solve_null(std::size_t half_step, const State& normal, State& null) const override;
  void normal_rhs(std::size_t half_step, const State& normal, const State& null, State& out) const override;
  bool has_volume_source() const override { return true; }
  void volume_density(const State& normal, const State& null, FieldSlice& out) const override;

  const ConeDerivData& data() const { return data_; }
  const DtildeField& dtilde() const { return dtilde_; }

 private:
  ConeDerivData data_;
  DtildeField dtilde_;
  mutable FieldSlice a_, b_, c_;
};

EvolutionRecord cone_evolve(const ConeCharData& data, const MarchOptions& options = {});
EvolutionRecord cone_derivative_evolve(const ConeDerivData& data, const MarchOptions& options = {});

FieldSlice cone_advance_R(const ConeCharData& data, const FieldSlice& R, std::size_t step);

// P_u = (r0/r) P_u|r0 + (a / 2r) d_s int_r0^r (R_r + Ph_s + Qh_phi) dr',
// Q_u = (r0/r) Q_u|r0 + (1 / 2ra) d_phi int_r0^r (...) dr'.
UDerivatives cone_reconstruct_PuQu(const ConeDerivData& data, const EvolutionRecord& deriv_record,
                                   std::size_t step);

}  // namespace charwave
