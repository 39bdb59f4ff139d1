#pragma once

#include <array>
#include <functional>

#include "charwave/grid.hpp"

namespace charwave {

// First-order reduction U = psi_t, (P, Q, R) = grad psi on a periodic box.
struct CauchyState {
  GridSpec grid;
  double t = 0.0;
  FieldSlice U, P, Q, R;
  FieldSlice psi;  // empty when psi is not carried

  static CauchyState zero(const GridSpec& grid, bool with_psi = true);

  bool has_psi() const { return !psi.empty(); }
  void validate() const;
};

using CauchySampler = std::function<double(double, double, double)>;

struct CauchyInitializer {
  CauchySampler U, P, Q, R;
  CauchySampler psi;  // optional
};

CauchyState cauchy_sample(const GridSpec& grid, const CauchyInitializer& init, double t = 0.0);

// (U_t, P_t, Q_t, R_t, psi_t) = (P_x + Q_y + R_z, U_x, U_y, U_z, U).
CauchyState cauchy_rhs(const CauchyState& state);

// One RK step (midpoint for p = 2, classical RK4 for p = 4). Throws
// UsageError when dt exceeds cfl_factor * min(h).
CauchyState cauchy_step(const CauchyState& state, double dt);

// grid.steps steps of size grid.step(); observer(step, state) after each.
CauchyState cauchy_evolve(const CauchyState& initial,
                          const std::function<void(std::size_t, const CauchyState&)>& observer = {});

// L2 norms of P - psi_x, Q - psi_y, R - psi_z.
std::array<double, 3> constraint_residual(const CauchyState& state);

// Integral of U^2 + P^2 + Q^2 + R^2 over the box.
double cauchy_norm(const CauchyState& state);

// Applies d/dx_axis to every field (the differentiated system has the same form).
CauchyState cauchy_differentiate(const CauchyState& state, int axis);

}  // namespace charwave
