#include "charwave/nullplane.hpp"

#include <fmt/format.h>

#include "charwave/errors.hpp"
#include "charwave/operators.hpp"
#include "charwave/time_stepping.hpp"

namespace charwave {

namespace {

void require_plane_grid(const GridSpec& g) {
  if (g.geometry != Geometry::nullplane) throw UsageError("expected a null-plane grid");
  g.validate();
}

void require_axes(const FieldSlice& f, const Axes& axes, const char* what) {
  if (f.axes() != axes) throw UsageError(fmt::format("{} does not match the grid layout", what));
}

}  // namespace

Axes transverse_axes(const GridSpec& grid) { return {grid.marching_axis(2), grid.axes[1], grid.axes[2]}; }

PlaneCharData PlaneCharData::zero(const GridSpec& grid) {
  require_plane_grid(grid);
  const Axes t = transverse_axes(grid);
  return {grid, FieldSlice(grid.axes), FieldSlice(t), FieldSlice(t), FieldSlice(t)};
}

PlaneCharData PlaneCharData::sample(const GridSpec& grid, const Sampler3& R, const Sampler3& P, const Sampler3& Q,
                                    const Sampler3& psi) {
  require_plane_grid(grid);
  const Axes t = transverse_axes(grid);
  PlaneCharData d{grid, FieldSlice::sample(grid.axes, R), FieldSlice::sample(t, P), FieldSlice::sample(t, Q),
                  FieldSlice::sample(t, psi)};
  d.validate();
  return d;
}

void PlaneCharData::validate() const {
  require_plane_grid(grid);
  const Axes t = transverse_axes(grid);
  require_axes(R_on_u0, grid.axes, "R on u = 0");
  require_axes(P_on_z0, t, "P on z = 0");
  require_axes(Q_on_z0, t, "Q on z = 0");
  require_axes(psi_on_z0, t, "psi on z = 0");
  R_on_u0.check_finite("R on u = 0");
  P_on_z0.check_finite("P on z = 0");
  Q_on_z0.check_finite("Q on z = 0");
  psi_on_z0.check_finite("psi on z = 0");
}

PlaneDerivData PlaneDerivData::from(const PlaneCharData& data) {
  data.validate();
  const int p = data.grid.order;
  PlaneDerivData d;
  d.grid = data.grid;
  d.R_x = deriv(data.R_on_u0, 1, p);
  d.R_y = deriv(data.R_on_u0, 2, p);
  d.R_z = deriv(data.R_on_u0, 0, p);
  d.P_x = deriv(data.P_on_z0, 1, p);
  d.Q_x = deriv(data.Q_on_z0, 1, p);
  d.P_y = deriv(data.P_on_z0, 2, p);
  d.Q_y = deriv(data.Q_on_z0, 2, p);
  d.P_u = deriv(data.P_on_z0, 0, p);
  d.Q_u = deriv(data.Q_on_z0, 0, p);
  return d;
}

void PlaneDerivData::validate() const {
  require_plane_grid(grid);
  const Axes t = transverse_axes(grid);
  for (const FieldSlice* f : {&R_x, &R_y, &R_z}) require_axes(*f, grid.axes, "derivative data on u = 0");
  for (const FieldSlice* f : {&P_x, &Q_x, &P_y, &Q_y, &P_u, &Q_u})
    require_axes(*f, t, "derivative data on z = 0");
}

PlaneNull plane_hypersurface_solve(const FieldSlice& R, std::span<const double> P0, std::span<const double> Q0,
                                   std::span<const double> psi0, int order) {
  return {march_ode(deriv(R, 1, order), P0, 0, order), march_ode(deriv(R, 2, order), Q0, 0, order),
          march_ode(R, psi0, 0, order)};
}

FieldSlice plane_R_rhs(const FieldSlice& R, const FieldSlice& P, const FieldSlice& Q, int order) {
  R.require_same_layout(P, "plane_R_rhs");
  R.require_same_layout(Q, "plane_R_rhs");
  FieldSlice out = deriv(P, 1, order);
  out += deriv(Q, 2, order);
  out += deriv(R, 0, order);
  out *= 0.5;
  return out;
}

PlaneSystem::PlaneSystem(PlaneCharData data) : data_(std::move(data)) { data_.validate(); }

void PlaneSystem::solve_null(std::size_t half_step, const State& normal, State& null) const {
  const int p = data_.grid.order;
  const FieldSlice& R = normal[0];
  deriv_into(R, 1, p, a_);
  march_ode_into(a_, plane_view(data_.P_on_z0, half_step), 0, p, 0, null[0]);
  deriv_into(R, 2, p, a_);
  march_ode_into(a_, plane_view(data_.Q_on_z0, half_step), 0, p, 0, null[1]);
}

void PlaneSystem::solve_auxiliary(std::size_t half_step, const State& normal, const State&, State& aux) const {
  march_ode_into(normal[0], plane_view(data_.psi_on_z0, half_step), 0, data_.grid.order, 0, aux[0]);
}

void PlaneSystem::normal_rhs(std::size_t, const State& normal, const State& null, State& out) const {
  const int p = data_.grid.order;
  FieldSlice& dR = out[0];
  deriv_into(null[0], 1, p, dR);
  deriv_into(null[1], 2, p, a_);
  dR += a_;
  deriv_into(normal[0], 0, p, a_);
  dR += a_;
  dR *= 0.5;
}

PlaneDerivSystem::PlaneDerivSystem(PlaneDerivData data) : data_(std::move(data)) { data_.validate(); }

void PlaneDerivSystem::solve_null(std::size_t half_step, const State& normal, State& null) const {
  const int p = data_.grid.order;
  const FieldSlice& Rx = normal[0];
  const FieldSlice& Ry = normal[1];
  deriv_into(Rx, 1, p, a_);
  march_ode_into(a_, plane_view(data_.P_x, half_step), 0, p, 0, null[0]);
  deriv_into(Rx, 2, p, a_);
  march_ode_into(a_, plane_view(data_.Q_x, half_step), 0, p, 0, null[1]);
  deriv_into(Ry, 1, p, a_);
  march_ode_into(a_, plane_view(data_.P_y, half_step), 0, p, 0, null[2]);
  deriv_into(Ry, 2, p, a_);
  march_ode_into(a_, plane_view(data_.Q_y, half_step), 0, p, 0, null[3]);
}

void PlaneDerivSystem::normal_rhs(std::size_t, const State& normal, const State& null, State& out) const {
  const int p = data_.grid.order;
  const FieldSlice& Rx = normal[0];
  const FieldSlice& Ry = normal[1];
  const FieldSlice& Rz = normal[2];
  const FieldSlice& Px = null[0];
  const FieldSlice& Qx = null[1];
  const FieldSlice& Py = null[2];
  const FieldSlice& Qy = null[3];

  auto sum_half = [&](FieldSlice& dst, std::initializer_list<std::pair<const FieldSlice*, int>> terms) {
    bool first = true;
    for (const auto& [f, axis] : terms) {
      if (first) {
        deriv_into(*f, axis, p, dst);
        first = false;
      } else {
        deriv_into(*f, axis, p, a_);
        dst += a_;
      }
    }
    dst *= 0.5;
  };
  sum_half(out[0], {{&Px, 1}, {&Qx, 2}, {&Rz, 1}});
  sum_half(out[1], {{&Py, 1}, {&Qy, 2}, {&Rz, 2}});
  sum_half(out[2], {{&Rx, 1}, {&Ry, 2}, {&Rz, 0}});
}

EvolutionRecord plane_evolve(const PlaneCharData& data, const MarchOptions& options) {
  return march(PlaneSystem(data), options);
}

EvolutionRecord plane_derivative_evolve(const PlaneDerivData& data, const MarchOptions& options) {
  return march(PlaneDerivSystem(data), options);
}

FieldSlice plane_advance_R(const PlaneCharData& data, const FieldSlice& R, std::size_t step) {
  const GridSpec& g = data.grid;
  if (step >= g.steps) throw UsageError(fmt::format("step {} is past the final step {}", step, g.steps));
  if (R.axes() != g.axes) throw UsageError("R does not match the grid layout");
  const PlaneSystem sys(data);
  State y{R};
  State null(2, FieldSlice(g.axes));
  RkWorkspace ws;
  auto rhs = [&](int half, const State& s, State& ds) {
    const std::size_t h = 2 * step + static_cast<std::size_t>(half);
    sys.solve_null(h, s, null);
    sys.normal_rhs(h, s, null, ds);
  };
  rk_step(y, g.step(), g.order, rhs, ws);
  y[0].set_axis_value(static_cast<double>(step + 1) * g.step());
  y[0].check_finite(fmt::format("R after u-step {}", step + 1));
  return y[0];
}

UDerivatives plane_reconstruct_PuQu(const PlaneDerivData& data, const EvolutionRecord& deriv_record,
                                    std::size_t step) {
  const auto it = deriv_record.snapshots.find(step);
  if (it == deriv_record.snapshots.end())
    throw UsageError(fmt::format("no derivative-system snapshot at step {}", step));
  const State& w = it->second;
  const int p = data.grid.order;
  FieldSlice source = w[deriv_record.index_of("P_x")];
  source += w[deriv_record.index_of("Q_y")];
  source += w[deriv_record.index_of("R_z")];
  const FieldSlice integral = cumulative_integral(source, 0, p);

  const std::size_t h = 2 * step;
  const double u = static_cast<double>(step) * data.grid.step();
  UDerivatives out{FieldSlice(data.grid.axes, u), FieldSlice(data.grid.axes, u)};
  const auto pu0 = plane_view(data.P_u, h);
  const auto qu0 = plane_view(data.Q_u, h);
  const FieldSlice dIx = deriv(integral, 1, p);
  const FieldSlice dIy = deriv(integral, 2, p);
  const std::size_t m = pu0.size();
  for (std::size_t idx = 0; idx < out.P_u.size(); ++idx) {
    out.P_u[idx] = pu0[idx % m] + 0.5 * dIx[idx];
    out.Q_u[idx] = qu0[idx % m] + 0.5 * dIy[idx];
  }
  out.P_u.check_finite("reconstructed P_u");
  out.Q_u.check_finite("reconstructed Q_u");
  return out;
}

}  // namespace charwave
