#include "charwave/cauchy.hpp"

#include <cmath>

#include <fmt/format.h>

#include "charwave/errors.hpp"
#include "charwave/operators.hpp"
#include "charwave/time_stepping.hpp"

namespace charwave {

namespace {

State pack(const CauchyState& s) {
  State out{s.U, s.P, s.Q, s.R};
  if (s.has_psi()) out.push_back(s.psi);
  return out;
}

void unpack(State& in, CauchyState& s) {
  s.U = std::move(in[0]);
  s.P = std::move(in[1]);
  s.Q = std::move(in[2]);
  s.R = std::move(in[3]);
  if (in.size() > 4) s.psi = std::move(in[4]);
}

void rhs_into(const State& y, int order, State& dy, FieldSlice& scratch) {
  const FieldSlice& U = y[0];
  deriv_into(y[1], 0, order, dy[0]);
  deriv_into(y[2], 1, order, scratch);
  dy[0] += scratch;
  deriv_into(y[3], 2, order, scratch);
  dy[0] += scratch;
  deriv_into(U, 0, order, dy[1]);
  deriv_into(U, 1, order, dy[2]);
  deriv_into(U, 2, order, dy[3]);
  if (y.size() > 4) dy[4] = U;
}

void check_dt(const GridSpec& g, double dt) {
  const double bound = g.cfl_factor * g.min_spacing();
  if (!(dt > 0.0) || dt > bound * (1.0 + 1e-12))
    throw UsageError(fmt::format("CFL violation: dt = {} exceeds {} * min(h) = {}", dt, g.cfl_factor, bound));
}

}  // namespace

CauchyState CauchyState::zero(const GridSpec& grid, bool with_psi) {
  grid.validate();
  if (grid.geometry != Geometry::cartesian_cauchy) throw UsageError("expected a Cauchy grid");
  CauchyState s;
  s.grid = grid;
  s.U = s.P = s.Q = s.R = FieldSlice(grid.axes);
  if (with_psi) s.psi = FieldSlice(grid.axes);
  return s;
}

void CauchyState::validate() const {
  if (grid.geometry != Geometry::cartesian_cauchy) throw UsageError("Cauchy state needs a Cauchy grid");
  for (const FieldSlice* f : {&U, &P, &Q, &R})
    if (f->axes() != grid.axes) throw UsageError("Cauchy fields must share one grid");
  if (has_psi() && psi.axes() != grid.axes) throw UsageError("psi does not match the Cauchy grid");
}

CauchyState cauchy_sample(const GridSpec& grid, const CauchyInitializer& init, double t) {
  CauchyState s = CauchyState::zero(grid, static_cast<bool>(init.psi));
  s.t = t;
  s.U = FieldSlice::sample(grid.axes, init.U, t);
  s.P = FieldSlice::sample(grid.axes, init.P, t);
  s.Q = FieldSlice::sample(grid.axes, init.Q, t);
  s.R = FieldSlice::sample(grid.axes, init.R, t);
  if (init.psi) s.psi = FieldSlice::sample(grid.axes, init.psi, t);
  return s;
}

CauchyState cauchy_rhs(const CauchyState& state) {
  state.validate();
  for (const Axis& a : state.grid.axes)
    if (a.kind != AxisKind::periodic) throw UsageError("cauchy_rhs needs a periodic grid");
  State y = pack(state);
  State dy(y.size(), FieldSlice(state.grid.axes, state.t));
  FieldSlice scratch;
  rhs_into(y, state.grid.order, dy, scratch);
  CauchyState out = state;
  unpack(dy, out);
  return out;
}

CauchyState cauchy_step(const CauchyState& state, double dt) {
  state.validate();
  check_dt(state.grid, dt);
  State y = pack(state);
  RkWorkspace ws;
  FieldSlice scratch;
  rk_step(y, dt, state.grid.order, [&](int, const State& s, State& ds) { rhs_into(s, state.grid.order, ds, scratch); },
          ws);
  CauchyState out = state;
  unpack(y, out);
  out.t = state.t + dt;
  for (const FieldSlice* f : {&out.U, &out.P, &out.Q, &out.R}) f->check_finite("Cauchy step");
  return out;
}

CauchyState cauchy_evolve(const CauchyState& initial,
                          const std::function<void(std::size_t, const CauchyState&)>& observer) {
  initial.validate();
  const GridSpec& g = initial.grid;
  const double dt = g.step();
  check_dt(g, dt);
  State y = pack(initial);
  RkWorkspace ws;
  FieldSlice scratch;
  CauchyState current = initial;
  for (std::size_t n = 0; n < g.steps; ++n) {
    rk_step(y, dt, g.order, [&](int, const State& s, State& ds) { rhs_into(s, g.order, ds, scratch); }, ws);
    for (auto& f : y) f.check_finite(fmt::format("Cauchy field after step {}", n + 1));
    if (observer) {
      State copy = y;
      unpack(copy, current);
      current.t = initial.t + static_cast<double>(n + 1) * dt;
      observer(n + 1, current);
    }
  }
  unpack(y, current);
  current.t = initial.t + g.T;
  return current;
}

std::array<double, 3> constraint_residual(const CauchyState& state) {
  state.validate();
  if (!state.has_psi()) throw UsageError("constraint_residual needs psi in the state");
  const int p = state.grid.order;
  std::array<double, 3> out{};
  const FieldSlice* comps[3] = {&state.P, &state.Q, &state.R};
  for (int a = 0; a < 3; ++a) {
    FieldSlice c = *comps[a];
    c -= deriv_periodic(state.psi, a, p);
    for (double& v : c.values()) v *= v;
    out[static_cast<std::size_t>(a)] = std::sqrt(quadrature_slice(c, p));
  }
  return out;
}

double cauchy_norm(const CauchyState& state) {
  state.validate();
  FieldSlice e(state.grid.axes);
  const std::size_t n = e.size();
  for (std::size_t i = 0; i < n; ++i)
    e[i] = state.U[i] * state.U[i] + state.P[i] * state.P[i] + state.Q[i] * state.Q[i] + state.R[i] * state.R[i];
  return quadrature_slice(e, state.grid.order);
}

CauchyState cauchy_differentiate(const CauchyState& state, int axis) {
  state.validate();
  const int p = state.grid.order;
  CauchyState out = state;
  out.U = deriv_periodic(state.U, axis, p);
  out.P = deriv_periodic(state.P, axis, p);
  out.Q = deriv_periodic(state.Q, axis, p);
  out.R = deriv_periodic(state.R, axis, p);
  if (state.has_psi()) out.psi = deriv_periodic(state.psi, axis, p);
  return out;
}

}  // namespace charwave
