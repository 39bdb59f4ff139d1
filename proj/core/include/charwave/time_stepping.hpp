#pragma once

#include <fmt/format.h>

#include "charwave/errors.hpp"
#include "charwave/grid.hpp"

namespace charwave {

struct RkWorkspace {
  State k1, k2, k3, k4, stage;
};

namespace detail {

inline void match_shape(State& s, const State& y) {
  if (s.size() != y.size()) s.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!s[i].same_layout(y[i])) s[i] = FieldSlice(y[i].axes(), y[i].axis_value());
}

inline void combine(State& out, const State& y, double a, const State& k) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    auto o = out[i].values();
    auto yy = y[i].values();
    auto kk = k[i].values();
    for (std::size_t j = 0; j < o.size(); ++j) o[j] = yy[j] + a * kk[j];
  }
}

}  // namespace detail

// One explicit step: midpoint RK2 for order 2, classical RK4 for order 4.
// rhs(half, y, dy) evaluates dy/dt at t_n + half * dt / 2.
template <class Rhs>
void rk_step(State& y, double dt, int order, Rhs&& rhs, RkWorkspace& ws) {
  detail::match_shape(ws.k1, y);
  detail::match_shape(ws.k2, y);
  detail::match_shape(ws.stage, y);
  if (order == 2) {
    rhs(0, y, ws.k1);
    detail::combine(ws.stage, y, 0.5 * dt, ws.k1);
    rhs(1, ws.stage, ws.k2);
    for (std::size_t i = 0; i < y.size(); ++i) y[i].axpy(dt, ws.k2[i]);
    return;
  }
  if (order != 4) throw UsageError(fmt::format("unsupported time-stepping order {}", order));
  detail::match_shape(ws.k3, y);
  detail::match_shape(ws.k4, y);
  rhs(0, y, ws.k1);
  detail::combine(ws.stage, y, 0.5 * dt, ws.k1);
  rhs(1, ws.stage, ws.k2);
  detail::combine(ws.stage, y, 0.5 * dt, ws.k2);
  rhs(1, ws.stage, ws.k3);
  detail::combine(ws.stage, y, dt, ws.k3);
  rhs(2, ws.stage, ws.k4);
  for (std::size_t i = 0; i < y.size(); ++i) {
    auto yy = y[i].values();
    auto a = ws.k1[i].values();
    auto b = ws.k2[i].values();
    auto c = ws.k3[i].values();
    auto d = ws.k4[i].values();
    for (std::size_t j = 0; j < yy.size(); ++j) yy[j] += dt / 6.0 * (a[j] + 2.0 * b[j] + 2.0 * c[j] + d[j]);
  }
}

}  // namespace charwave
