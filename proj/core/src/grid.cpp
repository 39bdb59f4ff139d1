#include "charwave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "charwave/errors.hpp"

namespace charwave {

std::string_view to_string(Geometry g) {
  switch (g) {
    case Geometry::cartesian_cauchy: return "cauchy";
    case Geometry::nullplane: return "nullplane";
    case Geometry::nullcone: return "nullcone";
  }
  return "unknown";
}

Axis Axis::periodic(double lower, double length, std::size_t cells) {
  return Axis{AxisKind::periodic, lower, length, cells};
}

Axis Axis::bounded(double lower, double length, std::size_t cells) {
  return Axis{AxisKind::bounded, lower, length, cells};
}

Axis Axis::cell_centered(double lower, double length, std::size_t cells) {
  return Axis{AxisKind::cell_centered, lower, length, cells};
}

double Axis::coord(std::size_t i) const {
  const double h = spacing();
  if (kind == AxisKind::cell_centered) return lower + (static_cast<double>(i) + 0.5) * h;
  if (kind == AxisKind::bounded && i == cells) return upper();
  return lower + static_cast<double>(i) * h;
}

Shape GridSpec::shape() const {
  return {axes[0].points(), axes[1].points(), axes[2].points()};
}

std::size_t GridSpec::slice_size() const {
  const Shape n = shape();
  return n[0] * n[1] * n[2];
}

std::size_t GridSpec::stride() const {
  if (!characteristic()) throw UsageError("stride() is defined only for characteristic grids");
  return steps / axes[0].cells;
}

Axis GridSpec::marching_axis(std::size_t subdivisions) const {
  return Axis::bounded(0.0, T, steps * subdivisions);
}

double GridSpec::max_spacing() const {
  double h = step();
  for (const Axis& a : axes) h = std::max(h, a.spacing());
  return h;
}

double GridSpec::min_spacing() const {
  double h = axes[0].spacing();
  for (const Axis& a : axes) h = std::min(h, a.spacing());
  return h;
}

void GridSpec::validate() const {
  if (order != 2 && order != 4)
    throw UsageError(fmt::format("scheme_order must be one of {{2, 4}}, got {}", order));
  if (!(cfl_factor > 0.0) || !std::isfinite(cfl_factor))
    throw UsageError(fmt::format("cfl_factor must be positive, got {}", cfl_factor));
  if (!(T > 0.0) || !std::isfinite(T)) throw UsageError(fmt::format("T must be positive, got {}", T));
  if (steps < 4) throw UsageError(fmt::format("marching steps must be >= 4, got {}", steps));
  for (std::size_t a = 0; a < 3; ++a) {
    if (axes[a].cells < 4)
      throw UsageError(fmt::format("axis {} resolution must be >= 4, got {}", a, axes[a].cells));
    if (!(axes[a].length > 0.0)) throw UsageError(fmt::format("axis {} has non-positive extent", a));
  }
  const double tol = 1e-12;
  switch (geometry) {
    case Geometry::cartesian_cauchy: {
      for (const Axis& a : axes)
        if (a.kind != AxisKind::periodic) throw UsageError("Cauchy grids must be periodic on every axis");
      const double bound = cfl_factor * min_spacing();
      if (step() > bound * (1.0 + tol))
        throw UsageError(fmt::format("CFL violation: dt = {} exceeds {} * min(h) = {}", step(), cfl_factor, bound));
      break;
    }
    case Geometry::nullcone:
      if (!(r0 > 0.0)) throw UsageError(fmt::format("r0 must be positive for the null cone, got {}", r0));
      [[fallthrough]];
    case Geometry::nullplane: {
      if (axes[0].kind != AxisKind::bounded) throw UsageError("marching-surface axis must be bounded");
      if (std::abs(axes[0].length - T) > tol * T)
        throw UsageError("characteristic grids need the bounded axis to span exactly T");
      if (steps % axes[0].cells != 0)
        throw UsageError(fmt::format("N_u = {} must be a multiple of the radial/z resolution {}", steps,
                                     axes[0].cells));
      const double bound = cfl_factor * axes[0].spacing();
      if (step() > bound * (1.0 + tol))
        throw UsageError(fmt::format("CFL violation: du = {} exceeds {} * dz = {}", step(), cfl_factor, bound));
      break;
    }
  }
}

namespace {

std::size_t auto_char_steps(std::size_t n_bounded, double cfl) {
  return n_bounded * static_cast<std::size_t>(std::ceil(1.0 / cfl - 1e-12));
}

}  // namespace

GridSpec make_cauchy_grid(const CauchyGridParams& p) {
  GridSpec g;
  g.geometry = Geometry::cartesian_cauchy;
  g.T = p.T;
  g.order = p.order;
  g.cfl_factor = p.cfl_factor;
  for (std::size_t a = 0; a < 3; ++a) g.axes[a] = Axis::periodic(0.0, p.lengths[a], p.cells[a]);
  g.steps = p.steps;
  if (g.steps == 0 && p.cfl_factor > 0.0 && p.cells[0] > 0 && p.cells[1] > 0 && p.cells[2] > 0) {
    const double h = g.min_spacing();
    g.steps = static_cast<std::size_t>(std::ceil(p.T / (p.cfl_factor * h) - 1e-9));
  }
  g.validate();
  return g;
}

GridSpec make_nullplane_grid(const PlaneGridParams& p) {
  GridSpec g;
  g.geometry = Geometry::nullplane;
  g.T = p.T;
  g.order = p.order;
  g.cfl_factor = p.cfl_factor;
  g.axes = {Axis::bounded(0.0, p.T, p.N_z), Axis::periodic(0.0, p.L_x, p.N_x),
            Axis::periodic(0.0, p.L_y, p.N_y)};
  g.steps = p.N_u != 0 ? p.N_u : (p.cfl_factor > 0.0 ? auto_char_steps(p.N_z, p.cfl_factor) : 0);
  g.validate();
  return g;
}

GridSpec make_nullcone_grid(const ConeGridParams& p) {
  GridSpec g;
  g.geometry = Geometry::nullcone;
  g.T = p.T;
  g.r0 = p.r0;
  g.order = p.order;
  g.cfl_factor = p.cfl_factor;
  g.axes = {Axis::bounded(p.r0, p.T, p.N_r), Axis::cell_centered(-1.0, 2.0, p.N_s),
            Axis::periodic(0.0, 2.0 * std::numbers::pi, p.N_phi)};
  g.steps = p.N_u != 0 ? p.N_u : (p.cfl_factor > 0.0 ? auto_char_steps(p.N_r, p.cfl_factor) : 0);
  g.validate();
  return g;
}

FieldSlice::FieldSlice(const Axes& axes, double axis_value, double fill)
    : axes_(axes),
      shape_{axes[0].points(), axes[1].points(), axes[2].points()},
      axis_value_(axis_value),
      values_(shape_[0] * shape_[1] * shape_[2], fill) {}

void FieldSlice::require_same_layout(const FieldSlice& o, std::string_view what) const {
  if (!same_layout(o))
    throw UsageError(fmt::format("{}: field layouts differ ({}x{}x{} vs {}x{}x{})", what, shape_[0], shape_[1],
                                 shape_[2], o.shape_[0], o.shape_[1], o.shape_[2]));
}

bool FieldSlice::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void FieldSlice::check_finite(std::string_view context) const {
  for (std::size_t idx = 0; idx < values_.size(); ++idx) {
    if (!std::isfinite(values_[idx])) {
      const std::size_t k = idx % shape_[2];
      const std::size_t j = (idx / shape_[2]) % shape_[1];
      const std::size_t i = idx / (shape_[1] * shape_[2]);
      throw NumericalAbort(fmt::format("{}: non-finite value {} at index ({}, {}, {}), slice coordinate {}",
                                       context, values_[idx], i, j, k, axis_value_));
    }
  }
}

void FieldSlice::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

void FieldSlice::axpy(double a, const FieldSlice& x) {
  require_same_layout(x, "axpy");
  const double* xs = x.values_.data();
  double* ys = values_.data();
  const std::size_t n = values_.size();
  for (std::size_t i = 0; i < n; ++i) ys[i] += a * xs[i];
}

FieldSlice& FieldSlice::operator+=(const FieldSlice& o) {
  axpy(1.0, o);
  return *this;
}

FieldSlice& FieldSlice::operator-=(const FieldSlice& o) {
  axpy(-1.0, o);
  return *this;
}

FieldSlice& FieldSlice::operator*=(double a) {
  for (double& v : values_) v *= a;
  return *this;
}

double FieldSlice::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

FieldSlice operator+(FieldSlice a, const FieldSlice& b) { return a += b; }
FieldSlice operator-(FieldSlice a, const FieldSlice& b) { return a -= b; }
FieldSlice operator*(double s, FieldSlice a) { return a *= s; }

double max_abs_diff(const FieldSlice& a, const FieldSlice& b) {
  a.require_same_layout(b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace charwave
