#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace charwave {

enum class Geometry { cartesian_cauchy, nullplane, nullcone };

std::string_view to_string(Geometry g);

enum class AxisKind {
  periodic,       // N points, x_i = lower + i h, h = length / N
  bounded,        // N + 1 nodes including both ends
  cell_centered,  // N points at cell midpoints, never touches the ends
};

struct Axis {
  AxisKind kind = AxisKind::periodic;
  double lower = 0.0;
  double length = 1.0;
  std::size_t cells = 4;

  static Axis periodic(double lower, double length, std::size_t cells);
  static Axis bounded(double lower, double length, std::size_t cells);
  static Axis cell_centered(double lower, double length, std::size_t cells);

  std::size_t points() const { return kind == AxisKind::bounded ? cells + 1 : cells; }
  double spacing() const { return length / static_cast<double>(cells); }
  double upper() const { return lower + length; }
  double coord(std::size_t i) const;

  bool operator==(const Axis&) const = default;
};

using Shape = std::array<std::size_t, 3>;
using Axes = std::array<Axis, 3>;

// Slice axes are (x, y, z) for Cauchy, (z, x, y) for the null plane and
// (r, s, phi) for the null cone. The marching coordinate (t or u) is not
// part of the slice; `steps` counts its intervals over [0, T].
struct GridSpec {
  Geometry geometry = Geometry::nullplane;
  double T = 1.0;
  double r0 = 0.0;
  int order = 2;
  double cfl_factor = 0.25;
  std::size_t steps = 0;
  Axes axes{};

  double step() const { return T / static_cast<double>(steps); }
  Shape shape() const;
  std::size_t slice_size() const;
  bool characteristic() const { return geometry != Geometry::cartesian_cauchy; }
  // u-steps per station of the bounded axis; the diagonal u + z = T meets
  // station N - k at step k * stride().
  std::size_t stride() const;
  // Bounded axis over [0, T] with steps * subdivisions intervals.
  Axis marching_axis(std::size_t subdivisions = 1) const;
  double max_spacing() const;
  double min_spacing() const;

  // Throws UsageError naming the violated constraint.
  void validate() const;
};

struct CauchyGridParams {
  double T = 1.0;
  std::array<double, 3> lengths{1.0, 1.0, 1.0};
  std::array<std::size_t, 3> cells{32, 32, 32};
  std::size_t steps = 0;  // 0 picks the smallest count satisfying the CFL bound
  int order = 4;
  double cfl_factor = 0.25;
};

struct PlaneGridParams {
  double T = 1.0;
  double L_x = 6.283185307179586;
  double L_y = 6.283185307179586;
  std::size_t N_u = 0;  // 0 picks N_z * ceil(1 / cfl_factor)
  std::size_t N_z = 16;
  std::size_t N_x = 16;
  std::size_t N_y = 16;
  int order = 2;
  double cfl_factor = 0.25;
};

struct ConeGridParams {
  double T = 1.0;
  double r0 = 1.0;
  std::size_t N_u = 0;  // 0 picks N_r * ceil(1 / cfl_factor)
  std::size_t N_r = 16;
  std::size_t N_s = 12;
  std::size_t N_phi = 12;
  int order = 2;
  double cfl_factor = 0.25;
};

GridSpec make_cauchy_grid(const CauchyGridParams& p);
GridSpec make_nullplane_grid(const PlaneGridParams& p);
GridSpec make_nullcone_grid(const ConeGridParams& p);

// Dense samples over three axes, row-major with the last axis fastest.
class FieldSlice {
 public:
  FieldSlice() = default;
  explicit FieldSlice(const Axes& axes, double axis_value = 0.0, double fill = 0.0);

  template <class F>
  static FieldSlice sample(const Axes& axes, F&& f, double axis_value = 0.0) {
    FieldSlice out(axes, axis_value);
    const Shape n = out.shape();
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n[0]; ++i) {
      const double a = axes[0].coord(i);
      for (std::size_t j = 0; j < n[1]; ++j) {
        const double b = axes[1].coord(j);
        for (std::size_t k = 0; k < n[2]; ++k) out.values_[idx++] = f(a, b, axes[2].coord(k));
      }
    }
    return out;
  }

  const Axes& axes() const { return axes_; }
  const Axis& axis(int a) const { return axes_[static_cast<std::size_t>(a)]; }
  Shape shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double axis_value() const { return axis_value_; }
  void set_axis_value(double v) { axis_value_ = v; }

  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return values_[(i * shape_[1] + j) * shape_[2] + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return values_[(i * shape_[1] + j) * shape_[2] + k];
  }
  double& operator[](std::size_t idx) { return values_[idx]; }
  double operator[](std::size_t idx) const { return values_[idx]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool same_layout(const FieldSlice& o) const { return axes_ == o.axes_; }
  void require_same_layout(const FieldSlice& o, std::string_view what) const;

  bool all_finite() const;
  // Throws NumericalAbort carrying `context` and the first bad index.
  void check_finite(std::string_view context) const;

  void fill(double v);
  void axpy(double a, const FieldSlice& x);  // this += a * x
  FieldSlice& operator+=(const FieldSlice& o);
  FieldSlice& operator-=(const FieldSlice& o);
  FieldSlice& operator*=(double a);
  double max_abs() const;

 private:
  Axes axes_{};
  Shape shape_{0, 0, 0};
  double axis_value_ = 0.0;
  std::vector<double> values_;
};

FieldSlice operator+(FieldSlice a, const FieldSlice& b);
FieldSlice operator-(FieldSlice a, const FieldSlice& b);
FieldSlice operator*(double s, FieldSlice a);
double max_abs_diff(const FieldSlice& a, const FieldSlice& b);

using State = std::vector<FieldSlice>;

}  // namespace charwave
