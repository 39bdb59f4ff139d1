#include "charwave/operators.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>

#include "charwave/errors.hpp"

namespace charwave {

namespace {

// Slice viewed as (outer, n, inner) around `axis`.
struct AxisView {
  std::size_t outer;
  std::size_t n;
  std::size_t inner;
};

AxisView view_of(const FieldSlice& f, int axis) {
  if (axis < 0 || axis > 2) throw UsageError(fmt::format("axis index {} out of range", axis));
  const Shape s = f.shape();
  switch (axis) {
    case 0: return {1, s[0], s[1] * s[2]};
    case 1: return {s[0], s[1], s[2]};
    default: return {s[0] * s[1], s[2], 1};
  }
}

void check_order(int order) {
  if (order != 2 && order != 4) throw UsageError(fmt::format("scheme order must be 2 or 4, got {}", order));
}

struct Row {
  std::array<std::size_t, 5> idx{};
  std::array<double, 5> c{};
  int len = 0;
};

std::vector<Row> periodic_rows(std::size_t n, double h, int order) {
  std::vector<Row> rows(n);
  const auto wrap = [n](std::ptrdiff_t i) {
    const auto m = static_cast<std::ptrdiff_t>(n);
    return static_cast<std::size_t>(((i % m) + m) % m);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<std::ptrdiff_t>(i);
    Row& r = rows[i];
    if (order == 2) {
      r.len = 2;
      r.idx = {wrap(ii - 1), wrap(ii + 1)};
      r.c = {-0.5 / h, 0.5 / h};
    } else {
      r.len = 4;
      r.idx = {wrap(ii - 2), wrap(ii - 1), wrap(ii + 1), wrap(ii + 2)};
      const double s = 1.0 / (12.0 * h);
      r.c = {s, -8.0 * s, 8.0 * s, -s};
    }
  }
  return rows;
}

std::vector<Row> bounded_rows(std::size_t n, double h, int order) {
  std::vector<Row> rows(n);
  const auto mirror = [&](std::size_t i, const Row& left) {
    Row r;
    r.len = left.len;
    for (int t = 0; t < left.len; ++t) {
      r.idx[static_cast<std::size_t>(t)] = n - 1 - left.idx[static_cast<std::size_t>(t)];
      r.c[static_cast<std::size_t>(t)] = -left.c[static_cast<std::size_t>(t)];
    }
    rows[i] = r;
  };
  if (order == 2) {
    const double s = 1.0 / (2.0 * h);
    Row edge{{0, 1, 2}, {-3.0 * s, 4.0 * s, -s}, 3};
    rows[0] = edge;
    mirror(n - 1, edge);
    for (std::size_t i = 1; i + 1 < n; ++i) rows[i] = Row{{i - 1, i + 1}, {-s, s}, 2};
  } else {
    const double s = 1.0 / (12.0 * h);
    Row e0{{0, 1, 2, 3, 4}, {-25.0 * s, 48.0 * s, -36.0 * s, 16.0 * s, -3.0 * s}, 5};
    Row e1{{0, 1, 2, 3, 4}, {-3.0 * s, -10.0 * s, 18.0 * s, -6.0 * s, s}, 5};
    rows[0] = e0;
    rows[1] = e1;
    mirror(n - 1, e0);
    mirror(n - 2, e1);
    for (std::size_t i = 2; i + 2 < n; ++i)
      rows[i] = Row{{i - 2, i - 1, i + 1, i + 2}, {s, -8.0 * s, 8.0 * s, -s}, 4};
  }
  return rows;
}

void apply_rows(const FieldSlice& f, int axis, const std::vector<Row>& rows, FieldSlice& out) {
  const AxisView v = view_of(f, axis);
  const double* src = f.values().data();
  double* dst = out.values().data();
  for (std::size_t o = 0; o < v.outer; ++o) {
    const std::size_t base = o * v.n;
    for (std::size_t i = 0; i < v.n; ++i) {
      double* d = dst + (base + i) * v.inner;
      const Row& r = rows[i];
      for (std::size_t q = 0; q < v.inner; ++q) d[q] = 0.0;
      for (int t = 0; t < r.len; ++t) {
        const double c = r.c[static_cast<std::size_t>(t)];
        const double* s = src + (base + r.idx[static_cast<std::size_t>(t)]) * v.inner;
        for (std::size_t q = 0; q < v.inner; ++q) d[q] += c * s[q];
      }
    }
  }
}

void prepare_out(const FieldSlice& f, FieldSlice& out) {
  if (&out == &f) throw UsageError("output must not alias the input field");
  if (!out.same_layout(f)) out = FieldSlice(f.axes(), f.axis_value());
  out.set_axis_value(f.axis_value());
}

}  // namespace

void deriv_into(const FieldSlice& f, int axis, int order, FieldSlice& out) {
  check_order(order);
  const Axis& ax = f.axis(axis);
  const std::size_t n = ax.points();
  prepare_out(f, out);
  if (ax.kind == AxisKind::periodic) {
    if (n < static_cast<std::size_t>(order + 1))
      throw UsageError(fmt::format("periodic derivative needs >= {} points, axis has {}", order + 1, n));
    apply_rows(f, axis, periodic_rows(n, ax.spacing(), order), out);
  } else {
    const std::size_t need = order == 2 ? 3 : 5;
    if (n < need)
      throw UsageError(fmt::format("bounded derivative of order {} needs >= {} points, axis has {}", order,
                                   need, n));
    apply_rows(f, axis, bounded_rows(n, ax.spacing(), order), out);
  }
}

FieldSlice deriv(const FieldSlice& f, int axis, int order) {
  FieldSlice out(f.axes(), f.axis_value());
  deriv_into(f, axis, order, out);
  return out;
}

FieldSlice deriv_periodic(const FieldSlice& f, int axis, int order) {
  view_of(f, axis);
  if (f.axis(axis).kind != AxisKind::periodic)
    throw UsageError(fmt::format("deriv_periodic: axis {} is not periodic", axis));
  return deriv(f, axis, order);
}

FieldSlice deriv_bounded(const FieldSlice& f, int axis, int order) {
  view_of(f, axis);
  if (f.axis(axis).kind == AxisKind::periodic)
    throw UsageError(fmt::format("deriv_bounded: axis {} is periodic", axis));
  return deriv(f, axis, order);
}

void march_ode_into(const FieldSlice& rhs, std::span<const double> boundary, int axis, int order,
                    int damping_power, FieldSlice& out) {
  check_order(order);
  const AxisView v = view_of(rhs, axis);
  const Axis& ax = rhs.axis(axis);
  if (ax.kind == AxisKind::periodic) throw UsageError("march_ode: cannot march along a periodic axis");
  if (boundary.size() != v.outer * v.inner)
    throw UsageError(fmt::format("march_ode: boundary has {} values, expected {}", boundary.size(),
                                 v.outer * v.inner));
  if (damping_power < 0) throw UsageError("march_ode: damping power must be non-negative");
  if (damping_power > 0 && !(ax.coord(0) > 0.0))
    throw UsageError("march_ode: damping needs a strictly positive coordinate");
  prepare_out(rhs, out);

  const std::size_t n = v.n;
  const double h = ax.spacing();
  std::vector<double> xk(n, 1.0);
  if (damping_power > 0)
    for (std::size_t i = 0; i < n; ++i) xk[i] = std::pow(ax.coord(i), damping_power);

  const bool cubic = order == 4 && n >= 4;
  const double* src = rhs.values().data();
  double* dst = out.values().data();
  const auto at = [&](std::size_t o, std::size_t i) { return (o * n + i) * v.inner; };

  for (std::size_t o = 0; o < v.outer; ++o) {
    double* first = dst + at(o, 0);
    for (std::size_t q = 0; q < v.inner; ++q) first[q] = xk[0] * boundary[o * v.inner + q];
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double* prev = dst + at(o, i);
      double* next = dst + at(o, i + 1);
      std::size_t lo;
      std::array<double, 4> w;
      int len;
      if (!cubic) {
        lo = i;
        w = {0.5 * h, 0.5 * h, 0.0, 0.0};
        len = 2;
      } else if (i == 0) {
        lo = 0;
        w = {9.0, 19.0, -5.0, 1.0};
        len = 4;
      } else if (i + 2 == n) {
        lo = n - 4;
        w = {1.0, -5.0, 19.0, 9.0};
        len = 4;
      } else {
        lo = i - 1;
        w = {-1.0, 13.0, 13.0, -1.0};
        len = 4;
      }
      if (cubic)
        for (double& c : w) c *= h / 24.0;
      for (std::size_t q = 0; q < v.inner; ++q) next[q] = prev[q];
      for (int t = 0; t < len; ++t) {
        const std::size_t j = lo + static_cast<std::size_t>(t);
        const double c = w[static_cast<std::size_t>(t)] * xk[j];
        const double* s = src + at(o, j);
        for (std::size_t q = 0; q < v.inner; ++q) next[q] += c * s[q];
      }
    }
    if (damping_power > 0) {
      for (std::size_t i = 0; i < n; ++i) {
        double* row = dst + at(o, i);
        const double inv = 1.0 / xk[i];
        for (std::size_t q = 0; q < v.inner; ++q) row[q] *= inv;
      }
    }
  }
}

FieldSlice march_ode(const FieldSlice& rhs, std::span<const double> boundary, int axis, int order,
                     int damping_power) {
  FieldSlice out(rhs.axes(), rhs.axis_value());
  march_ode_into(rhs, boundary, axis, order, damping_power, out);
  return out;
}

FieldSlice cumulative_integral(const FieldSlice& f, int axis, int order) {
  const AxisView v = view_of(f, axis);
  const std::vector<double> zero(v.outer * v.inner, 0.0);
  return march_ode(f, zero, axis, order, 0);
}

std::vector<double> node_weights(std::size_t points, double h, int order) {
  check_order(order);
  std::vector<double> w(points, h);
  if (points == 0) return w;
  if (points == 1) {
    w[0] = 0.0;
    return w;
  }
  const auto set_ends = [&](std::initializer_list<double> left) {
    std::size_t i = 0;
    for (double c : left) {
      w[i] = c * h;
      w[points - 1 - i] = c * h;
      ++i;
    }
  };
  if (order == 2 || points == 2) {
    set_ends({0.5});
  } else if (points >= 6) {
    set_ends({3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0});
  } else if (points == 5) {
    set_ends({1.0 / 3.0, 4.0 / 3.0});
    w[2] = 2.0 / 3.0 * h;
  } else if (points == 4) {
    set_ends({3.0 / 8.0, 9.0 / 8.0});
  } else {
    set_ends({1.0 / 3.0});
    w[1] = 4.0 / 3.0 * h;
  }
  return w;
}

std::vector<double> quadrature_weights(const Axis& axis, int order) {
  check_order(order);
  const double h = axis.spacing();
  switch (axis.kind) {
    case AxisKind::periodic: return std::vector<double>(axis.points(), h);
    case AxisKind::bounded: return node_weights(axis.points(), h, order);
    case AxisKind::cell_centered: {
      const std::size_t n = axis.points();
      std::vector<double> w(n, h);
      if (order == 4 && n >= 6) {
        const double c[3] = {26.0 / 24.0, 21.0 / 24.0, 25.0 / 24.0};
        for (std::size_t i = 0; i < 3; ++i) {
          w[i] = c[i] * h;
          w[n - 1 - i] = c[i] * h;
        }
      }
      return w;
    }
  }
  return {};
}

double quadrature_slice(const FieldSlice& f, int order) {
  const auto w0 = quadrature_weights(f.axis(0), order);
  const auto w1 = quadrature_weights(f.axis(1), order);
  const auto w2 = quadrature_weights(f.axis(2), order);
  const Shape n = f.shape();
  double total = 0.0;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n[0]; ++i) {
    double plane = 0.0;
    for (std::size_t j = 0; j < n[1]; ++j) {
      double line = 0.0;
      for (std::size_t k = 0; k < n[2]; ++k) line += w2[k] * f[idx++];
      plane += w1[j] * line;
    }
    total += w0[i] * plane;
  }
  if (!std::isfinite(total)) throw NumericalAbort("quadrature_slice: non-finite integral");
  return total;
}

double quadrature_plane(const FieldSlice& f, std::size_t i, int order) {
  const Shape n = f.shape();
  if (i >= n[0]) throw UsageError("quadrature_plane: index out of range");
  const auto w1 = quadrature_weights(f.axis(1), order);
  const auto w2 = quadrature_weights(f.axis(2), order);
  double plane = 0.0;
  std::size_t idx = i * n[1] * n[2];
  for (std::size_t j = 0; j < n[1]; ++j) {
    double line = 0.0;
    for (std::size_t k = 0; k < n[2]; ++k) line += w2[k] * f[idx++];
    plane += w1[j] * line;
  }
  return plane;
}

double quadrature_volume(std::span<const double> series, double step, int order) {
  const auto w = node_weights(series.size(), step, order);
  double total = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) total += w[i] * series[i];
  return total;
}

std::vector<double> lower_plane(const FieldSlice& f) {
  const Shape n = f.shape();
  const std::size_t m = n[1] * n[2];
  return std::vector<double>(f.values().begin(), f.values().begin() + static_cast<std::ptrdiff_t>(m));
}

std::span<const double> plane_view(const FieldSlice& f, std::size_t i) {
  const Shape n = f.shape();
  if (i >= n[0]) throw UsageError("plane_view: index out of range");
  const std::size_t m = n[1] * n[2];
  return f.values().subspan(i * m, m);
}

}  // namespace charwave
