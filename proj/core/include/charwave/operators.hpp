#pragma once

#include <span>
#include <vector>

#include "charwave/grid.hpp"

namespace charwave {

// Centered difference of order p with wraparound. Throws UsageError unless
// `axis` is periodic.
FieldSlice deriv_periodic(const FieldSlice& f, int axis, int order);

// Centered interior stencil, one-sided stencils of the same order at both
// ends. Works on bounded and cell-centered axes.
FieldSlice deriv_bounded(const FieldSlice& f, int axis, int order);

// Dispatches on the axis kind.
FieldSlice deriv(const FieldSlice& f, int axis, int order);
void deriv_into(const FieldSlice& f, int axis, int order, FieldSlice& out);

// Solves dF/dx = rhs - k F / x along `axis` (k = damping_power) from the
// boundary plane at the lower end. `boundary` holds one value per line,
// ordered as the remaining two indices in row-major order. The ODE is
// integrated exactly through the factor x^k, so the only error is the
// cumulative quadrature of x^k rhs (trapezoid for p = 2, cubic for p = 4).
FieldSlice march_ode(const FieldSlice& rhs, std::span<const double> boundary, int axis, int order,
                     int damping_power = 0);
void march_ode_into(const FieldSlice& rhs, std::span<const double> boundary, int axis, int order,
                    int damping_power, FieldSlice& out);

// Running integral from the lower end of a bounded axis, zero at index 0.
FieldSlice cumulative_integral(const FieldSlice& f, int axis, int order);

// Weights w_i with sum_i w_i f(x_i) approximating the integral over the axis.
// Periodic: rectangle rule. Bounded nodes: trapezoid (p = 2) or Gregory end
// corrections (p = 4). Cell-centered: midpoint, with end corrections for p = 4.
std::vector<double> quadrature_weights(const Axis& axis, int order);
std::vector<double> node_weights(std::size_t points, double h, int order);

double quadrature_slice(const FieldSlice& f, int order);
// Integral over axes 1 and 2 at index i of axis 0.
double quadrature_plane(const FieldSlice& f, std::size_t i, int order);
// Integrates one value per marching step (uniform spacing `step`).
double quadrature_volume(std::span<const double> series, double step, int order);

// Values at index 0 of axis 0, in line order.
std::vector<double> lower_plane(const FieldSlice& f);
// View of the (axis 1, axis 2) plane at index i of axis 0.
std::span<const double> plane_view(const FieldSlice& f, std::size_t i);

}  // namespace charwave
