#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "charwave/grid.hpp"

namespace charwave::testing {

// Ratio band for a p-th order quantity under grid doubling.
inline bool ratio_in_band(double coarse, double fine, int p, double lo = 0.7, double hi = 1.3) {
  const double q = coarse / fine;
  const double target = std::pow(2.0, p);
  return q >= lo * target && q <= hi * target;
}

inline std::vector<double> ratios(const std::vector<double>& v) {
  std::vector<double> out;
  for (std::size_t i = 1; i < v.size(); ++i) out.push_back(v[i - 1] / v[i]);
  return out;
}

// Largest |a - b| over the stations of axis 0 that lie inside the
// determined region at full step `step`, x_i - x_0 <= T - u. Beyond it the
// slice depends on data past the upper end of the grid.
inline double determined_diff(const FieldSlice& a, const FieldSlice& b, const GridSpec& g, std::size_t step) {
  const std::size_t last = g.axes[0].cells - step / g.stride();
  const Shape sh = a.shape();
  double m = 0.0;
  for (std::size_t i = 0; i <= last; ++i)
    for (std::size_t j = 0; j < sh[1]; ++j)
      for (std::size_t k = 0; k < sh[2]; ++k) m = std::max(m, std::abs(a(i, j, k) - b(i, j, k)));
  return m;
}

}  // namespace charwave::testing
