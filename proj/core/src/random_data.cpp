#include "charwave/random_data.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "charwave/errors.hpp"

namespace charwave {

namespace {

constexpr std::size_t kBasis = 5;
constexpr int kLevel[kBasis] = {0, 1, 1, 2, 2};

using Basis = std::function<double(std::size_t, double)>;  // (index, coordinate)

// {1, cos w x, sin w x, cos 2w x, sin 2w x} and its derivative.
Basis trig_basis(double w, double origin, bool derivative = false) {
  return [=](std::size_t b, double x) {
    const double m = static_cast<double>((b + 1) / 2);
    const double t = m * w * (x - origin);
    if (b == 0) return derivative ? 0.0 : 1.0;
    if (b % 2 == 1) return derivative ? -m * w * std::sin(t) : std::cos(t);
    return derivative ? m * w * std::cos(t) : std::sin(t);
  };
}

// (1 - s^2)^3 s^l, l = 0 .. 4.
Basis polar_basis() {
  return [](std::size_t b, double s) {
    const double c = 1.0 - s * s;
    return c * c * c * std::pow(s, static_cast<double>(b));
  };
}

using Coeffs = std::array<double, kBasis * kBasis * kBasis>;

Coeffs draw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Coeffs c{};
  for (std::size_t i = 0; i < kBasis; ++i)
    for (std::size_t j = 0; j < kBasis; ++j)
      for (std::size_t k = 0; k < kBasis; ++k)
        c[(i * kBasis + j) * kBasis + k] = dist(rng) / (1.0 + kLevel[i] + kLevel[j] + kLevel[k]);
  return c;
}

FieldSlice separable(const Axes& axes, const Coeffs& c, const Basis& b0, const Basis& b1, const Basis& b2) {
  FieldSlice out(axes);
  const Shape n = out.shape();
  std::vector<std::array<double, kBasis>> v1(n[1]), v2(n[2]);
  for (std::size_t j = 0; j < n[1]; ++j)
    for (std::size_t b = 0; b < kBasis; ++b) v1[j][b] = b1(b, axes[1].coord(j));
  for (std::size_t k = 0; k < n[2]; ++k)
    for (std::size_t b = 0; b < kBasis; ++b) v2[k][b] = b2(b, axes[2].coord(k));
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n[0]; ++i) {
    std::array<double, kBasis> v0;
    for (std::size_t b = 0; b < kBasis; ++b) v0[b] = b0(b, axes[0].coord(i));
    std::array<double, kBasis * kBasis> g{};
    for (std::size_t a = 0; a < kBasis; ++a)
      for (std::size_t jk = 0; jk < kBasis * kBasis; ++jk) g[jk] += v0[a] * c[a * kBasis * kBasis + jk];
    for (std::size_t j = 0; j < n[1]; ++j) {
      std::array<double, kBasis> h{};
      for (std::size_t b = 0; b < kBasis; ++b)
        for (std::size_t k = 0; k < kBasis; ++k) h[k] += v1[j][b] * g[b * kBasis + k];
      for (std::size_t k = 0; k < n[2]; ++k) {
        double s = 0.0;
        for (std::size_t b = 0; b < kBasis; ++b) s += h[b] * v2[k][b];
        out[idx++] = s;
      }
    }
  }
  return out;
}

}  // namespace

PlaneCharData random_plane_data(const GridSpec& grid, std::uint64_t seed) {
  if (grid.geometry != Geometry::nullplane) throw UsageError("random_plane_data needs a null-plane grid");
  std::mt19937_64 rng(seed);
  const double pi = std::numbers::pi;
  const Basis bz = trig_basis(pi / grid.T, 0.0);
  const Basis bx = trig_basis(2.0 * pi / grid.axes[1].length, grid.axes[1].lower);
  const Basis by = trig_basis(2.0 * pi / grid.axes[2].length, grid.axes[2].lower);
  const Axes t = transverse_axes(grid);
  PlaneCharData d;
  d.grid = grid;
  d.R_on_u0 = separable(grid.axes, draw(rng), bz, bx, by);
  d.P_on_z0 = separable(t, draw(rng), bz, bx, by);
  d.Q_on_z0 = separable(t, draw(rng), bz, bx, by);
  d.psi_on_z0 = separable(t, draw(rng), bz, bx, by);
  d.validate();
  return d;
}

ConeCharData random_cone_data(const GridSpec& grid, std::uint64_t seed) {
  if (grid.geometry != Geometry::nullcone) throw UsageError("random_cone_data needs a null-cone grid");
  std::mt19937_64 rng(seed);
  const double pi = std::numbers::pi;
  const Basis br = trig_basis(pi / grid.T, grid.r0);
  const Basis bu = trig_basis(pi / grid.T, 0.0);
  const Basis bs = polar_basis();
  const Basis bp = trig_basis(1.0, 0.0);
  const Axes t = transverse_axes(grid);
  ConeCharData d;
  d.grid = grid;
  d.R_on_u0 = separable(grid.axes, draw(rng), br, bs, bp);
  d.g_on_r0 = separable(t, draw(rng), bu, bs, bp);
  d.P_on_r0 = separable(t, draw(rng), bu, bs, bp);
  d.Q_on_r0 = separable(t, draw(rng), bu, bs, bp);
  d.validate();
  return d;
}

CauchyState random_cauchy_state(const GridSpec& grid, std::uint64_t seed) {
  if (grid.geometry != Geometry::cartesian_cauchy) throw UsageError("random_cauchy_state needs a Cauchy grid");
  std::mt19937_64 rng(seed);
  const double pi = std::numbers::pi;
  std::array<Basis, 3> b, db;
  for (std::size_t a = 0; a < 3; ++a) {
    const double w = 2.0 * pi / grid.axes[a].length;
    b[a] = trig_basis(w, grid.axes[a].lower);
    db[a] = trig_basis(w, grid.axes[a].lower, true);
  }
  const Coeffs psi = draw(rng);
  const Coeffs psi_t = draw(rng);
  CauchyState s = CauchyState::zero(grid, true);
  s.psi = separable(grid.axes, psi, b[0], b[1], b[2]);
  s.U = separable(grid.axes, psi_t, b[0], b[1], b[2]);
  s.P = separable(grid.axes, psi, db[0], b[1], b[2]);
  s.Q = separable(grid.axes, psi, b[0], db[1], b[2]);
  s.R = separable(grid.axes, psi, b[0], b[1], db[2]);
  return s;
}

}  // namespace charwave
