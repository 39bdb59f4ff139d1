#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "charwave/cauchy.hpp"
#include "charwave/grid.hpp"
#include "charwave/nullcone.hpp"
#include "charwave/nullplane.hpp"

namespace charwave {

// Compactly supported profile A (1 - t^2)^5, t = (x - center) / width,
// zero for |t| >= 1. Four continuous derivatives.
class Bump {
 public:
  Bump(double center, double width, double amplitude = 1.0);
  double operator()(double x, int derivative = 0) const;
  double center() const { return center_; }
  double width() const { return width_; }

 private:
  double center_, width_, amplitude_;
};

enum class Chart { cauchy, plane, cone };

// Coordinates per chart: cauchy (t, x, y, z), plane (u, z, x, y),
// cone (u, r, s, phi).
using Evaluator = std::function<double(double, double, double, double)>;

struct OracleSolution {
  std::string name;
  Chart chart = Chart::plane;
  std::map<std::string, double> parameters;
  std::map<std::string, Evaluator> fields;

  bool has(const std::string& var) const { return fields.count(var) != 0; }
  double eval(const std::string& var, double t, double a, double b, double c) const;
  std::vector<std::string> variables() const;
};

// psi = sin(k (u + z - x)). k must be an integer multiple of 2 pi / L_x.
OracleSolution oracle_plane_transverse(double k, double L_x = 6.283185307179586);

// psi = sin(omega t + k_z z + k_x x + k_y y), omega = |k|, written in (u, z, x, y)
// with t = u + z. k_x = 2 pi m_x / L_x, k_y = 2 pi m_y / L_y.
OracleSolution oracle_plane_wave(int m_x, int m_y, double k_z, double L_x, double L_y);

// g = h(u + 2r).
OracleSolution oracle_cone_ingoing(const Bump& h);
// g = f(u): R = P = Q = 0.
OracleSolution oracle_cone_outgoing(const Bump& f);
// g = s (-f'(u) - f(u) / r), the axial dipole.
OracleSolution oracle_cone_dipole(const Bump& f);
// g = sqrt(1 - s^2) cos(phi) (-f'(u) - f(u) / r). Its rescaled derivative
// variables are singular at the poles; evaluate them away from |s| = 1.
OracleSolution oracle_cone_rotated_dipole(const Bump& f);

// psi = sin(omega t - k . x) on a periodic box, k = 2 pi m / L.
OracleSolution oracle_cauchy_plane_wave(int m_x, int m_y, int m_z, std::array<double, 3> lengths);

// Default profiles for a run of length T starting at r0: smooth and
// nonzero over the whole region.
Bump default_ingoing_profile(double T, double r0);
Bump default_dipole_profile(double T);

PlaneCharData plane_data_from(const OracleSolution& o, const GridSpec& grid);
ConeCharData cone_data_from(const OracleSolution& o, const GridSpec& grid);
CauchyState cauchy_state_from(const OracleSolution& o, const GridSpec& grid, double t = 0.0);

// Exact values of `var` on the u-slice at coordinate u.
FieldSlice oracle_slice(const OracleSolution& o, const GridSpec& grid, const std::string& var, double u);
// Exact values on Sigma_T: station i sits at u = T - (x_i - x_0).
FieldSlice oracle_diagonal(const OracleSolution& o, const GridSpec& grid, const std::string& var);

}  // namespace charwave
