#include "charwave/oracles.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "charwave/errors.hpp"

namespace charwave {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Coefficients of (1 - t^2)^5 in powers of t^2.
constexpr double bump_coeff[6] = {1.0, -5.0, 10.0, -10.0, 5.0, -1.0};

double falling(int m, int n) {
  double f = 1.0;
  for (int i = 0; i < n; ++i) f *= static_cast<double>(m - i);
  return f;
}

// psi = sin(al u + be z + ga x + de y).
OracleSolution make_plane_wave(std::string name, double al, double be, double ga, double de) {
  OracleSolution o;
  o.name = std::move(name);
  o.chart = Chart::plane;
  o.parameters = {{"alpha", al}, {"beta", be}, {"gamma", ga}, {"delta", de}};
  auto th = [=](double u, double z, double x, double y) { return al * u + be * z + ga * x + de * y; };
  auto cosine = [=](double c) { return Evaluator([=](double u, double z, double x, double y) {
                                  return c * std::cos(th(u, z, x, y));
                                }); };
  auto sine = [=](double c) { return Evaluator([=](double u, double z, double x, double y) {
                                return c * std::sin(th(u, z, x, y));
                              }); };
  o.fields["psi"] = sine(1.0);
  o.fields["R"] = cosine(be);
  o.fields["P"] = cosine(ga);
  o.fields["Q"] = cosine(de);
  o.fields["R_x"] = sine(-be * ga);
  o.fields["R_y"] = sine(-be * de);
  o.fields["R_z"] = sine(-be * be);
  o.fields["P_x"] = sine(-ga * ga);
  o.fields["Q_x"] = sine(-ga * de);
  o.fields["P_y"] = sine(-ga * de);
  o.fields["Q_y"] = sine(-de * de);
  o.fields["P_u"] = sine(-al * ga);
  o.fields["Q_u"] = sine(-al * de);
  return o;
}

void require_integer_mode(double k, double L, const char* what) {
  const double m = k * L / two_pi;
  if (std::abs(m - std::round(m)) > 1e-9)
    throw UsageError(fmt::format("{}: wavenumber {} is not an integer mode of the period {}", what, k, L));
}

double sine_of(double s) { return std::sqrt(1.0 - s * s); }

}  // namespace

Bump::Bump(double center, double width, double amplitude)
    : center_(center), width_(width), amplitude_(amplitude) {
  if (!(width > 0.0)) throw UsageError("bump width must be positive");
}

double Bump::operator()(double x, int derivative) const {
  if (derivative < 0 || derivative > 10) throw UsageError("bump derivative order out of range");
  const double t = (x - center_) / width_;
  if (std::abs(t) >= 1.0) return 0.0;
  double sum = 0.0;
  for (int k = 0; k <= 5; ++k) {
    const int m = 2 * k;
    if (m < derivative) continue;
    sum += bump_coeff[k] * falling(m, derivative) * std::pow(t, m - derivative);
  }
  return amplitude_ * sum / std::pow(width_, derivative);
}

double OracleSolution::eval(const std::string& var, double t, double a, double b, double c) const {
  const auto it = fields.find(var);
  if (it == fields.end()) throw UsageError(fmt::format("oracle '{}' has no variable '{}'", name, var));
  return it->second(t, a, b, c);
}

std::vector<std::string> OracleSolution::variables() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : fields) out.push_back(k);
  return out;
}

OracleSolution oracle_plane_transverse(double k, double L_x) {
  require_integer_mode(k, L_x, "oracle_plane_transverse");
  OracleSolution o = make_plane_wave("plane_transverse", k, k, -k, 0.0);
  o.parameters["k"] = k;
  return o;
}

OracleSolution oracle_plane_wave(int m_x, int m_y, double k_z, double L_x, double L_y) {
  const double kx = two_pi * m_x / L_x;
  const double ky = two_pi * m_y / L_y;
  const double omega = std::sqrt(kx * kx + ky * ky + k_z * k_z);
  if (!(omega > 0.0)) throw UsageError("oracle_plane_wave: zero wave vector");
  OracleSolution o = make_plane_wave("plane_wave", omega, omega + k_z, kx, ky);
  o.parameters["omega"] = omega;
  o.parameters["k_z"] = k_z;
  return o;
}

OracleSolution oracle_cone_ingoing(const Bump& h) {
  OracleSolution o;
  o.name = "cone_ingoing";
  o.chart = Chart::cone;
  o.parameters = {{"center", h.center()}, {"width", h.width()}};
  auto zero = [](double, double, double, double) { return 0.0; };
  o.fields["g"] = [h](double u, double r, double, double) { return h(u + 2.0 * r); };
  o.fields["psi"] = [h](double u, double r, double, double) { return h(u + 2.0 * r) / r; };
  o.fields["R"] = [h](double u, double r, double, double) { return 2.0 * h(u + 2.0 * r, 1); };
  o.fields["R_r"] = [h](double u, double r, double, double) { return 4.0 * h(u + 2.0 * r, 2); };
  for (const char* v : {"P", "Q", "Rhat_s", "Rhat_phi", "Phat_s", "Phat_phi", "Qhat_s", "Qhat_phi", "P_u", "Q_u"})
    o.fields[v] = zero;
  return o;
}

OracleSolution oracle_cone_outgoing(const Bump& f) {
  OracleSolution o;
  o.name = "cone_outgoing";
  o.chart = Chart::cone;
  o.parameters = {{"center", f.center()}, {"width", f.width()}};
  auto zero = [](double, double, double, double) { return 0.0; };
  o.fields["g"] = [f](double u, double, double, double) { return f(u); };
  o.fields["psi"] = [f](double u, double r, double, double) { return f(u) / r; };
  for (const char* v :
       {"R", "P", "Q", "R_r", "Rhat_s", "Rhat_phi", "Phat_s", "Phat_phi", "Qhat_s", "Qhat_phi", "P_u", "Q_u"})
    o.fields[v] = zero;
  return o;
}

OracleSolution oracle_cone_dipole(const Bump& f) {
  OracleSolution o;
  o.name = "cone_dipole";
  o.chart = Chart::cone;
  o.parameters = {{"center", f.center()}, {"width", f.width()}};
  auto F = [f](double u, double r) { return -f(u, 1) - f(u) / r; };
  auto zero = [](double, double, double, double) { return 0.0; };
  o.fields["g"] = [F](double u, double r, double s, double) { return s * F(u, r); };
  o.fields["psi"] = [F](double u, double r, double s, double) { return s * F(u, r) / r; };
  o.fields["R"] = [f](double u, double r, double s, double) { return s * f(u) / (r * r); };
  o.fields["P"] = [F](double u, double r, double s, double) { return sine_of(s) * F(u, r) / r; };
  o.fields["Q"] = zero;
  o.fields["Rhat_s"] = [f](double u, double r, double s, double) { return sine_of(s) * f(u) / (r * r * r); };
  o.fields["Rhat_phi"] = zero;
  o.fields["R_r"] = [f](double u, double r, double s, double) { return -2.0 * s * f(u) / (r * r * r); };
  o.fields["Phat_s"] = [F](double u, double r, double s, double) { return -2.0 * s * F(u, r) / (r * r); };
  o.fields["Phat_phi"] = zero;
  o.fields["Qhat_s"] = zero;
  o.fields["Qhat_phi"] = zero;
  o.fields["P_u"] = [f](double u, double r, double s, double) {
    return sine_of(s) * (-f(u, 2) - f(u, 1) / r) / r;
  };
  o.fields["Q_u"] = zero;
  return o;
}

OracleSolution oracle_cone_rotated_dipole(const Bump& f) {
  OracleSolution o;
  o.name = "cone_rotated_dipole";
  o.chart = Chart::cone;
  o.parameters = {{"center", f.center()}, {"width", f.width()}};
  auto F = [f](double u, double r) { return -f(u, 1) - f(u) / r; };
  auto Fu = [f](double u, double r) { return -f(u, 2) - f(u, 1) / r; };
  o.fields["g"] = [F](double u, double r, double s, double p) { return sine_of(s) * std::cos(p) * F(u, r); };
  o.fields["psi"] = [F](double u, double r, double s, double p) {
    return sine_of(s) * std::cos(p) * F(u, r) / r;
  };
  o.fields["R"] = [f](double u, double r, double s, double p) {
    return sine_of(s) * std::cos(p) * f(u) / (r * r);
  };
  o.fields["P"] = [F](double u, double r, double s, double p) { return -s * std::cos(p) * F(u, r) / r; };
  o.fields["Q"] = [F](double u, double r, double, double p) { return -std::sin(p) * F(u, r) / r; };
  o.fields["Rhat_s"] = [f](double u, double r, double s, double p) {
    return -s * std::cos(p) * f(u) / (r * r * r);
  };
  o.fields["Rhat_phi"] = [f](double u, double r, double, double p) { return -std::sin(p) * f(u) / (r * r * r); };
  o.fields["R_r"] = [f](double u, double r, double s, double p) {
    return -2.0 * sine_of(s) * std::cos(p) * f(u) / (r * r * r);
  };
  o.fields["Phat_s"] = [F](double u, double r, double s, double p) {
    return -std::cos(p) * F(u, r) * (1.0 - 2.0 * s * s) / (sine_of(s) * r * r);
  };
  o.fields["Phat_phi"] = [F](double u, double r, double s, double p) {
    return s * std::sin(p) * F(u, r) / (sine_of(s) * r * r);
  };
  o.fields["Qhat_s"] = [](double, double, double, double) { return 0.0; };
  o.fields["Qhat_phi"] = [F](double u, double r, double s, double p) {
    return -std::cos(p) * F(u, r) / (sine_of(s) * r * r);
  };
  o.fields["P_u"] = [Fu](double u, double r, double s, double p) { return -s * std::cos(p) * Fu(u, r) / r; };
  o.fields["Q_u"] = [Fu](double u, double r, double, double p) { return -std::sin(p) * Fu(u, r) / r; };
  return o;
}

OracleSolution oracle_cauchy_plane_wave(int m_x, int m_y, int m_z, std::array<double, 3> lengths) {
  const double kx = two_pi * m_x / lengths[0];
  const double ky = two_pi * m_y / lengths[1];
  const double kz = two_pi * m_z / lengths[2];
  const double w = std::sqrt(kx * kx + ky * ky + kz * kz);
  if (!(w > 0.0)) throw UsageError("oracle_cauchy_plane_wave: zero wave vector");
  OracleSolution o;
  o.name = "cauchy_plane_wave";
  o.chart = Chart::cauchy;
  o.parameters = {{"k_x", kx}, {"k_y", ky}, {"k_z", kz}, {"omega", w}};
  auto th = [=](double t, double x, double y, double z) { return w * t - kx * x - ky * y - kz * z; };
  o.fields["psi"] = [th](double t, double x, double y, double z) { return std::sin(th(t, x, y, z)); };
  o.fields["U"] = [th, w](double t, double x, double y, double z) { return w * std::cos(th(t, x, y, z)); };
  o.fields["P"] = [th, kx](double t, double x, double y, double z) { return -kx * std::cos(th(t, x, y, z)); };
  o.fields["Q"] = [th, ky](double t, double x, double y, double z) { return -ky * std::cos(th(t, x, y, z)); };
  o.fields["R"] = [th, kz](double t, double x, double y, double z) { return -kz * std::cos(th(t, x, y, z)); };
  return o;
}

Bump default_ingoing_profile(double T, double r0) {
  // u + 2r ranges over [2 r0, 2 r0 + 3T]; cover it with room to spare.
  return Bump(2.0 * r0 + 1.5 * T, 2.0 * T);
}

Bump default_dipole_profile(double T) { return Bump(0.5 * T, T); }

PlaneCharData plane_data_from(const OracleSolution& o, const GridSpec& grid) {
  if (o.chart != Chart::plane) throw UsageError(fmt::format("oracle '{}' is not a null-plane solution", o.name));
  return PlaneCharData::sample(
      grid, [&](double z, double x, double y) { return o.eval("R", 0.0, z, x, y); },
      [&](double u, double x, double y) { return o.eval("P", u, 0.0, x, y); },
      [&](double u, double x, double y) { return o.eval("Q", u, 0.0, x, y); },
      [&](double u, double x, double y) { return o.eval("psi", u, 0.0, x, y); });
}

ConeCharData cone_data_from(const OracleSolution& o, const GridSpec& grid) {
  if (o.chart != Chart::cone) throw UsageError(fmt::format("oracle '{}' is not a null-cone solution", o.name));
  const double r0 = grid.r0;
  return ConeCharData::sample(
      grid, [&](double r, double s, double p) { return o.eval("R", 0.0, r, s, p); },
      [&](double u, double s, double p) { return o.eval("g", u, r0, s, p); },
      [&](double u, double s, double p) { return o.eval("P", u, r0, s, p); },
      [&](double u, double s, double p) { return o.eval("Q", u, r0, s, p); });
}

CauchyState cauchy_state_from(const OracleSolution& o, const GridSpec& grid, double t) {
  if (o.chart != Chart::cauchy) throw UsageError(fmt::format("oracle '{}' is not a Cauchy solution", o.name));
  auto at = [&](const char* v) {
    return CauchySampler([&o, v, t](double x, double y, double z) { return o.eval(v, t, x, y, z); });
  };
  return cauchy_sample(grid, {at("U"), at("P"), at("Q"), at("R"), at("psi")}, t);
}

FieldSlice oracle_slice(const OracleSolution& o, const GridSpec& grid, const std::string& var, double u) {
  return FieldSlice::sample(grid.axes, [&](double a, double b, double c) { return o.eval(var, u, a, b, c); }, u);
}

FieldSlice oracle_diagonal(const OracleSolution& o, const GridSpec& grid, const std::string& var) {
  const double x0 = grid.axes[0].coord(0);
  return FieldSlice::sample(grid.axes, [&](double a, double b, double c) {
    return o.eval(var, grid.T - (a - x0), a, b, c);
  }, grid.T);
}

}  // namespace charwave
