#include "charwave/nullcone.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "charwave/errors.hpp"
#include "charwave/operators.hpp"
#include "charwave/time_stepping.hpp"

namespace charwave {

namespace {

void require_cone_grid(const GridSpec& g) {
  if (g.geometry != Geometry::nullcone) throw UsageError("expected a null-cone grid");
  g.validate();
}

void require_axes(const FieldSlice& f, const Axes& axes, const char* what) {
  if (f.axes() != axes) throw UsageError(fmt::format("{} does not match the grid layout", what));
}

double sine_of(double s) { return std::sqrt(1.0 - s * s); }

// Per-point coefficients on a slice whose axis 1 is s. Axis 0 is r on
// u-slices; on the worldtube it is u and r is the constant r0.
struct Coefficients {
  std::vector<double> inv_r;  // per axis-0 index
  std::vector<double> a;      // per s index
  std::vector<double> s;
  std::size_t n_s = 0;
  std::size_t n_phi = 0;

  static Coefficients slice(const Axes& axes) {
    Coefficients c;
    for (std::size_t i = 0; i < axes[0].points(); ++i) c.inv_r.push_back(1.0 / axes[0].coord(i));
    c.fill_s(axes);
    return c;
  }
  static Coefficients worldtube(const Axes& axes, double r0) {
    Coefficients c;
    c.inv_r.assign(axes[0].points(), 1.0 / r0);
    c.fill_s(axes);
    return c;
  }
  void fill_s(const Axes& axes) {
    n_s = axes[1].points();
    n_phi = axes[2].points();
    for (std::size_t j = 0; j < n_s; ++j) {
      s.push_back(axes[1].coord(j));
      a.push_back(sine_of(s.back()));
    }
  }
  // f(idx, inv_r, a, s) over every point.
  template <class F>
  void each(F&& f) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < inv_r.size(); ++i)
      for (std::size_t j = 0; j < n_s; ++j)
        for (std::size_t k = 0; k < n_phi; ++k, ++idx) f(idx, inv_r[i], a[j], s[j]);
  }
};

Matrix3 zero3() { return Matrix3{}; }
Matrix7 zero7() { return Matrix7{}; }

void set_sym(Matrix7& m, std::size_t i, std::size_t j, double v) {
  m[i][j] = v;
  m[j][i] = v;
}

}  // namespace

ConeCharData ConeCharData::zero(const GridSpec& grid) {
  require_cone_grid(grid);
  const Axes t = transverse_axes(grid);
  return {grid, FieldSlice(grid.axes), FieldSlice(t), FieldSlice(t), FieldSlice(t)};
}

ConeCharData ConeCharData::sample(const GridSpec& grid, const Sampler3& R, const Sampler3& g, const Sampler3& P,
                                  const Sampler3& Q) {
  require_cone_grid(grid);
  const Axes t = transverse_axes(grid);
  ConeCharData d{grid, FieldSlice::sample(grid.axes, R), FieldSlice::sample(t, g), FieldSlice::sample(t, P),
                 FieldSlice::sample(t, Q)};
  d.validate();
  return d;
}

void ConeCharData::validate() const {
  require_cone_grid(grid);
  const Axes t = transverse_axes(grid);
  require_axes(R_on_u0, grid.axes, "R on u = 0");
  require_axes(g_on_r0, t, "g on r = r0");
  require_axes(P_on_r0, t, "P on r = r0");
  require_axes(Q_on_r0, t, "Q on r = r0");
  R_on_u0.check_finite("R on u = 0");
  g_on_r0.check_finite("g on r = r0");
  P_on_r0.check_finite("P on r = r0");
  Q_on_r0.check_finite("Q on r = r0");
}

ConeDerivData ConeDerivData::from(const ConeCharData& data) {
  data.validate();
  const GridSpec& g = data.grid;
  const int p = g.order;
  ConeDerivData d;
  d.grid = g;

  const Coefficients cu = Coefficients::slice(g.axes);
  d.Rhat_s = deriv(data.R_on_u0, 1, p);
  d.Rhat_phi = deriv(data.R_on_u0, 2, p);
  d.R_r = deriv(data.R_on_u0, 0, p);
  cu.each([&](std::size_t idx, double ir, double a, double) {
    d.Rhat_s[idx] *= a * ir;
    d.Rhat_phi[idx] *= ir / a;
  });

  const Axes t = transverse_axes(g);
  const Coefficients cw = Coefficients::worldtube(t, g.r0);
  FieldSlice aP = data.P_on_r0;
  cw.each([&](std::size_t idx, double, double a, double) { aP[idx] *= a; });
  d.Phat_s = deriv(aP, 1, p);
  d.Phat_phi = deriv(data.P_on_r0, 2, p);
  d.Qhat_s = deriv(data.Q_on_r0, 1, p);
  d.Qhat_phi = deriv(data.Q_on_r0, 2, p);
  cw.each([&](std::size_t idx, double ir, double a, double) {
    d.Phat_s[idx] *= ir;
    d.Phat_phi[idx] *= ir / a;
    d.Qhat_s[idx] *= a * ir;
    d.Qhat_phi[idx] *= ir / a;
  });
  d.P_u = deriv(data.P_on_r0, 0, p);
  d.Q_u = deriv(data.Q_on_r0, 0, p);
  return d;
}

void ConeDerivData::validate() const {
  require_cone_grid(grid);
  const Axes t = transverse_axes(grid);
  for (const FieldSlice* f : {&Rhat_s, &Rhat_phi, &R_r}) require_axes(*f, grid.axes, "derivative data on u = 0");
  for (const FieldSlice* f : {&Phat_s, &Phat_phi, &Qhat_s, &Qhat_phi, &P_u, &Q_u})
    require_axes(*f, t, "derivative data on r = r0");
}

Matrix3 cone_A(int direction, double r, double s) {
  Matrix3 m = zero3();
  const double a = sine_of(s);
  switch (direction) {
    case 0: m[0][0] = 2.0; break;
    case 1:
      m[0][0] = -1.0;
      m[1][1] = 1.0;
      m[2][2] = 1.0;
      break;
    case 2: m[0][1] = m[1][0] = -a / r; break;
    case 3: m[0][2] = m[2][0] = -1.0 / (r * a); break;
    default: throw UsageError(fmt::format("direction {} out of range", direction));
  }
  return m;
}

Matrix3 cone_D(double r, double s) {
  Matrix3 m = zero3();
  m[0][1] = -s / (r * sine_of(s));
  m[1][1] = -1.0 / r;
  m[2][2] = -1.0 / r;
  return m;
}

Matrix3 cone_Dtilde_main(double r, double s) {
  Matrix3 m = cone_D(r, s);
  const double ds = s / (r * sine_of(s));  // d_s (-a/r)
  m[0][1] += 0.5 * ds;
  m[1][0] += 0.5 * ds;
  return m;
}

Matrix7 cone_B(int direction, double r, double s) {
  Matrix7 m = zero7();
  const double a = sine_of(s);
  switch (direction) {
    case 0:
      m[0][0] = m[1][1] = m[2][2] = 2.0;
      break;
    case 1:
      m[2][2] = -1.0;
      m[3][3] = m[4][4] = m[5][5] = m[6][6] = 1.0;
      break;
    case 2:
      set_sym(m, 0, 2, -a / r);
      set_sym(m, 0, 3, -a / r);
      set_sym(m, 1, 4, -a / r);
      break;
    case 3:
      set_sym(m, 0, 5, -1.0 / (r * a));
      set_sym(m, 1, 2, -1.0 / (r * a));
      set_sym(m, 1, 6, -1.0 / (r * a));
      break;
    default: throw UsageError(fmt::format("direction {} out of range", direction));
  }
  return m;
}

Matrix7 cone_deriv_D(double r, double s) {
  Matrix7 m = zero7();
  const double q = s / (r * sine_of(s));
  m[0][6] = q;
  m[1][4] = -2.0 * q;
  m[2][0] = -q;
  m[2][3] = -2.0 / r;
  m[2][6] = -2.0 / r;
  m[3][0] = -q;
  m[3][3] = -2.0 / r;
  m[4][1] = -q;
  m[4][4] = -2.0 / r;
  m[5][1] = q;
  m[5][5] = -2.0 / r;
  m[6][6] = -2.0 / r;
  return m;
}

Matrix7 cone_Dtilde(double r, double s) {
  Matrix7 m = cone_deriv_D(r, s);
  for (auto& row : m)
    for (double& v : row) v *= 2.0;
  const double ds = s / (r * sine_of(s));  // d_s (-a/r)
  for (auto [i, j] : {std::pair{0, 2}, std::pair{0, 3}, std::pair{1, 4}}) {
    m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += ds;
    m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] += ds;
  }
  return m;
}

DtildeField derive_Dtilde(const GridSpec& grid) {
  require_cone_grid(grid);
  DtildeField f;
  f.grid = grid;
  const Axis& r_axis = grid.axes[0];
  const Axis& s_axis = grid.axes[1];
  for (std::size_t i = 0; i < r_axis.points(); ++i) {
    for (std::size_t j = 0; j < s_axis.points(); ++j) {
      const double s = s_axis.coord(j);
      if (!(std::abs(s) < 1.0)) throw UsageError("D~ evaluated at a pole");
      f.entries.push_back(cone_Dtilde(r_axis.coord(i), s));
      for (const auto& row : f.entries.back())
        for (double v : row) f.c = std::max(f.c, std::abs(v));
    }
  }
  return f;
}

ConeNull cone_hypersurface_solve(const FieldSlice& R, std::span<const double> P0, std::span<const double> Q0,
                                 std::span<const double> g0, int order) {
  const Coefficients c = Coefficients::slice(R.axes());
  FieldSlice sp = deriv(R, 1, order);
  FieldSlice sq = deriv(R, 2, order);
  c.each([&](std::size_t idx, double ir, double a, double) {
    sp[idx] *= a * ir;
    sq[idx] *= ir / a;
  });
  return {march_ode(sp, P0, 0, order, 1), march_ode(sq, Q0, 0, order, 1), march_ode(R, g0, 0, order, 0)};
}

FieldSlice cone_R_rhs(const FieldSlice& R, const FieldSlice& P, const FieldSlice& Q, int order) {
  R.require_same_layout(P, "cone_R_rhs");
  R.require_same_layout(Q, "cone_R_rhs");
  const Coefficients c = Coefficients::slice(R.axes());
  FieldSlice aP = P;
  c.each([&](std::size_t idx, double, double a, double) { aP[idx] *= a; });
  const FieldSlice dAP = deriv(aP, 1, order);
  const FieldSlice dQ = deriv(Q, 2, order);
  FieldSlice out = deriv(R, 0, order);
  c.each([&](std::size_t idx, double ir, double a, double) {
    out[idx] = 0.5 * (out[idx] + ir * dAP[idx] + ir / a * dQ[idx]);
  });
  return out;
}

ConeSystem::ConeSystem(ConeCharData data) : data_(std::move(data)) { data_.validate(); }

void ConeSystem::solve_null(std::size_t half_step, const State& normal, State& null) const {
  const int p = data_.grid.order;
  const Coefficients c = Coefficients::slice(data_.grid.axes);
  deriv_into(normal[0], 1, p, a_);
  c.each([&](std::size_t idx, double ir, double a, double) { a_[idx] *= a * ir; });
  march_ode_into(a_, plane_view(data_.P_on_r0, half_step), 0, p, 1, null[0]);
  deriv_into(normal[0], 2, p, a_);
  c.each([&](std::size_t idx, double ir, double a, double) { a_[idx] *= ir / a; });
  march_ode_into(a_, plane_view(data_.Q_on_r0, half_step), 0, p, 1, null[1]);
}

void ConeSystem::solve_auxiliary(std::size_t half_step, const State& normal, const State&, State& aux) const {
  march_ode_into(normal[0], plane_view(data_.g_on_r0, half_step), 0, data_.grid.order, 0, aux[0]);
}

void ConeSystem::normal_rhs(std::size_t, const State& normal, const State& null, State& out) const {
  const int p = data_.grid.order;
  const Coefficients c = Coefficients::slice(data_.grid.axes);
  b_ = null[0];
  c.each([&](std::size_t idx, double, double a, double) { b_[idx] *= a; });
  FieldSlice& dR = out[0];
  deriv_into(normal[0], 0, p, dR);
  deriv_into(b_, 1, p, a_);
  deriv_into(null[1], 2, p, b_);
  c.each([&](std::size_t idx, double ir, double a, double) {
    dR[idx] = 0.5 * (dR[idx] + ir * a_[idx] + ir / a * b_[idx]);
  });
}

void ConeSystem::volume_density(const State&, const State& null, FieldSlice& out) const {
  const Coefficients c = Coefficients::slice(data_.grid.axes);
  const FieldSlice& P = null[0];
  const FieldSlice& Q = null[1];
  c.each([&](std::size_t idx, double ir, double, double) {
    out[idx] = -2.0 * ir * (P[idx] * P[idx] + Q[idx] * Q[idx]);
  });
}

ConeDerivSystem::ConeDerivSystem(ConeDerivData data) : data_(std::move(data)) {
  data_.validate();
  dtilde_ = derive_Dtilde(data_.grid);
}

void ConeDerivSystem::solve_null(std::size_t half_step, const State& normal, State& null) const {
  const int p = data_.grid.order;
  const Coefficients c = Coefficients::slice(data_.grid.axes);
  const FieldSlice& Rs = normal[0];
  const FieldSlice& Rp = normal[1];

  // Ph_s: (1/r) d_s (a Rh_s)
  b_ = Rs;
  c.each([&](std::size_t idx, double, double a, double) { b_[idx] *= a; });
  deriv_into(b_, 1, p, a_);
  c.each([&](std::size_t idx, double ir, double, double) { a_[idx] *= ir; });
  march_ode_into(a_, plane_view(data_.Phat_s, half_step), 0, p, 2, null[0]);

  // Ph_phi: (1/r) d_s (a Rh_phi)
  b_ = Rp;
  c.each([&](std::size_t idx, double, double a, double) { b_[idx] *= a; });
  deriv_into(b_, 1, p, a_);
  c.each([&](std::size_t idx, double ir, double, double) { a_[idx] *= ir; });
  march_ode_into(a_, plane_view(data_.Phat_phi, half_step), 0, p, 2, null[1]);

  // Qh_s: d_phi Rh_s / (r a) + s Rh_phi / (r a)
  deriv_into(Rs, 2, p, a_);
  c.each([&](std::size_t idx, double ir, double a, double s) { a_[idx] = ir / a * (a_[idx] + s * Rp[idx]); });
  march_ode_into(a_, plane_view(data_.Qhat_s, half_step), 0, p, 2, null[2]);

  // Qh_phi: d_phi Rh_phi / (r a)
  deriv_into(Rp, 2, p, a_);
  c.each([&](std::size_t idx, double ir, double a, double) { a_[idx] *= ir / a; });
  march_ode_into(a_, plane_view(data_.Qhat_phi, half_step), 0, p, 2, null[3]);
}

void ConeDerivSystem::normal_rhs(std::size_t, const State& normal, const State& null, State& out) const {
  const int p = data_.grid.order;
  const Coefficients c = Coefficients::slice(data_.grid.axes);
  const FieldSlice& Rs = normal[0];
  const FieldSlice& Rp = normal[1];
  const FieldSlice& Rr = normal[2];
  const FieldSlice& Ps = null[0];
  const FieldSlice& Pp = null[1];
  const FieldSlice& Qs = null[2];
  const FieldSlice& Qp = null[3];

  // 2 d_u Rh_s = (a/r) d_s (R_r + Ph_s) + d_phi Qh_s / (r a) + s Qh_phi / (r a)
  b_ = Rr;
  b_ += Ps;
  deriv_into(b_, 1, p, a_);
  deriv_into(Qs, 2, p, c_);
  FieldSlice& o0 = out[0];
  c.each([&](std::size_t idx, double ir, double a, double s) {
    o0[idx] = 0.5 * (a * ir * a_[idx] + ir / a * (c_[idx] + s * Qp[idx]));
  });

  // 2 d_u Rh_phi = d_phi (R_r + Qh_phi) / (r a) + d_s (a^2 Ph_phi) / (r a)
  b_ = Pp;
  c.each([&](std::size_t idx, double, double a, double) { b_[idx] *= a * a; });
  deriv_into(b_, 1, p, a_);
  b_ = Rr;
  b_ += Qp;
  deriv_into(b_, 2, p, c_);
  FieldSlice& o1 = out[1];
  c.each([&](std::size_t idx, double ir, double a, double) { o1[idx] = 0.5 * ir / a * (c_[idx] + a_[idx]); });

  // 2 d_u R_r = d_r R_r + (1/r) d_s (a Rh_s) + d_phi Rh_phi / (r a) - 2 Ph_s / r - 2 Qh_phi / r
  b_ = Rs;
  c.each([&](std::size_t idx, double, double a, double) { b_[idx] *= a; });
  deriv_into(b_, 1, p, a_);
  deriv_into(Rp, 2, p, c_);
  FieldSlice& o2 = out[2];
  deriv_into(Rr, 0, p, o2);
  c.each([&](std::size_t idx, double ir, double a, double) {
    o2[idx] = 0.5 * (o2[idx] + ir * a_[idx] + ir / a * c_[idx] - 2.0 * ir * (Ps[idx] + Qp[idx]));
  });
}

void ConeDerivSystem::volume_density(const State& normal, const State& null, FieldSlice& out) const {
  const Shape n = out.shape();
  std::array<const FieldSlice*, 7> w{&normal[0], &normal[1], &normal[2], &null[0], &null[1], &null[2], &null[3]};
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n[0]; ++i) {
    for (std::size_t j = 0; j < n[1]; ++j) {
      const Matrix7& m = dtilde_.at(i, j);
      for (std::size_t k = 0; k < n[2]; ++k, ++idx) {
        std::array<double, 7> v;
        for (std::size_t a = 0; a < 7; ++a) v[a] = (*w[a])[idx];
        double q = 0.0;
        for (std::size_t a = 0; a < 7; ++a) {
          double row = 0.0;
          for (std::size_t b = 0; b < 7; ++b) row += m[a][b] * v[b];
          q += v[a] * row;
        }
        out[idx] = q;
      }
    }
  }
}

EvolutionRecord cone_evolve(const ConeCharData& data, const MarchOptions& options) {
  return march(ConeSystem(data), options);
}

EvolutionRecord cone_derivative_evolve(const ConeDerivData& data, const MarchOptions& options) {
  return march(ConeDerivSystem(data), options);
}

FieldSlice cone_advance_R(const ConeCharData& data, const FieldSlice& R, std::size_t step) {
  const GridSpec& g = data.grid;
  if (step >= g.steps) throw UsageError(fmt::format("step {} is past the final step {}", step, g.steps));
  if (R.axes() != g.axes) throw UsageError("R does not match the grid layout");
  const ConeSystem sys(data);
  State y{R};
  State null(2, FieldSlice(g.axes));
  RkWorkspace ws;
  auto rhs = [&](int half, const State& st, State& ds) {
    const std::size_t h = 2 * step + static_cast<std::size_t>(half);
    sys.solve_null(h, st, null);
    sys.normal_rhs(h, st, null, ds);
  };
  rk_step(y, g.step(), g.order, rhs, ws);
  y[0].set_axis_value(static_cast<double>(step + 1) * g.step());
  y[0].check_finite(fmt::format("R after u-step {}", step + 1));
  return y[0];
}

UDerivatives cone_reconstruct_PuQu(const ConeDerivData& data, const EvolutionRecord& deriv_record,
                                   std::size_t step) {
  const auto it = deriv_record.snapshots.find(step);
  if (it == deriv_record.snapshots.end())
    throw UsageError(fmt::format("no derivative-system snapshot at step {}", step));
  const State& w = it->second;
  const GridSpec& g = data.grid;
  const int p = g.order;
  FieldSlice source = w[deriv_record.index_of("R_r")];
  source += w[deriv_record.index_of("Phat_s")];
  source += w[deriv_record.index_of("Qhat_phi")];
  const FieldSlice integral = cumulative_integral(source, 0, p);
  const FieldSlice dIs = deriv(integral, 1, p);
  const FieldSlice dIp = deriv(integral, 2, p);

  const double u = static_cast<double>(step) * g.step();
  UDerivatives out{FieldSlice(g.axes, u), FieldSlice(g.axes, u)};
  const auto pu0 = plane_view(data.P_u, 2 * step);
  const auto qu0 = plane_view(data.Q_u, 2 * step);
  const std::size_t m = pu0.size();
  const Coefficients c = Coefficients::slice(g.axes);
  c.each([&](std::size_t idx, double ir, double a, double) {
    const double att = g.r0 * ir;
    out.P_u[idx] = att * pu0[idx % m] + 0.5 * a * ir * dIs[idx];
    out.Q_u[idx] = att * qu0[idx % m] + 0.5 * ir / a * dIp[idx];
  });
  out.P_u.check_finite("reconstructed P_u");
  out.Q_u.check_finite("reconstructed Q_u");
  return out;
}

}  // namespace charwave
