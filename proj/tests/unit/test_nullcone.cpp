#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "charwave/estimates.hpp"
#include "charwave/nullcone.hpp"
#include "charwave/operators.hpp"
#include "charwave/oracles.hpp"
#include "charwave/random_data.hpp"
#include "refinement.hpp"

using namespace charwave;
using charwave::testing::determined_diff;
using charwave::testing::ratio_in_band;

namespace {

constexpr double pi = std::numbers::pi;

GridSpec cone_grid(std::size_t n, int p = 2, double T = 1.0, double r0 = 1.0) {
  ConeGridParams gp;
  gp.T = T;
  gp.r0 = r0;
  gp.N_r = n;
  gp.N_s = gp.N_phi = 3 * n / 4;
  gp.order = p;
  return make_nullcone_grid(gp);
}

const std::vector<std::string> kDerivVars{"Rhat_s", "Rhat_phi", "R_r", "Phat_s", "Phat_phi", "Qhat_s", "Qhat_phi"};

double oracle_fd(const OracleSolution& o, const std::string& v, int c, std::array<double, 4> x, double h = 1e-4) {
  auto at = [&](double d) {
    auto y = x;
    y[c] += d;
    return o.eval(v, y[0], y[1], y[2], y[3]);
  };
  return (at(-2 * h) - 8 * at(-h) + 8 * at(h) - at(2 * h)) / (12 * h);
}

}  // namespace

TEST_CASE("cone hypersurface solve: damping and constant g") {
  for (int p : {2, 4}) {
    const GridSpec g = cone_grid(8, p);
    const std::size_t m = g.axes[1].points() * g.axes[2].points();
    const ConeNull n = cone_hypersurface_solve(FieldSlice(g.axes), std::vector<double>(m, 1.0),
                                               std::vector<double>(m, 0.0), std::vector<double>(m, 0.6), p);
    const FieldSlice expect = FieldSlice::sample(g.axes, [&](double r, double, double) { return g.r0 / r; });
    CHECK(max_abs_diff(n.P, expect) < 1e-13);
    CHECK(n.Q.max_abs() == 0.0);
    CHECK(max_abs_diff(n.g, FieldSlice(g.axes, 0.0, 0.6)) == 0.0);
  }
}

TEST_CASE("cone hypersurface solve on the ingoing wave") {
  const OracleSolution o = oracle_cone_ingoing(default_ingoing_profile(1.0, 1.0));
  for (int p : {2, 4}) {
    auto run = [&](std::size_t n) {
      const GridSpec g = cone_grid(n, p);
      const double u = 0.25;
      const FieldSlice R = oracle_slice(o, g, "R", u);
      const FieldSlice G = oracle_slice(o, g, "g", u);
      const ConeNull s = cone_hypersurface_solve(R, lower_plane(FieldSlice(g.axes)), lower_plane(FieldSlice(g.axes)),
                                                 lower_plane(G), p);
      CHECK(s.P.max_abs() == 0.0);
      return max_abs_diff(s.g, G);
    };
    CHECK(ratio_in_band(run(16), run(32), p));
  }
}

TEST_CASE("cone advance and evolve with zero data") {
  const GridSpec g = cone_grid(8);
  const ConeCharData d = ConeCharData::zero(g);
  CHECK(cone_advance_R(d, FieldSlice(g.axes), 0).max_abs() == 0.0);
  const EvolutionRecord rec = cone_evolve(d);
  for (const auto& f : rec.diagonal.fields) CHECK(f.max_abs() == 0.0);
  for (const auto& row : rec.volume)
    for (double v : row) CHECK(v == 0.0);
  const EvolutionRecord drec = cone_derivative_evolve(ConeDerivData::from(d));
  for (const auto& f : drec.diagonal.fields) CHECK(f.max_abs() == 0.0);
  CHECK(derive_Dtilde(g).c > 0.0);
}

TEST_CASE("cone oracles are reproduced on Sigma_T at order p") {
  const OracleSolution in = oracle_cone_ingoing(default_ingoing_profile(1.0, 1.0));
  const OracleSolution dip = oracle_cone_dipole(default_dipole_profile(1.0));
  for (int p : {2, 4}) {
    std::vector<double> e_in, e_dip;
    for (std::size_t n : {16, 32}) {
      const GridSpec g = cone_grid(n, p);
      EvolutionRecord rec;
      run_oracle(Problem::nullcone, g, in, &rec);
      e_in.push_back(diagonal_error(rec, in, {"R", "P", "Q", "g"}));
      run_oracle(Problem::nullcone, g, dip, &rec);
      e_dip.push_back(diagonal_error(rec, dip, {"R", "P", "Q", "g"}));
    }
    INFO(e_in[0], " ", e_in[1]);
    CHECK(ratio_in_band(e_in[0], e_in[1], p));
    INFO(e_dip[0], " ", e_dip[1]);
    CHECK(ratio_in_band(e_dip[0], e_dip[1], p));
  }
}

TEST_CASE("recorded volume integrand is never positive") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const EvolutionRecord rec = cone_evolve(random_cone_data(cone_grid(8), seed));
    for (const auto& row : rec.volume)
      for (double v : row) CHECK(v <= 0.0);
  }
}

TEST_CASE("principal matrices") {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> rd(1.0, 3.0), sd(-0.95, 0.95);
  for (int t = 0; t < 10; ++t) {
    const double r = rd(rng), s = sd(rng);
    const Matrix3 au = cone_A(0, r, s), ar = cone_A(1, r, s);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(au[i][j] + ar[i][j] == (i == j ? 1.0 : 0.0));
    // B^u + B^r = diag(2, 2, 1, 1, 1, 1, 1) >= I.
    const Matrix7 bu = cone_B(0, r, s), br = cone_B(1, r, s);
    const double diag[7] = {2, 2, 1, 1, 1, 1, 1};
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) CHECK(bu[i][j] + br[i][j] == (i == j ? diag[i] : 0.0));
    for (int dir = 0; dir < 4; ++dir) {
      const Matrix7 b = cone_B(dir, r, s);
      for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) CHECK(b[i][j] == b[j][i]);
    }
  }
}

TEST_CASE("main-system source form is -(P^2 + Q^2) / r") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const double r = 1.0 + 0.5 * (u(rng) + 1.0), s = 0.95 * u(rng);
    const std::array<double, 3> v{u(rng), u(rng), u(rng)};
    const Matrix3 D = cone_Dtilde_main(r, s);
    double q = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) q += v[i] * D[i][j] * v[j];
    CHECK(q == doctest::Approx(-(v[1] * v[1] + v[2] * v[2]) / r));
  }
}

TEST_CASE("D~ entries at (r, s) = (2, 0.6)") {
  // a = 0.8, q = s / (r a) = 0.375.
  const Matrix7 m = cone_Dtilde(2.0, 0.6);
  CHECK(m[0][6] == doctest::Approx(0.75));
  CHECK(m[0][2] == doctest::Approx(0.375));
  CHECK(m[2][0] == doctest::Approx(-0.375));
  CHECK(m[3][0] == doctest::Approx(-0.375));
  CHECK(m[0][3] == doctest::Approx(0.375));
  CHECK(m[1][4] == doctest::Approx(-1.125));
  CHECK(m[4][1] == doctest::Approx(-0.375));
  CHECK(m[5][1] == doctest::Approx(0.75));
  CHECK(m[2][3] == doctest::Approx(-2.0));
  CHECK(m[6][6] == doctest::Approx(-2.0));
  CHECK(m[1][1] == 0.0);
}

TEST_CASE("D~ = 2 D + d_s B^s") {
  const double h = 1e-5;
  for (double s : {-0.7, 0.1, 0.55}) {
    const double r = 1.3;
    const Matrix7 dt = cone_Dtilde(r, s), d = cone_deriv_D(r, s);
    const Matrix7 bp = cone_B(2, r, s + h), bm = cone_B(2, r, s - h);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j)
        CHECK(dt[i][j] == doctest::Approx(2 * d[i][j] + (bp[i][j] - bm[i][j]) / (2 * h)).epsilon(1e-8));
  }
}

TEST_CASE("dipole solutions satisfy B^a d_a w = D w pointwise") {
  for (const OracleSolution& o : {oracle_cone_dipole(default_dipole_profile(1.0)),
                                  oracle_cone_rotated_dipole(default_dipole_profile(1.0))}) {
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> U(0.1, 0.9), Rr(1.0, 2.0), S(-0.9, 0.9), Ph(0.0, 2 * pi);
    for (int t = 0; t < 20; ++t) {
      const std::array<double, 4> x{U(rng), Rr(rng), S(rng), Ph(rng)};
      const double r = x[1], s = x[2];
      std::array<double, 7> w, lhs{};
      for (int i = 0; i < 7; ++i) w[i] = o.eval(kDerivVars[i], x[0], x[1], x[2], x[3]);
      for (int dir = 0; dir < 4; ++dir) {
        const Matrix7 B = cone_B(dir, r, s);
        for (int i = 0; i < 7; ++i)
          for (int j = 0; j < 7; ++j)
            if (B[i][j] != 0.0) lhs[i] += B[i][j] * oracle_fd(o, kDerivVars[j], dir, x);
      }
      const Matrix7 D = cone_deriv_D(r, s);
      for (int i = 0; i < 7; ++i) {
        double dw = 0.0;
        for (int j = 0; j < 7; ++j) dw += D[i][j] * w[j];
        CHECK(lhs[i] == doctest::Approx(dw).epsilon(1e-6).scale(1.0));
      }
    }
  }
}

TEST_CASE("w D~ w matches d_a(w B^a w) - 2 w B^a d_a w + 2 w D w for arbitrary w") {
  // Smooth w(u, r, s, phi), not a solution.
  auto wf = [](int i, std::array<double, 4> x) {
    return std::sin(0.3 * (i + 1) * x[0] + 0.7 * x[1] - 0.4 * i * x[2] + std::cos(i * x[3]));
  };
  const double h = 1e-5;
  for (std::array<double, 4> x : {std::array<double, 4>{0.2, 1.3, 0.4, 1.0}, {0.7, 1.8, -0.6, 4.0}}) {
    const double r = x[1], s = x[2];
    auto wBw = [&](int dir, std::array<double, 4> y) {
      const Matrix7 B = cone_B(dir, y[1], y[2]);
      double q = 0.0;
      for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) q += wf(i, y) * B[i][j] * wf(j, y);
      return q;
    };
    double div = 0.0, wBdw = 0.0;
    for (int dir = 0; dir < 4; ++dir) {
      auto yp = x, ym = x;
      yp[dir] += h;
      ym[dir] -= h;
      div += (wBw(dir, yp) - wBw(dir, ym)) / (2 * h);
      const Matrix7 B = cone_B(dir, r, s);
      for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) wBdw += wf(i, x) * B[i][j] * (wf(j, yp) - wf(j, ym)) / (2 * h);
    }
    const Matrix7 Dt = cone_Dtilde(r, s), D = cone_deriv_D(r, s);
    double wDtw = 0.0, wDw = 0.0;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) {
        wDtw += wf(i, x) * Dt[i][j] * wf(j, x);
        wDw += wf(i, x) * D[i][j] * wf(j, x);
      }
    CHECK(wDtw == doctest::Approx(div - 2 * wBdw + 2 * wDw).epsilon(1e-6));
  }
}

TEST_CASE("c is the grid maximum of |D~|") {
  // At r0 = 1 the largest entry is |D~_{1,4}| = 3 s / (r a) at the cell nearest the pole.
  CHECK(derive_Dtilde(cone_grid(16)).c == doctest::Approx(33.0 / std::sqrt(23.0)));
  // Doubling N_s moves that cell closer to the pole; c grows like N_s^(1/2).
  CHECK(derive_Dtilde(cone_grid(32)).c == doctest::Approx(69.0 / std::sqrt(47.0)));
  const DtildeField f = derive_Dtilde(cone_grid(8));
  CHECK(f.entries.size() == 9 * 6);
  const Matrix7& m = f.at(3, 2);
  const Matrix7 direct = cone_Dtilde(f.grid.axes[0].coord(3), f.grid.axes[1].coord(2));
  CHECK(m == direct);
}

TEST_CASE("cone derivative system reproduces the dipole at order p") {
  const OracleSolution o = oracle_cone_dipole(default_dipole_profile(1.0));
  for (int p : {2, 4}) {
    std::vector<double> err;
    for (std::size_t n : {16, 32}) {
      EvolutionRecord rec;
      run_oracle(Problem::nullcone_deriv, cone_grid(n, p), o, &rec);
      err.push_back(diagonal_error(rec, o, kDerivVars));
    }
    INFO(err[0], " ", err[1]);
    CHECK(ratio_in_band(err[0], err[1], p));
  }
}

TEST_CASE("differentiated cone run matches the derivative run") {
  const OracleSolution o = oracle_cone_dipole(default_dipole_profile(1.0));
  std::vector<double> err;
  for (std::size_t n : {16, 32}) {
    const GridSpec g = cone_grid(n);
    MarchOptions opt;
    opt.snapshot_steps = {g.steps / 2};
    const ConeCharData d = cone_data_from(o, g);
    const EvolutionRecord main = cone_evolve(d, opt);
    const EvolutionRecord der = cone_derivative_evolve(ConeDerivData::from(d), opt);
    const State& a = main.snapshots.at(g.steps / 2);
    const State& b = der.snapshots.at(g.steps / 2);
    const FieldSlice Rr = deriv(a[main.index_of("R")], 0, 2);
    FieldSlice Rs = deriv(a[main.index_of("R")], 1, 2);
    const Shape sh = g.shape();
    for (std::size_t i = 0; i < sh[0]; ++i)
      for (std::size_t j = 0; j < sh[1]; ++j)
        for (std::size_t k = 0; k < sh[2]; ++k) {
          const double s = g.axes[1].coord(j);
          Rs(i, j, k) *= std::sqrt(1 - s * s) / g.axes[0].coord(i);
        }
    err.push_back(std::max(determined_diff(Rr, b[der.index_of("R_r")], g, g.steps / 2),
                           determined_diff(Rs, b[der.index_of("Rhat_s")], g, g.steps / 2)));
  }
  INFO(err[0], " ", err[1]);
  CHECK(ratio_in_band(err[0], err[1], 2));
}

TEST_CASE("cone P_u, Q_u reconstruction") {
  {
    const GridSpec g = cone_grid(8);
    ConeCharData d = ConeCharData::zero(g);
    // a P = u is constant in s, so every derivative variable stays zero and P_u = r0 / (r a).
    d.P_on_r0 = FieldSlice::sample(transverse_axes(g), [](double u, double s, double) { return u / std::sqrt(1 - s * s); });
    const ConeDerivData dd = ConeDerivData::from(d);
    MarchOptions opt;
    opt.snapshot_steps = {8};
    const UDerivatives ud = cone_reconstruct_PuQu(dd, cone_derivative_evolve(dd, opt), 8);
    const FieldSlice expect =
        FieldSlice::sample(g.axes, [&](double r, double s, double) { return g.r0 / (r * std::sqrt(1 - s * s)); });
    CHECK(max_abs_diff(ud.P_u, expect) < 1e-10);
    CHECK(ud.Q_u.max_abs() == 0.0);
  }
  const OracleSolution o = oracle_cone_dipole(default_dipole_profile(1.0));
  std::vector<double> e_exact, e_direct;
  for (std::size_t n : {16, 32}) {
    const GridSpec g = cone_grid(n);
    const std::size_t step = g.steps / 2;
    MarchOptions opt;
    opt.snapshot_steps = {step - 1, step, step + 1};
    const ConeCharData d = cone_data_from(o, g);
    const ConeDerivData dd = ConeDerivData::from(d);
    const EvolutionRecord main = cone_evolve(d, opt);
    const UDerivatives ud = cone_reconstruct_PuQu(dd, cone_derivative_evolve(dd, opt), step);
    e_exact.push_back(max_abs_diff(ud.P_u, oracle_slice(o, g, "P_u", step * g.step())));
    e_direct.push_back(determined_diff(ud.P_u, snapshot_u_derivative(main, "P", step), g, step));
  }
  INFO(e_exact[0], " ", e_exact[1]);
  CHECK(ratio_in_band(e_exact[0], e_exact[1], 2));
  INFO(e_direct[0], " ", e_direct[1]);
  CHECK(ratio_in_band(e_direct[0], e_direct[1], 2));
}

TEST_CASE("g is its worldtube value plus the radial integral of R") {
  const GridSpec g = cone_grid(8);
  const ConeCharData d = random_cone_data(g, 9);
  MarchOptions opt;
  opt.snapshot_steps = {g.steps};
  const EvolutionRecord rec = cone_evolve(d, opt);
  const State& snap = rec.snapshots.at(g.steps);
  const FieldSlice I = cumulative_integral(snap[rec.index_of("R")], 0, 2);
  const auto g0 = plane_view(d.g_on_r0, 2 * g.steps);
  FieldSlice expect = I;
  for (std::size_t i = 0; i < expect.size(); ++i) expect[i] += g0[i % g0.size()];
  CHECK(max_abs_diff(snap[rec.index_of("g")], expect) < 1e-12);
}

TEST_CASE("cone balance residual converges at order p on the oracles") {
  for (const OracleSolution& o : {oracle_cone_ingoing(default_ingoing_profile(1.0, 1.0)),
                                  oracle_cone_dipole(default_dipole_profile(1.0))}) {
    std::vector<double> res;
    for (std::size_t n : {16, 32, 64}) res.push_back(run_oracle(Problem::nullcone, cone_grid(n), o).balance_residual);
    INFO(res[0], " ", res[1], " ", res[2]);
    CHECK(ratio_in_band(res[1], res[2], 2));
  }
}

TEST_CASE("boundary-only data: the Sigma_T norm is bounded by the worldtube data alone") {
  const GridSpec g = cone_grid(16);
  ConeCharData d = random_cone_data(g, 21);
  d.R_on_u0.fill(0.0);
  const EstimateReport r = assemble_report(cone_evolve(d), Problem::nullcone);
  CHECK(r.data_norm_char == 0.0);
  CHECK(r.lhs_norm <= r.data_norm_transverse + tolerance(g, 1.0));
}
