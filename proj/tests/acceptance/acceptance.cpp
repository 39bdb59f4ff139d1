// Acceptance run: one PASS/FAIL line per criterion.
//
// A criterion listed with `expected_failure` is one whose stated band the
// scheme cannot meet (see docs/acceptance.md). Its line still reads FAIL; the
// exit status only turns nonzero on an unexpected failure or when an
// expected failure starts passing.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "charwave/cauchy.hpp"
#include "charwave/estimates.hpp"
#include "charwave/experiment.hpp"
#include "charwave/nullcone.hpp"
#include "charwave/nullplane.hpp"
#include "charwave/operators.hpp"
#include "charwave/oracles.hpp"
#include "charwave/random_data.hpp"
#include "refinement.hpp"

using namespace charwave;
using charwave::testing::determined_diff;

namespace {

constexpr double pi = std::numbers::pi;

// Pinned tolerances.
constexpr double kCauchyDriftLo = 11.0, kCauchyDriftHi = 21.0;
constexpr double kCauchySeconds = 60.0;
constexpr double kConstraintGrowth = 10.0;
constexpr double kPlaneBalanceLo = 2.8, kPlaneBalanceHi = 5.2;
constexpr double kPlaneSeconds = 30.0;
constexpr double kBandLo = 0.7, kBandHi = 1.3;  // ratio band around 2^p
constexpr double kTolConstant = 1.0;            // tol(grid) = C * h_max^p
constexpr std::size_t kSweepRuns = 100;
constexpr std::size_t kRandomSets = 20;
constexpr double kCT = 0.5;
constexpr double kOracleAbs = 1e-3;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  bool expected_failure;
  std::function<Outcome()> run;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

bool in_band(double ratio, int p) {
  const double t = std::pow(2.0, p);
  return ratio >= kBandLo * t && ratio <= kBandHi * t;
}

std::string fmt_ratios(const std::vector<double>& r) {
  std::ostringstream ss;
  ss.precision(3);
  for (std::size_t i = 0; i < r.size(); ++i) ss << (i ? ", " : "") << r[i];
  return ss.str();
}

std::vector<double> ratios(const std::vector<double>& v) {
  std::vector<double> out;
  for (std::size_t i = 1; i < v.size(); ++i) out.push_back(v[i - 1] / v[i]);
  return out;
}

GridSpec plane_grid(std::size_t n, int p = 2, double T = 1.0) {
  PlaneGridParams gp;
  gp.T = T;
  gp.N_z = gp.N_x = gp.N_y = n;
  gp.order = p;
  return make_nullplane_grid(gp);
}

GridSpec cone_grid(std::size_t n, int p = 2, double T = 1.0, std::size_t n_u = 0) {
  ConeGridParams gp;
  gp.T = T;
  gp.N_r = n;
  gp.N_s = gp.N_phi = 3 * n / 4;
  gp.N_u = n_u;
  gp.order = p;
  return make_nullcone_grid(gp);
}

GridSpec cauchy_grid(std::size_t n, int p) {
  CauchyGridParams k;
  k.lengths = {2 * pi, 2 * pi, 2 * pi};
  k.cells = {n, n, n};
  k.order = p;
  return make_cauchy_grid(k);
}

// Counts sweep runs with margin >= -tol.
Outcome sweep(Problem problem, const GridSpec& g, const char* label) {
  SweepOptions opt;
  opt.tolerance = tolerance(g, kTolConstant);
  opt.stop_on_violation = false;
  double worst = 0.0;
  const auto reports = property_sweep(problem, g, kSweepRuns, 1, opt);
  std::size_t ok = 0;
  for (const auto& r : reports) {
    ok += !r.flagged;
    worst = std::min(worst, r.margin / std::max(r.rhs_bound, 1e-300));
  }
  std::ostringstream ss;
  ss << label << " " << ok << "/" << reports.size() << " margin >= -tol (worst margin/rhs " << worst << ")";
  return {ok == reports.size(), ss.str()};
}

// 1. ---------------------------------------------------------------------
Outcome cauchy_conservation() {
  std::vector<double> drift;
  double slowest = 0.0;
  for (std::size_t n : {32, 64}) {
    Timer t;
    const GridSpec g = cauchy_grid(n, 4);
    const CauchyState s = random_cauchy_state(g, 1);
    const EstimateReport r = assemble_cauchy_report(s, cauchy_evolve(s));
    drift.push_back(std::abs(r.lhs_norm - r.data_norm_char) / r.data_norm_char);
    slowest = std::max(slowest, t.seconds());
  }
  const double q = drift[0] / drift[1];
  std::ostringstream ss;
  ss << "drift " << drift[0] << " -> " << drift[1] << ", ratio " << q << " (band [" << kCauchyDriftLo << ", "
     << kCauchyDriftHi << "]), slowest run " << slowest << " s";
  return {q >= kCauchyDriftLo && q <= kCauchyDriftHi && slowest < kCauchySeconds, ss.str()};
}

// 2. ---------------------------------------------------------------------
Outcome constraint_propagation() {
  bool ok = true;
  std::ostringstream ss;
  for (int p : {2, 4}) {
    std::vector<double> res;
    double growth = 0.0;
    for (std::size_t n : {16, 32}) {
      const GridSpec g = cauchy_grid(n, p);
      const CauchyState s = random_cauchy_state(g, 2);
      const auto c0 = constraint_residual(s);
      const auto c1 = constraint_residual(cauchy_evolve(s));
      double m0 = 0.0, m1 = 0.0;
      for (int i = 0; i < 3; ++i) {
        m0 = std::max(m0, c0[i]);
        m1 = std::max(m1, c1[i]);
      }
      growth = std::max(growth, m1 / m0);
      res.push_back(m1);
    }
    const double q = res[0] / res[1];
    ok = ok && growth <= kConstraintGrowth && in_band(q, p);
    ss << "p=" << p << ": growth " << growth << ", ratio " << q << "; ";
  }
  return {ok, ss.str()};
}

// 3. ---------------------------------------------------------------------
Outcome plane_balance() {
  bool ok = true;
  double slowest = 0.0;
  auto balance = [&](const std::function<EstimateReport(const GridSpec&)>& f) {
    std::vector<double> v;
    for (std::size_t n : {16, 32, 64}) {
      Timer t;
      v.push_back(f(plane_grid(n)).balance_residual);
      slowest = std::max(slowest, t.seconds());
    }
    return ratios(v);
  };
  auto band = [](const std::vector<double>& r) {
    for (double q : r)
      if (!(q >= kPlaneBalanceLo && q <= kPlaneBalanceHi)) return false;
    return true;
  };
  std::ostringstream ss;
  const auto rt = balance([](const GridSpec& g) {
    return run_oracle(Problem::nullplane, g, oracle_plane_transverse(1.0));
  });
  ss << "transverse ratios " << fmt_ratios(rt) << (band(rt) ? "" : " (out of band)");
  ok = band(rt);
  std::size_t good = 0;
  double lo = 1e300, hi = 0.0;
  for (std::uint64_t seed = 1; seed <= kRandomSets; ++seed) {
    const auto r = balance([seed](const GridSpec& g) { return run_random(Problem::nullplane, g, seed); });
    good += band(r);
    for (double q : r) lo = std::min(lo, q), hi = std::max(hi, q);
  }
  ok = ok && good == kRandomSets && slowest < kPlaneSeconds;
  ss << "; random " << good << "/" << kRandomSets << " in band, ratios in [" << lo << ", " << hi
     << "]; slowest run " << slowest << " s";
  return {ok, ss.str()};
}

// 4. ---------------------------------------------------------------------
Outcome plane_estimate() {
  Outcome o = sweep(Problem::nullplane, plane_grid(16), "N=16:");
  // The dropped terms reproduce the slack margin up to the discretization.
  std::vector<double> gap;
  for (std::size_t n : {16, 32, 64}) {
    const EstimateReport r = run_random(Problem::nullplane, plane_grid(n), 3);
    gap.push_back(std::abs(r.margin - r.dropped_terms));
  }
  const auto q = ratios(gap);
  const bool dropped_ok = in_band(q[0], 2) && in_band(q[1], 2);
  o.detail += "; |margin - dropped| ratios " + fmt_ratios(q);
  o.pass = o.pass && dropped_ok;
  return o;
}

// 5. ---------------------------------------------------------------------
Outcome plane_derivative_estimate() {
  Outcome o = sweep(Problem::nullplane_deriv, plane_grid(16), "N=16:");
  const OracleSolution w = oracle_plane_wave(1, 1, 0.5, 2 * pi, 2 * pi);
  bool cross_ok = true;
  for (int p : {2, 4}) {
    std::vector<double> err;
    for (std::size_t n : {16, 32}) {
      const GridSpec g = plane_grid(n, p);
      MarchOptions opt;
      opt.snapshot_steps = {g.steps / 2};
      const PlaneCharData d = plane_data_from(w, g);
      const EvolutionRecord main = plane_evolve(d, opt);
      const EvolutionRecord der = plane_derivative_evolve(PlaneDerivData::from(d), opt);
      const State& a = main.snapshots.at(g.steps / 2);
      const State& b = der.snapshots.at(g.steps / 2);
      const FieldSlice& R = a[main.index_of("R")];
      const FieldSlice& P = a[main.index_of("P")];
      const FieldSlice& Q = a[main.index_of("Q")];
      const std::size_t st = g.steps / 2;
      auto diff = [&](const FieldSlice& x, const char* v) { return determined_diff(x, b[der.index_of(v)], g, st); };
      err.push_back(std::max({diff(deriv(R, 1, p), "R_x"), diff(deriv(R, 2, p), "R_y"), diff(deriv(R, 0, p), "R_z"),
                              diff(deriv(P, 1, p), "P_x"), diff(deriv(Q, 1, p), "Q_x"), diff(deriv(P, 2, p), "P_y"),
                              diff(deriv(Q, 2, p), "Q_y")}));
    }
    const double q = err[0] / err[1];
    cross_ok = cross_ok && in_band(q, p);
    o.detail += "; cross-check p=" + std::to_string(p) + " ratio " + fmt_ratios({q});
  }
  o.pass = o.pass && cross_ok;
  return o;
}

// 6. ---------------------------------------------------------------------
Outcome pu_qu_quadrature() {
  const OracleSolution o = oracle_plane_transverse(1.0);
  bool ok = true;
  std::ostringstream ss;
  for (int p : {2, 4}) {
    std::vector<double> err;
    for (std::size_t n : {16, 32}) {
      const GridSpec g = plane_grid(n, p);
      const std::size_t step = g.steps / 2;
      MarchOptions opt;
      opt.snapshot_steps = {step - 2, step - 1, step, step + 1, step + 2};
      const PlaneCharData d = plane_data_from(o, g);
      const PlaneDerivData dd = PlaneDerivData::from(d);
      const EvolutionRecord main = plane_evolve(d, opt);
      const UDerivatives ud = plane_reconstruct_PuQu(dd, plane_derivative_evolve(dd, opt), step);
      err.push_back(std::max(determined_diff(ud.P_u, snapshot_u_derivative(main, "P", step), g, step),
                             determined_diff(ud.Q_u, snapshot_u_derivative(main, "Q", step), g, step)));
    }
    const double q = err[0] / err[1];
    ok = ok && in_band(q, p);
    ss << "p=" << p << ": error " << err[0] << " -> " << err[1] << ", ratio " << q << "; ";
  }
  return {ok, ss.str()};
}

// 7. ---------------------------------------------------------------------
bool volume_nonpositive(const EvolutionRecord& rec) {
  for (const auto& row : rec.volume)
    for (double v : row)
      if (v > 0.0) return false;
  return true;
}

Outcome cone_balance() {
  bool ok = true, sign_ok = true;
  std::size_t runs = 0;
  std::ostringstream ss;
  const OracleSolution oracles[] = {oracle_cone_ingoing(default_ingoing_profile(1.0, 1.0)),
                                    oracle_cone_dipole(default_dipole_profile(1.0))};
  for (const OracleSolution& o : oracles) {
    std::vector<double> res;
    for (std::size_t n : {16, 32, 64}) {
      EvolutionRecord rec;
      res.push_back(run_oracle(Problem::nullcone, cone_grid(n), o, &rec).balance_residual);
      sign_ok = sign_ok && volume_nonpositive(rec);
      ++runs;
    }
    const auto q = ratios(res);
    ok = ok && in_band(q.back(), 2);
    ss << o.name << " ratios " << fmt_ratios(q) << "; ";
  }
  for (std::uint64_t seed = 1; seed <= kRandomSets; ++seed) {
    sign_ok = sign_ok && volume_nonpositive(cone_evolve(random_cone_data(cone_grid(16), seed)));
    ++runs;
  }
  ss << "volume integrand <= 0 in " << (sign_ok ? "all " : "NOT all ") << runs << " runs";
  return {ok && sign_ok, ss.str()};
}

// 8. ---------------------------------------------------------------------
Outcome cone_estimate() {
  // N_u = 64 is the smallest step count that satisfies du <= 0.25 dr at N_r = 16.
  return sweep(Problem::nullcone, cone_grid(16, 2, 1.0, 64), "(N_u,N_r,N_s,N_phi)=(64,16,12,12):");
}

// 9. ---------------------------------------------------------------------
Outcome cone_derivative_estimate() {
  const double c = derive_Dtilde(cone_grid(16)).c;
  const GridSpec g = cone_grid(16, 2, kCT / c);
  Outcome o = sweep(Problem::nullcone_deriv, g, "");
  const auto reports = property_sweep(Problem::nullcone_deriv, g, 1, 1, {});
  const std::string csv = report_csv(reports);
  const bool columns = reports.front().c == c && std::abs(reports.front().cT - kCT) < 1e-12 &&
                       csv.find(format_real(c)) != std::string::npos;
  std::ostringstream ss;
  ss << "c = " << c << ", T = " << g.T << ", cT = " << reports.front().cT << "; " << o.detail
     << (columns ? "; c, cT in CSV" : "; c, cT missing from CSV");
  return {o.pass && columns, ss.str()};
}

// 10. --------------------------------------------------------------------
Outcome oracle_reproduction() {
  bool ok = true;
  std::ostringstream ss;
  struct Case {
    Problem problem;
    OracleSolution oracle;
    std::vector<std::string> vars;
  };
  const std::vector<Case> cases{
      {Problem::nullplane, oracle_plane_transverse(1.0), {"R", "P", "Q", "psi"}},
      {Problem::nullplane, oracle_plane_wave(1, 1, 0.5, 2 * pi, 2 * pi), {"R", "P", "Q", "psi"}},
      {Problem::nullcone, oracle_cone_ingoing(default_ingoing_profile(1.0, 1.0)), {"R", "P", "Q", "g"}},
      {Problem::nullcone, oracle_cone_dipole(default_dipole_profile(1.0)), {"R", "P", "Q", "g"}},
  };
  double transverse_fine = 0.0;
  for (const Case& c : cases) {
    std::vector<double> err;
    for (std::size_t n : {16, 32, 64}) {
      const GridSpec g = geometry_of(c.problem) == Geometry::nullplane ? plane_grid(n) : cone_grid(n);
      EvolutionRecord rec;
      run_oracle(c.problem, g, c.oracle, &rec);
      err.push_back(diagonal_error(rec, c.oracle, c.vars));
    }
    if (&c == &cases.front()) transverse_fine = err.back();
    const auto q = ratios(err);
    ok = ok && in_band(q.back(), 2);
    ss << c.oracle.name << " " << fmt_ratios(q) << "; ";
  }
  // Centered second differences misstate d_x of a k = 1 wave by (kh)^2 / 6.
  const double floor = std::pow(2 * pi / 64, 2) / 6;
  ss << "transverse error at N=64 " << transverse_fine << " (limit " << kOracleAbs << ", p=2 truncation "
     << floor << ")";
  return {ok && transverse_fine < kOracleAbs, ss.str()};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Cauchy norm conservation", true, cauchy_conservation},
      {2, "constraint propagation", false, constraint_propagation},
      {3, "null-plane balance identity", true, plane_balance},
      {4, "null-plane estimate", false, plane_estimate},
      {5, "null-plane derivative estimate", false, plane_derivative_estimate},
      {6, "P_u, Q_u quadratures", false, pu_qu_quadrature},
      {7, "null-cone balance with source", false, cone_balance},
      {8, "null-cone estimate", false, cone_estimate},
      {9, "null-cone derivative estimate", false, cone_derivative_estimate},
      {10, "oracle reproduction", true, oracle_reproduction},
  };
  int unexpected = 0;
  for (const Criterion& c : criteria) {
    Timer t;
    Outcome o;
    bool threw = false;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
      threw = true;
    }
    const bool surprise = threw || o.pass == c.expected_failure;
    unexpected += surprise;
    const char* note = threw                ? "  UNEXPECTED ERROR"
                       : !c.expected_failure ? ""
                       : o.pass              ? "  UNEXPECTED PASS"
                                             : "  expected failure";
    std::printf("criterion %d: %s  %s  [%s] (%.1f s)%s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                t.seconds(), note);
    std::fflush(stdout);
  }
  std::printf("%d unexpected result(s)\n", unexpected);
  return unexpected == 0 ? 0 : 1;
}
