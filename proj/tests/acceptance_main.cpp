// Acceptance harness: one line per criterion, exit status 0 only if every
// criterion holds at its stated tolerance.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <vector>

#include "lefspec/radial_lab.hpp"
#include "lefspec/reduction.hpp"
#include "lefspec/run_config.hpp"

using namespace lefspec;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int id, const char* label, bool pass, double seconds, const std::string& detail) {
  std::printf("criterion %2d [%s] %-34s (%.2fs) %s\n", id, pass ? "PASS" : "FAIL", label, seconds,
              detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

Point random_interior(std::mt19937& rng, int n, double rmax) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.05, rmax);
  Point x(static_cast<std::size_t>(n));
  double norm = 0.0;
  for (auto& v : x) {
    v = gauss(rng);
    norm += v * v;
  }
  norm = std::sqrt(norm);
  const double rr = unif(rng);
  for (auto& v : x) v *= rr / norm;
  return x;
}

// ---------------------------------------------------------------------------

void criterion_1_constants() {
  Timer timer;
  bool pass = true;
  std::string detail;
  try {
    for (int n : {3, 4, 5}) build_constants(n);  // dual evaluation enforced at 1e-8
    const ConstantsTable t3 = build_constants(3);
    pass = (t3.b1_base == 0.04);
    detail = fmt("dual-eval ok; b1_base(3)=%.17g", t3.b1_base);
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(1, "constants integrity", pass, timer.seconds(), detail);
}

void criterion_2_green_identities() {
  Timer timer;
  bool pass = true;
  double worst = 0.0;
  std::mt19937 rng(2024);
  for (int n : {3, 4, 5}) {
    UnitBallOracle ball(n);
    for (int trial = 0; trial < 10; ++trial) {
      const Point x0 = random_interior(rng, n, 0.5);
      const RobinIdentityReport rep = robin_identities_check(ball, x0, 64);
      worst = std::max(worst, rep.max_residual());
    }
  }
  pass = worst <= 1e-5;
  report(2, "Green/Robin boundary identities", pass, timer.seconds(),
         fmt("worst residual %.3e (tol 1e-5)", worst));
}

void criterion_3_ijk_tables() {
  Timer timer;
  bool pass = true;
  double worst = 0.0;
  try {
    for (int n : {3, 4, 5}) {
      UnitBallOracle ball(n);
      std::vector<Point> pts(3, Point(static_cast<std::size_t>(n), 0.0));
      pts[0][0] = 0.45;
      pts[1][0] = -0.3;
      pts[1][1] = 0.25;
      pts[2][1] = -0.4;
      const double r = 0.12;
      const double gamma = ball.gamma_n();
      auto track = [&](double got, double want) {
        worst = std::max(worst, std::abs(got - want) / std::max(std::abs(want), gamma));
      };
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int l = 0; l < 3; ++l) {
            // I_integral validates r vs r/2 agreement internally (1e-6)
            const double v = I_integral(ball, i, j, l, pts, r, 32);
            double want = 0.0;
            if (j == i && l == i)
              want = -(n - 2) * ball.tau(pts[static_cast<std::size_t>(i)]);
            else if (j == i && l != i)
              want = 0.5 * (n - 2) * ball.G(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(l)]);
            else if (l == i && j != i)
              want = 0.5 * (n - 2) * ball.G(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
            track(v, want);
          }
      // gradient-field tables on a representative index subset (all i,j,l; k,q in a diagonal+off pair)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int l = 0; l < 3; ++l)
            for (int k = 0; k < 2; ++k)
              for (int q = 0; q < 2; ++q) {
                const JKValue v = JK_integrals(ball, i, j, l, k, q, pts, r, 32);
                const auto is = static_cast<std::size_t>(i);
                const auto js = static_cast<std::size_t>(j);
                const auto ls = static_cast<std::size_t>(l);
                const auto ks = static_cast<std::size_t>(k);
                const auto qs = static_cast<std::size_t>(q);
                double wantJ = 0.0, wantK = 0.0;
                if (j == i && l == i) {
                  wantJ = -ball.grad_tau(pts[is])[ks];
                  wantK = -0.5 * ball.hess_tau(pts[is])[ks][qs];
                } else if (j == i && l != i) {
                  wantJ = ball.grad_x_G(pts[is], pts[ls])[ks];
                  wantK = ball.hess_xy_G(pts[is], pts[ls])[ks][qs];
                } else if (l == i && j != i) {
                  wantJ = ball.grad_x_G(pts[is], pts[js])[ks];
                  wantK = ball.hess_xx_G(pts[is], pts[js])[ks][qs];
                }
                track(v.J, wantJ);
                track(v.K, wantK);
              }
    }
    pass = worst <= 1e-5;
  } catch (const std::exception& e) {
    pass = false;
  }
  report(3, "scaling/gradient flux tables", pass, timer.seconds(),
         fmt("worst deviation %.3e (tol 1e-5, r-independence 1e-6 enforced)", worst));
}

void criterion_4_pohozaev() {
  Timer timer;
  std::mt19937 rng(55);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst = 0.0;
  const int n = 3;
  const Point x0 = {0.1, -0.05, 0.2};
  for (int trial = 0; trial < 20; ++trial) {
    std::array<double, 10> a{}, b{};
    for (auto& v : a) v = unif(rng);
    for (auto& v : b) v = unif(rng);
    auto field = [](const std::array<double, 10>& c) {
      return SmoothField{
          [c](const Point& x) {
            return c[0] + c[1] * x[0] + c[2] * x[1] + c[3] * x[2] + c[4] * x[0] * x[0] +
                   c[5] * x[1] * x[1] + c[6] * x[2] * x[2] + c[7] * x[0] * x[1] +
                   c[8] * x[0] * x[2] + c[9] * x[1] * x[2];
          },
          [c](const Point& x) {
            return Point{c[1] + 2.0 * c[4] * x[0] + c[7] * x[1] + c[8] * x[2],
                         c[2] + 2.0 * c[5] * x[1] + c[7] * x[0] + c[9] * x[2],
                         c[3] + 2.0 * c[6] * x[2] + c[8] * x[0] + c[9] * x[1]};
          },
          [c](const Point&) { return 2.0 * (c[4] + c[5] + c[6]); }};
    };
    worst = std::max(worst, bilinear_pohozaev_check(field(a), field(b), x0, 0.6, n));
  }
  report(4, "bilinear volume-surface identity", worst <= 1e-8, timer.seconds(),
         fmt("worst residual %.3e over 20 trials (tol 1e-8)", worst));
}

void criterion_5_matrix_pipeline() {
  Timer timer;
  const int n = 4;
  UnitBallOracle ball(n);
  const ConstantsTable t = build_constants(n);
  Configuration crit;
  crit.n = n;
  crit.m = 1;
  crit.lambdas = {std::pow(t.C0 / t.gamma_n, 1.0 / (n - 2))};
  crit.points = {Point(static_cast<std::size_t>(n), 0.0)};
  const ReductionMatrices mat = build_matrices(crit, ball, t);
  const BandSpectra sp = spectra(mat);

  bool p_zero = true;
  for (const auto& row : mat.P)
    for (double v : row) p_zero &= (v == 0.0);

  // stated check: A2 equals +(1/2) lam^n D^2 tau to 1e-10. The assembled A2
  // carries the opposite sign (it equals the pure Hessian block of the
  // defining formula, -(1/2) lam^n D^2 tau); both residuals are printed.
  const double lam = crit.lambdas[0];
  double dev_plus = 0.0, dev_minus = 0.0;
  const auto htau = ball.hess_tau(crit.points[0]);
  double scale = 0.0;
  for (int s = 0; s < n; ++s)
    for (int q = 0; q < n; ++q) {
      const double href = 0.5 * std::pow(lam, n) *
                          htau[static_cast<std::size_t>(s)][static_cast<std::size_t>(q)];
      const double a2 = mat.A2(static_cast<std::size_t>(s), static_cast<std::size_t>(q));
      dev_plus = std::max(dev_plus, std::abs(a2 - href));
      dev_minus = std::max(dev_minus, std::abs(a2 + href));
      scale = std::max(scale, std::abs(href));
    }
  const bool a2_as_stated = dev_plus <= 1e-10 * scale;

  const bool rho1_zero = std::abs(sp.rho1[0]) <= 1e-9;
  const bool rho3_ok = std::abs(sp.rho3[0] - 2.0 * t.C0) <= 1e-10 * 2.0 * t.C0;
  const bool m2_ok = mat.m2_min_eigenvalue >= -1e-9 * std::max(1.0, mat.M2.frobenius_norm());

  // Q symmetry on random three-bubble configurations (structural, so the
  // stationarity gate is bypassed with a large tolerance)
  double qgap = 0.0;
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> unif(-0.4, 0.4);
  for (int trial = 0; trial < 5; ++trial) {
    Configuration c3;
    c3.n = n;
    c3.m = 3;
    for (int i = 0; i < 3; ++i) {
      Point x(static_cast<std::size_t>(n));
      for (auto& v : x) v = unif(rng);
      x[0] += (i - 1) * 0.5;
      c3.points.push_back(x);
      c3.lambdas.push_back(0.7 + 0.2 * i);
    }
    const ReductionMatrices m3 = build_matrices(c3, ball, t, 1e30);
    qgap = std::max(qgap, m3.q_symmetry_gap / std::max(1.0, m3.Q.frobenius_norm()));
  }

  const bool pass =
      p_zero && a2_as_stated && rho1_zero && rho3_ok && mat.m1_positive_definite && m2_ok &&
      qgap <= 1e-9;
  report(5, "matrix pipeline at m=1", pass, timer.seconds(),
         fmt("P=0:%d |A2-(+H/2)|=%.2e |A2-(-H/2)|=%.2e rho1=%.1e rho3-2C0=%.1e Qgap=%.1e",
             p_zero, dev_plus, dev_minus, sp.rho1[0], sp.rho3[0] - 2.0 * t.C0, qgap));
}

SweepReport g_sweep_n4;      // shared by criteria 6-9, 12, 13
SweepReport g_sweep_n4_dbl;  // doubled mesh for criterion 13

void criterion_6_morse() {
  Timer timer;
  const int n = 4;
  UnitBallOracle ball(n);
  const ConstantsTable t = build_constants(n);
  Configuration crit;
  crit.n = n;
  crit.m = 1;
  crit.lambdas = {std::pow(t.C0 / t.gamma_n, 1.0 / (n - 2))};
  crit.points = {Point(static_cast<std::size_t>(n), 0.0)};
  const ReductionMatrices mat = build_matrices(crit, ball, t);
  const BandSpectra sp = spectra(mat);
  const MorseBounds mb = morse_bounds(mat, sp);
  const int predicted = mb.exact.value_or(-1);

  bool lab_all_1n = true;
  bool lab_matches_prediction = true;
  for (const auto& pt : g_sweep_n4.points) {
    lab_all_1n &= (pt.count_below_one == 1 + n);
    lab_matches_prediction &= (pt.count_below_one == predicted);
  }
  const bool pass = (predicted == 1 + n) && lab_all_1n;
  report(6, "Morse index cross-validation", pass, timer.seconds(),
         fmt("stated target 1+n=%d; reduction predicts %d, pde counts %d (agree:%d)", 1 + n,
             predicted, g_sweep_n4.points.empty() ? -1 : g_sweep_n4.points[0].count_below_one,
             lab_matches_prediction));
}

void criterion_7_first_band() {
  Timer timer;
  const auto& rep = g_sweep_n4;
  const double di = std::abs(rep.first_fit.intercept / rep.first_intercept_target - 1.0);
  const double ds = std::abs(rep.first_fit.slope / rep.first_slope_target - 1.0);
  const bool pass = di < 0.02 && ds < 0.10;
  report(7, "first-band eigenvalue law", pass, timer.seconds(),
         fmt("intercept %.6f (dev %.2f%%), slope %.6f (dev %.2f%%)", rep.first_fit.intercept,
             100.0 * di, rep.first_fit.slope, 100.0 * ds));
}

void criterion_8_last_band() {
  Timer timer;
  const auto& rep = g_sweep_n4;
  const double dev = std::abs(rep.last_fit.slope / rep.last_slope_target - 1.0);
  const bool pass = dev < 0.10;
  report(8, "last-band eigenvalue law", pass, timer.seconds(),
         fmt("slope %.5f vs target %.5f (dev %.1f%%; effective-rate value %.5f)",
             rep.last_fit.slope, rep.last_slope_target, 100.0 * dev,
             rep.last_slope_effective));
}

void criterion_9_middle_band() {
  Timer timer;
  const auto& rep = g_sweep_n4;
  const double dev = std::abs(rep.s_extrapolated / rep.s_target - 1.0);
  bool positive_decreasing = true;
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    positive_decreasing &= rep.points[i].s_middle > 0.0;
    if (i > 0) positive_decreasing &= rep.points[i].s_middle < rep.points[i - 1].s_middle;
  }
  const bool pass = dev <= 0.20 && positive_decreasing;
  report(9, "middle-band eigenvalue law", pass, timer.seconds(),
         fmt("s_extrap %.5f vs target %.5f; positive/decreasing:%d (effective-rate value %.5f)",
             rep.s_extrapolated, rep.s_target, positive_decreasing, rep.s_effective));
}

void criterion_10_profiles(const RadialSolution& sol, const SectorSpectrum& s0,
                           const SectorSpectrum& s1) {
  Timer timer;
  const ProfileReport prof = eigenfunction_profiles(sol, s0, s1);
  const bool pass = prof.dist_first <= 0.05 && prof.dist_middle <= 0.05 && prof.dist_last <= 0.05;
  report(10, "eigenfunction profiles", pass, timer.seconds(),
         fmt("sup distances %.2f%% / %.2f%% / %.2f%% (tol 5%%)", 100.0 * prof.dist_first,
             100.0 * prof.dist_middle, 100.0 * prof.dist_last));
}

void criterion_11_outer(const RadialSolution& sol, const SectorSpectrum& s0,
                        const SectorSpectrum& s1, const ConstantsTable& t) {
  Timer timer;
  UnitBallOracle ball(4);
  const OuterLimitReport outer = outer_limits_check(sol, s0, s1, ball, t);
  // trend: compare against the ratio at the largest sweep eps
  double ratio_large = outer.u_ratio;
  {
    const double eps = g_sweep_n4.points.front().eps;
    const ProblemParams params = ProblemParams::make(4, eps);
    const double lam0 = std::pow(t.C0 / t.gamma_n, 0.5);
    const RadialMesh mesh =
        RadialMesh::make(std::min(8.0 * lam0 * std::sqrt(eps), 0.5), 400, 400);
    const RadialSolution large = solve_radial(params, mesh);
    const auto l0 = sector_eigen(large, 0, 2);
    const auto l1 = sector_eigen(large, 1, 1);
    ratio_large = outer_limits_check(large, l0, l1, ball, t).u_ratio;
  }
  const bool trend = std::abs(outer.u_ratio - 1.0) <= std::abs(ratio_large - 1.0) + 0.02;
  const bool pass = outer.u_ratio >= 0.9 && outer.u_ratio <= 1.1 && trend;
  report(11, "outer solution limit", pass, timer.seconds(),
         fmt("ratio %.4f at eps=%.4g (coarse-eps ratio %.4f)", outer.u_ratio,
             sol.params.epsilon, ratio_large));
}

void criterion_12_decay() {
  Timer timer;
  const auto& pts = g_sweep_n4.points;
  double lo = 1e300, hi = 0.0;
  for (const auto& pt : pts) {
    lo = std::min(lo, pt.decay_c);
    hi = std::max(hi, pt.decay_c);
  }
  const bool pass = !pts.empty() && (hi - lo) / hi < 0.20;
  report(12, "uniform decay bound", pass, timer.seconds(),
         fmt("sup ratio range [%.4f, %.4f] across the sweep", lo, hi));
}

void criterion_13_mesh_robustness() {
  Timer timer;
  const auto& a = g_sweep_n4;
  const auto& b = g_sweep_n4_dbl;
  const double tol_i = 0.02 * a.first_intercept_target;
  const double tol_s = 0.10 * a.first_slope_target;
  const double tol_3 = 0.10 * a.last_slope_target;
  const double tol_9 = 0.20 * std::abs(a.s_target);
  const double d_i = std::abs(a.first_fit.intercept - b.first_fit.intercept);
  const double d_s = std::abs(a.first_fit.slope - b.first_fit.slope);
  const double d_3 = std::abs(a.last_fit.slope - b.last_fit.slope);
  const double d_9 = std::abs(a.s_extrapolated - b.s_extrapolated);
  const bool pass = d_i < 0.5 * tol_i && d_s < 0.5 * tol_s && d_3 < 0.5 * tol_3 &&
                    d_9 < 0.5 * tol_9;
  report(13, "mesh-doubling robustness", pass, timer.seconds(),
         fmt("shifts: intercept %.1e slope %.1e last %.1e s %.1e", d_i, d_s, d_3, d_9));
}

}  // namespace

int main() {
  std::printf("acceptance suite: spectral asymptotics laboratory\n");
  criterion_1_constants();
  criterion_2_green_identities();
  criterion_3_ijk_tables();
  criterion_4_pohozaev();
  criterion_5_matrix_pipeline();

  // shared sweeps for criteria 6-9, 12, 13
  const ConstantsTable t4 = build_constants(4);
  {
    Timer timer;
    SweepOptions opt;  // spec default mesh
    g_sweep_n4 = sweep(4, {0.1, 0.05, 0.025, 0.0125}, t4, opt);
    SweepOptions dbl;
    dbl.coreCount *= 2;
    dbl.outerCount *= 2;
    g_sweep_n4_dbl = sweep(4, {0.1, 0.05, 0.025, 0.0125}, t4, dbl);
    std::printf("          [sweeps at n=4 completed in %.2fs]\n", timer.seconds());
  }

  criterion_6_morse();
  criterion_7_first_band();
  criterion_8_last_band();
  criterion_9_middle_band();

  {
    const ProblemParams params = ProblemParams::make(4, 0.025);
    const double lam0 = std::pow(t4.C0 / t4.gamma_n, 0.5);
    const RadialMesh mesh =
        RadialMesh::make(std::min(8.0 * lam0 * std::sqrt(0.025), 0.5), 800, 800);
    const RadialSolution sol = solve_radial(params, mesh);
    const SectorSpectrum s0 = sector_eigen(sol, 0, 2);
    const SectorSpectrum s1 = sector_eigen(sol, 1, 1);
    criterion_10_profiles(sol, s0, s1);
    criterion_11_outer(sol, s0, s1, t4);
  }
  criterion_12_decay();
  criterion_13_mesh_robustness();

  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
