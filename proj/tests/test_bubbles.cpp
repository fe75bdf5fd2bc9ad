#include <doctest.h>

#include <cmath>
#include <random>

#include "lefspec/bubbles.hpp"
#include "lefspec/green.hpp"

using namespace lefspec;

TEST_CASE("bubble values and scaling identity") {
  BubbleParams b{1.0, {0.0, 0.0, 0.0}};
  CHECK(bubble(b, {0.0, 0.0, 0.0}, 3) == doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-14));

  // direct evaluation at |x| = 1, lambda = 1, n = 4: beta_4 / 2
  BubbleParams b4{1.0, {0.0, 0.0, 0.0, 0.0}};
  CHECK(bubble(b4, {1.0, 0.0, 0.0, 0.0}, 4) ==
        doctest::Approx(std::sqrt(8.0) / 2.0).epsilon(1e-14));

  std::mt19937 rng(1);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int n : {3, 4, 5}) {
    for (int trial = 0; trial < 10; ++trial) {
      Point x0(static_cast<std::size_t>(n)), x(static_cast<std::size_t>(n));
      for (auto& v : x0) v = unif(rng);
      for (auto& v : x) v = unif(rng);
      const double lam = std::exp(unif(rng) * 0.5);
      BubbleParams bp{lam, x0};
      Point scaled(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k)
        scaled[static_cast<std::size_t>(k)] =
            (x[static_cast<std::size_t>(k)] - x0[static_cast<std::size_t>(k)]) / lam;
      BubbleParams unit{1.0, Point(static_cast<std::size_t>(n), 0.0)};
      const double expected = std::pow(lam, -0.5 * (n - 2)) * bubble(unit, scaled, n);
      CHECK(bubble(bp, x, n) == doctest::Approx(expected).epsilon(1e-14));
    }
  }
}

TEST_CASE("bubble_dlambda analytic derivative") {
  BubbleParams b{1.0, {0.0, 0.0, 0.0}};
  CHECK(bubble_dlambda(b, {0.0, 0.0, 0.0}, 3) < 0.0);
  // vanishes where |x - x0| = lambda
  CHECK(std::abs(bubble_dlambda(b, {1.0, 0.0, 0.0}, 3)) < 1e-15);

  std::mt19937 rng(2);
  std::uniform_real_distribution<double> unif(-1.5, 1.5);
  for (int n : {3, 4, 5}) {
    for (int trial = 0; trial < 8; ++trial) {
      Point x0(static_cast<std::size_t>(n), 0.0), x(static_cast<std::size_t>(n));
      for (auto& v : x) v = unif(rng);
      const double lam = 0.8 + 0.4 * trial / 8.0;
      const double h = 1e-6;
      BubbleParams bp{lam + h, x0}, bm{lam - h, x0};
      const double fd = (bubble(bp, x, n) - bubble(bm, x, n)) / (2.0 * h);
      BubbleParams bc{lam, x0};
      CHECK(bubble_dlambda(bc, x, n) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("bubble_dx analytic derivative") {
  BubbleParams b{1.3, {0.1, -0.2, 0.05}};
  CHECK(bubble_dx(b, b.center, 0, 3) == 0.0);

  // antisymmetry under reflection of the k-th offset
  Point xp = {0.4, -0.2, 0.05}, xm = {-0.2, -0.2, 0.05};
  CHECK(bubble_dx(b, xp, 0, 3) == doctest::Approx(-bubble_dx(b, xm, 0, 3)).epsilon(1e-13));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int n : {3, 5}) {
    BubbleParams bp{0.9, Point(static_cast<std::size_t>(n), 0.1)};
    for (int trial = 0; trial < 6; ++trial) {
      Point x(static_cast<std::size_t>(n));
      for (auto& v : x) v = unif(rng);
      const int k = trial % n;
      const double h = 1e-6;
      Point xh = x, xl = x;
      xh[static_cast<std::size_t>(k)] += h;
      xl[static_cast<std::size_t>(k)] -= h;
      const double fd = (bubble(bp, xh, n) - bubble(bp, xl, n)) / (2.0 * h);
      CHECK(bubble_dx(bp, x, k, n) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("projected bubble expansion on the unit ball") {
  const int n = 4;
  UnitBallOracle ball(n);
  const double c2 = (n - 2) * bubble_normalization(n) * sphere_surface_area(n);
  Point center(static_cast<std::size_t>(n), 0.0);
  center[0] = 0.2;

  // as lambda -> 0 at fixed x the profile takes the Green-function shape:
  // PU/U -> G(x,x0) / (gamma_n |x-x0|^{2-n})
  Point x(static_cast<std::size_t>(n), 0.0);
  x[1] = 0.5;
  double d2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double dk = x[static_cast<std::size_t>(k)] - center[static_cast<std::size_t>(k)];
    d2 += dk * dk;
  }
  const double green_shape =
      ball.G(x, center) / (ball.gamma_n() * std::pow(d2, 0.5 * (2.0 - n)));
  for (double lam : {1e-2, 1e-3, 1e-4}) {
    BubbleParams b{lam, center};
    const auto pu = projected_bubble_ball(b, x, ball, c2);
    const double ratio = pu.value / bubble(b, x, n);
    CHECK(std::abs(ratio - green_shape) < 10.0 * lam * lam + 1e-10);
  }

  // leading boundary trace cancels: PU = O(lam^{(n+2)/2}) against U = O(lam^{(n-2)/2})
  Point bdry(static_cast<std::size_t>(n), 0.0);
  bdry[0] = 1.0;
  for (double lam : {1e-2, 1e-3}) {
    BubbleParams b{lam, center};
    const auto pu = projected_bubble_ball(b, bdry, ball, c2);
    CHECK(std::abs(pu.value) < 20.0 * std::pow(lam, 0.5 * (n + 2)));
  }

  // 0 <= PU <= U over a grid
  BubbleParams b{0.05, center};
  for (int i = 0; i <= 20; ++i) {
    Point xi(static_cast<std::size_t>(n), 0.0);
    xi[0] = -0.95 + 0.09 * i;
    const auto pu = projected_bubble_ball(b, xi, ball, c2);
    CHECK(pu.value >= 0.0);
    CHECK(pu.value <= bubble(b, xi, n) + 1e-15);
  }

  Point outside(static_cast<std::size_t>(n), 0.0);
  outside[0] = 1.5;
  BubbleParams bad{0.1, outside};
  CHECK_THROWS_AS(projected_bubble_ball(bad, x, ball, c2), std::invalid_argument);
}

TEST_CASE("decay_check ratios") {
  std::vector<double> radii, u1, u2;
  for (int i = 0; i <= 200; ++i) {
    const double r = 0.05 * i;
    radii.push_back(r);
    u1.push_back(bubble_radial(r, 4));
    u2.push_back(2.0 * bubble_radial(r, 4));
  }
  CHECK(decay_check(radii, u1, 4).c_estimate == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(decay_check(radii, u2, 4).c_estimate == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(decay_check(radii, u1, 4).satisfied);
}

TEST_CASE("bubble energy identity: gradient energy equals the p+1 mass") {
  for (int n : {3, 4, 5, 6}) {
    const double p = static_cast<double>(n + 2) / (n - 2);
    const double grad = radial_integral(
        [&](double r) {
          const double d = bubble_radial_dr(r, n);
          return d * d;
        },
        n, 300);
    const double mass =
        radial_integral([&](double r) { return std::pow(bubble_radial(r, n), p + 1.0); }, n, 300);
    CHECK(std::abs(grad - mass) / mass < 1e-8);
  }
}

TEST_CASE("linearization kernel: translation and dilation modes annihilated") {
  // Radial finite-volume residual of -v'' - (n-1)v'/r + l(l+n-2)v/r^2 - p U^{p-1} v
  // applied to the analytic kernel fields, on [0, R]; the sup residual must
  // shrink by ~4x per mesh doubling.
  const int n = 4;
  const double p = 3.0, R = 40.0;
  auto residual_sup = [&](int N, int l, auto&& mode) {
    std::vector<double> r(static_cast<std::size_t>(N) + 1);
    for (int i = 0; i <= N; ++i) r[static_cast<std::size_t>(i)] = R * i / N;
    double sup = 0.0, scale = 0.0;
    for (int i = 1; i < N; ++i) {
      if (r[static_cast<std::size_t>(i)] < 0.05 * R) continue;  // axis cells carry vanishing measure
      const double rm = 0.5 * (r[static_cast<std::size_t>(i - 1)] + r[static_cast<std::size_t>(i)]);
      const double rp = 0.5 * (r[static_cast<std::size_t>(i)] + r[static_cast<std::size_t>(i + 1)]);
      const double h = r[1] - r[0];
      const double flux = std::pow(rp, n - 1) * (mode(r[static_cast<std::size_t>(i + 1)]) -
                                                 mode(r[static_cast<std::size_t>(i)])) / h -
                          std::pow(rm, n - 1) * (mode(r[static_cast<std::size_t>(i)]) -
                                                 mode(r[static_cast<std::size_t>(i - 1)])) / h;
      const double vol = (std::pow(rp, n) - std::pow(rm, n)) / n;
      const double ang = (l == 0) ? 0.0
                                  : l * (l + n - 2) *
                                        (std::pow(rp, n - 2) - std::pow(rm, n - 2)) / (n - 2);
      const double ri = r[static_cast<std::size_t>(i)];
      const double pot = p * std::pow(bubble_radial(ri, n), p - 1.0);
      const double res = -flux + ang * mode(ri) - vol * pot * mode(ri);
      sup = std::max(sup, std::abs(res) / vol);
      scale = std::max(scale, std::abs(pot * mode(ri)));
    }
    return sup / scale;
  };
  auto translation = [&](double r) { return bubble_radial_dr(r, n); };    // l = 1 sector
  auto dilation = [&](double r) { return bubble_dlambda_radial(r, n); };  // l = 0 sector
  const double t1 = residual_sup(2000, 1, translation);
  const double t2 = residual_sup(4000, 1, translation);
  const double d1 = residual_sup(2000, 0, dilation);
  const double d2 = residual_sup(4000, 0, dilation);
  CHECK(t2 < 0.35 * t1);
  CHECK(d2 < 0.35 * d1);
  CHECK(t2 < 1e-4);
  CHECK(d2 < 1e-4);
}

TEST_CASE("problem params invariants") {
  const ProblemParams pp = ProblemParams::make(4, 0.0);
  CHECK(pp.sigma_eps == 0.5 * (pp.n - 2));
  CHECK(pp.p == doctest::Approx(3.0));
  CHECK(pp.alpha0 == doctest::Approx(0.5));
  CHECK_THROWS_AS(ProblemParams::make(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ProblemParams::make(3, 4.1), std::invalid_argument);
}
