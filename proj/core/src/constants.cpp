#include "lefspec/constants.hpp"

#include <cmath>
#include <string>

#include "lefspec/bubbles.hpp"
#include "lefspec/numerics.hpp"

namespace lefspec {

namespace {

double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// int_0^inf r^{a-1} (1+r^2)^{-b} dr = (1/2) B(a/2, b - a/2)
double radial_power_integral(double a, double b) { return 0.5 * beta_fn(0.5 * a, b - 0.5 * a); }

void require_close(double closed, double quad, double rel_tol, const std::string& what) {
  const double scale = std::max(std::abs(closed), std::abs(quad));
  if (std::abs(closed - quad) > rel_tol * scale)
    throw evaluation_error("build_constants: closed form and quadrature disagree for " + what +
                           " (" + std::to_string(closed) + " vs " + std::to_string(quad) + ")");
}

}  // namespace

ConstantsTable build_constants(int n) {
  if (n < 3) throw std::invalid_argument("build_constants: dimension must be >= 3");
  ConstantsTable t;
  t.n = n;
  t.beta_n = bubble_normalization(n);
  t.sphere_area = sphere_surface_area(n);
  t.gamma_n = 1.0 / ((n - 2) * t.sphere_area);
  const double p = static_cast<double>(n + 2) / (n - 2);
  const double bp = std::pow(t.beta_n, p);
  const double bp1 = std::pow(t.beta_n, p + 1.0);

  auto U = [n](double r) { return bubble_radial(r, n); };
  auto dUl = [n](double r) { return bubble_dlambda_radial(r, n); };
  auto dUr = [n](double r) { return bubble_radial_dr(r, n); };

  // C2 = int U^p; cross-checked by the flux identity (n-2) beta_n |S^{n-1}|.
  const double C2_closed = bp * t.sphere_area * radial_power_integral(n, 0.5 * (n + 2));
  const double C2_quad = radial_integral([&](double r) { return std::pow(U(r), p); }, n);
  require_close(C2_closed, C2_quad, 1e-8, "C2");
  require_close(C2_closed, (n - 2) * t.beta_n * t.sphere_area, 1e-12, "C2 flux identity");
  t.C2 = C2_closed;

  const double C1_closed =
      bp * (static_cast<double>(n + 2) / n) * t.sphere_area * radial_power_integral(n + 2, 0.5 * (n + 4));
  const double C1_quad = bp * (static_cast<double>(n + 2) / n) *
                         radial_integral([&](double r) { return r * r * std::pow(1.0 + r * r, -0.5 * (n + 4)); }, n);
  require_close(C1_closed, C1_quad, 1e-8, "C1");
  t.C1 = C1_closed;

  const double Up1_closed = bp1 * t.sphere_area * radial_power_integral(n, static_cast<double>(n));
  const double Up1_quad = radial_integral([&](double r) { return std::pow(U(r), p + 1.0); }, n);
  require_close(Up1_closed, Up1_quad, 1e-8, "int U^{p+1}");

  t.c1_energy = t.C2 * t.C2;
  t.c2_energy = (n - 2) * (n - 2) / (4.0 * n) * Up1_closed;
  t.C0 = t.c2_energy / (t.c1_energy * (n - 2));

  const double C3_closed = p * bp * 0.5 * (n - 2) * t.sphere_area *
                           (radial_power_integral(n + 2, 0.5 * (n + 4)) -
                            radial_power_integral(n, 0.5 * (n + 4)));
  const double C3_quad =
      p * radial_integral([&](double r) { return std::pow(U(r), p - 1.0) * dUl(r); }, n);
  require_close(C3_closed, C3_quad, 1e-8, "C3");
  t.C3 = C3_closed;

  const double C4_closed =
      bp1 * 0.25 * (n - 2) * (n - 2) * t.sphere_area *
      (radial_power_integral(n + 4, n + 2.0) - 2.0 * radial_power_integral(n + 2, n + 2.0) +
       radial_power_integral(n, n + 2.0));
  const double C4_quad =
      radial_integral([&](double r) { return std::pow(U(r), p - 1.0) * dUl(r) * dUl(r); }, n);
  require_close(C4_closed, C4_quad, 1e-8, "C4");
  t.C4 = C4_closed;

  const double C5_closed = bp1 * (n - 2) * (n - 2) / static_cast<double>(n) * t.sphere_area *
                           radial_power_integral(n + 2, n + 2.0);
  const double C5_quad =
      radial_integral([&](double r) { return std::pow(U(r), p - 1.0) * dUr(r) * dUr(r); }, n) / n;
  require_close(C5_closed, C5_quad, 1e-8, "C5");
  t.C5 = C5_closed;

  t.c0_spec = t.C1 * t.C2 / (p * t.C5);
  t.c1_spec = (n - 2) * (n - 2) * t.C2 * t.C3 / (2.0 * (n + 2) * t.C4);
  t.b1_base = static_cast<double>((n - 2) * (n - 2)) / ((n + 2) * (n + 2));
  return t;
}

double b1(const ConstantsTable& table, double rho1) {
  const int n = table.n;
  return table.b1_base +
         std::pow(static_cast<double>(n - 2), 3.0) * table.c1_energy /
             (4.0 * n * (n + 2) * table.c2_energy) * rho1;
}

}  // namespace lefspec
