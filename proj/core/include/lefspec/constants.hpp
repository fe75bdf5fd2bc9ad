#pragma once

namespace lefspec {

/// Closed-form integral constants of the reduced-energy and eigenvalue laws.
/// Every integral is evaluated both by a Beta-function identity and by radial
/// quadrature at construction; the two must agree to 1e-8 relative.
///
/// The literature reuses the symbol c1 for two different constants; they are
/// kept apart here as c1_energy (reduced energy) and c1_spec (last band law).
struct ConstantsTable {
  int n = 0;
  double beta_n = 0.0;       // bubble normalization (n(n-2))^{(n-2)/4}
  double gamma_n = 0.0;      // 1/((n-2)|S^{n-1}|)
  double sphere_area = 0.0;  // |S^{n-1}|
  double c1_energy = 0.0;    // (int U^p)^2
  double c2_energy = 0.0;    // (n-2)^2/(4n) int U^{p+1}
  double C0 = 0.0;           // c2_energy / (c1_energy (n-2))
  double C1 = 0.0;           // beta^p (n+2)/n int |x|^2 (1+|x|^2)^{-(n+4)/2}
  double C2 = 0.0;           // int U^p
  double C3 = 0.0;           // p int U^{p-1} dU/dlambda
  double C4 = 0.0;           // int U^{p-1} (dU/dlambda)^2
  double C5 = 0.0;           // int U^{p-1} (dU/dx1)^2
  double c0_spec = 0.0;      // C1 C2 / (p C5), middle-band coefficient
  double c1_spec = 0.0;      // (n-2)^2 C2 C3 / (2(n+2) C4), last-band coefficient
  double b1_base = 0.0;      // ((n-2)/(n+2))^2
};

/// Build the table for dimension n >= 3; throws evaluation_error when the
/// quadrature and closed-form routes disagree beyond 1e-8 relative.
ConstantsTable build_constants(int n);

/// First-band slope b1 = b1_base + (n-2)^3 c1 / (4n(n+2) c2) * rho1.
double b1(const ConstantsTable& table, double rho1);

}  // namespace lefspec
