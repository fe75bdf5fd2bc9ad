#pragma once

#include <optional>
#include <vector>

#include "lefspec/bubbles.hpp"
#include "lefspec/constants.hpp"
#include "lefspec/green.hpp"
#include "lefspec/numerics.hpp"
#include "lefspec/reduction.hpp"

namespace lefspec {

/// Radial grid on [0,1] from a smooth exponential stretching: near-uniform
/// cells of size coreWidth/coreCount at the axis, geometric growth outward
/// (cell ratio <= 1.15). Refinement by an integer factor keeps the same map,
/// so eigenvalues admit clean h^2 Richardson extrapolation across levels.
struct RadialMesh {
  std::vector<double> nodes;  // 0 = r_0 < ... < r_N = 1
  double coreWidth = 0.0;
  int coreCount = 0;
  int outerCount = 0;
  double kappa = 0.0;  // stretching exponent; 0 means uniform

  static RadialMesh make(double coreWidth, int coreCount, int outerCount);
  RadialMesh refined(int factor) const;
  std::size_t cell_count() const { return nodes.size() - 1; }
};

/// Converged positive solution of the radial problem
///   -(r^{n-1} u')' = r^{n-1} u^{p-eps},  u'(0) = 0,  u(1) = 0.
struct RadialSolution {
  ProblemParams params;
  RadialMesh mesh;
  std::vector<double> u;        // nodal values, u.back() == 0
  double lambda_hat = 0.0;      // eps-free concentration rate estimate
  double amplitude_hat = 0.0;   // profile amplitude relative to the pure bubble
  double newtonResidual = 0.0;  // scaled sup-norm of the discrete residual
};

/// Solve by damped Newton on the conservative 3-point discretization.
/// The default guess is the projected bubble at rate (C0/gamma_n)^{1/(n-2)} eps^{alpha0}.
/// Throws iteration_error on divergence (continue from a larger eps instead)
/// and evaluation_error if the iteration leaves the positive cone.
RadialSolution solve_radial(const ProblemParams& params, const RadialMesh& mesh,
                            const std::vector<double>* guess = nullptr);

/// Eigenvalues/eigenfunctions of the linearization restricted to the
/// spherical-harmonic sector l (angular potential l(l+n-2)/r^2).
struct SectorSpectrum {
  int sector_l = 0;
  int multiplicity = 1;  // dimension of the degree-l harmonic space
  std::vector<double> eigenvalues;                // ascending, size = count
  std::vector<std::vector<double>> eigenvectors;  // full nodal arrays, B-normalized
};

int harmonic_multiplicity(int n, int l);

SectorSpectrum sector_eigen(const RadialSolution& sol, int l, int count);

struct BandedEigenvalue {
  double mu = 0.0;
  int sector_l = 0;
  Band band = Band::first_m;
  int multiplicity = 1;
};

/// Global nondecreasing list with band tags: the l=0 ground, n copies of the
/// l=1 ground, then the second l=0 mode. Throws evaluation_error when the
/// l=2 ground fails to sit above the second l=0 mode (ordering anomaly).
std::vector<BandedEigenvalue> assemble_bands(const RadialSolution& sol, const SectorSpectrum& s0,
                                             const SectorSpectrum& s1, const SectorSpectrum& s2);

struct SweepOptions {
  int coreCount = 400;
  int outerCount = 400;
  double coreWidthFactor = 8.0;  // core width = factor * lambda0 * eps^{alpha0}
  int richardson_levels = 3;     // mesh tower x1, x2, x4
};

struct SweepPoint {
  double eps = 0.0;
  double mu_first = 0.0;   // l=0 ground, Richardson-extrapolated
  double mu_middle = 0.0;  // l=1 ground
  double mu_last = 0.0;    // second l=0 mode
  double mu_l2 = 0.0;      // l=2 ground (ordering check)
  double lambda_hat = 0.0;
  double amplitude_hat = 0.0;
  double s_middle = 0.0;  // (1 - mu_middle) / eps^{n/(n-2)}
  int count_below_one = 0;
  double decay_c = 0.0;
};

struct SweepReport {
  int n = 0;
  std::vector<SweepPoint> points;  // eps strictly decreasing

  // first band: affine fit of mu_1 against eps
  AffineFit first_fit;
  double first_intercept_target = 0.0;  // (n-2)/(n+2)
  double first_slope_target = 0.0;      // b1 at rho1 = 0

  // middle band: extrapolation of s(eps) to eps -> 0
  double s_extrapolated = 0.0;
  double s_uncertainty = 0.0;  // spread of the last three sweep values
  double s_target = 0.0;       // c0 rho2 at the reduced-energy critical rate

  // last band: affine fit of mu_{n+2} against eps
  AffineFit last_fit;
  double last_slope_target = 0.0;  // c1_spec * 2 C0

  // diagnostic: same laws evaluated at the measured rate lambda_hat of the
  // smallest eps (the finite-eps effective coefficients)
  double s_effective = 0.0;
  double last_slope_effective = 0.0;
};

/// Descending-eps sweep with continuation; each eps is solved on a mesh tower
/// and eigenvalues are Richardson-extrapolated twice. Points whose solve fails
/// are dropped (partial report).
SweepReport sweep(int n, const std::vector<double>& epsilons, const ConstantsTable& table,
                  const SweepOptions& options = {});

struct ProfileReport {
  double dist_first = 0.0;   // sup distance to U_{1,0}
  double dist_middle = 0.0;  // to the radial factor of dU/dx
  double dist_last = 0.0;    // to dU/dlambda
  int last_sign_changes = 0; // interior sign changes of the last-band profile
  double window = 10.0;      // comparison window in rescaled units
};

/// Rescale the three band profiles by lambda_hat eps^{alpha0}, normalize, and
/// measure sup-norm distances to the bubble-derivative references on |y| <= 10.
ProfileReport eigenfunction_profiles(const RadialSolution& sol, const SectorSpectrum& s0,
                                     const SectorSpectrum& s1);

struct OuterLimitReport {
  double u_ratio = 0.0;      // eps^{-1/2} u(1/2) over C2 lam^{(n-2)/2} G(x,0)
  double middle_ratio = 0.0; // band-2 eigenfunction against the dG/dy outer law
  double last_ratio = 0.0;   // band-3 eigenfunction against the C3 G outer law
  bool middle_field_odd = true;
};

/// Consistency ratios (-> 1 as eps -> 0) of the solution and eigenfunction
/// outer limits at |x| = 1/2, with matching constants fitted from the inner
/// profiles.
OuterLimitReport outer_limits_check(const RadialSolution& sol, const SectorSpectrum& s0,
                                    const SectorSpectrum& s1, const GreenOracle& oracle,
                                    const ConstantsTable& table);

}  // namespace lefspec
