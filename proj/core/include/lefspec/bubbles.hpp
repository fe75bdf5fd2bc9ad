#pragma once

#include <vector>

#include "lefspec/numerics.hpp"

namespace lefspec {

using Point = std::vector<double>;

/// Dimension-dependent problem data for the slightly subcritical exponent p - epsilon.
struct ProblemParams {
  int n = 3;
  double epsilon = 0.0;
  double p = 5.0;         // (n+2)/(n-2)
  double alpha0 = 1.0;    // 1/(n-2), concentration-scale exponent
  double sigma_eps = 0.5; // 2/(p-1-epsilon), rescaling exponent

  static ProblemParams make(int n, double epsilon);
};

/// Concentration rate and center of one bubble.
struct BubbleParams {
  double lambda = 1.0;
  Point center;
};

/// Normalization constant beta_n = (n(n-2))^{(n-2)/4} of the standard bubble.
double bubble_normalization(int n);

/// U_{lambda,x0}(x) = beta_n (lambda / (lambda^2 + |x-x0|^2))^{(n-2)/2}.
double bubble(const BubbleParams& b, const Point& x, int n);

/// Radial profile U_{1,0}(r) and helpers used by the 1-d laboratory.
double bubble_radial(double r, int n);
double bubble_radial_dr(double r, int n);
/// d/dlambda U_{lambda,0}(r) at lambda = 1; proportional to (r^2 - 1).
double bubble_dlambda_radial(double r, int n);

/// Analytic lambda-derivative of the bubble at the given parameters.
double bubble_dlambda(const BubbleParams& b, const Point& x, int n);

/// Analytic spatial derivative d/dx_k; odd in (x - x0)_k.
double bubble_dx(const BubbleParams& b, const Point& x, int k, int n);

class GreenOracle;  // green.hpp

struct ProjectedBubbleValue {
  double value = 0.0;
  bool clamped = false;  // true when the expansion dipped below zero
};

/// First-order projected bubble on the oracle's domain:
///   PU = U - C2 lambda^{(n-2)/2} H(x, x0), clamped below at zero.
ProjectedBubbleValue projected_bubble_ball(const BubbleParams& b, const Point& x,
                                           const GreenOracle& oracle, double c2);

struct DecayCheck {
  double c_estimate = 0.0;  // sup of u_rescaled / U_{1,0} over the grid
  bool satisfied = false;
};

/// Uniform-bound diagnostic: sup over the grid of u(r_i)/U_{1,0}(r_i) against a cap.
DecayCheck decay_check(const std::vector<double>& radii, const std::vector<double>& u_rescaled,
                       int n, double cap = 10.0);

}  // namespace lefspec
