#include "lefspec/bubbles.hpp"

#include <cmath>
#include <stdexcept>

#include "lefspec/green.hpp"

namespace lefspec {

namespace {

double dist2(const Point& x, const Point& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

}  // namespace

ProblemParams ProblemParams::make(int n, double epsilon) {
  if (n < 3) throw std::invalid_argument("ProblemParams: dimension must be >= 3");
  ProblemParams pp;
  pp.n = n;
  pp.epsilon = epsilon;
  pp.p = static_cast<double>(n + 2) / (n - 2);
  pp.alpha0 = 1.0 / (n - 2);
  if (!(pp.p - 1.0 - epsilon > 0.0))
    throw std::invalid_argument("ProblemParams: need p - 1 - epsilon > 0");
  pp.sigma_eps = 2.0 / (pp.p - 1.0 - epsilon);
  return pp;
}

double bubble_normalization(int n) {
  return std::pow(static_cast<double>(n) * (n - 2), 0.25 * (n - 2));
}

double bubble(const BubbleParams& b, const Point& x, int n) {
  const double r2 = dist2(x, b.center);
  return bubble_normalization(n) *
         std::pow(b.lambda / (b.lambda * b.lambda + r2), 0.5 * (n - 2));
}

double bubble_radial(double r, int n) {
  return bubble_normalization(n) * std::pow(1.0 / (1.0 + r * r), 0.5 * (n - 2));
}

double bubble_radial_dr(double r, int n) {
  return -(n - 2) * bubble_normalization(n) * r * std::pow(1.0 + r * r, -0.5 * n);
}

double bubble_dlambda_radial(double r, int n) {
  return bubble_normalization(n) * 0.5 * (n - 2) * (r * r - 1.0) *
         std::pow(1.0 + r * r, -0.5 * n);
}

double bubble_dlambda(const BubbleParams& b, const Point& x, int n) {
  const double r2 = dist2(x, b.center);
  const double lam = b.lambda;
  const double denom = lam * lam + r2;
  // d/dlam [lam/(lam^2+r^2)]^{(n-2)/2} = (n-2)/2 * (...)^{(n-4)/2} * (r^2-lam^2)/(...)^2
  return bubble_normalization(n) * 0.5 * (n - 2) * std::pow(lam / denom, 0.5 * (n - 4)) *
         (r2 - lam * lam) / (denom * denom);
}

double bubble_dx(const BubbleParams& b, const Point& x, int k, int n) {
  const double r2 = dist2(x, b.center);
  const double lam = b.lambda;
  const double denom = lam * lam + r2;
  const double dk = x[static_cast<std::size_t>(k)] - b.center[static_cast<std::size_t>(k)];
  return -(n - 2) * bubble_normalization(n) * std::pow(lam, 0.5 * (n - 2)) * dk *
         std::pow(denom, -0.5 * n);
}

ProjectedBubbleValue projected_bubble_ball(const BubbleParams& b, const Point& x,
                                           const GreenOracle& oracle, double c2) {
  if (!oracle.contains(b.center))
    throw std::invalid_argument("projected_bubble_ball: center outside the domain");
  const int n = oracle.dimension();
  const double u = bubble(b, x, n);
  const double correction = c2 * std::pow(b.lambda, 0.5 * (n - 2)) * oracle.H(x, b.center);
  ProjectedBubbleValue out;
  out.value = u - correction;
  if (out.value < 0.0) {
    out.value = 0.0;
    out.clamped = true;
  }
  return out;
}

DecayCheck decay_check(const std::vector<double>& radii, const std::vector<double>& u_rescaled,
                       int n, double cap) {
  if (radii.size() != u_rescaled.size())
    throw std::invalid_argument("decay_check: grid size mismatch");
  DecayCheck out;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double ratio = u_rescaled[i] / bubble_radial(radii[i], n);
    out.c_estimate = std::max(out.c_estimate, ratio);
  }
  out.satisfied = out.c_estimate <= cap;
  return out;
}

}  // namespace lefspec
