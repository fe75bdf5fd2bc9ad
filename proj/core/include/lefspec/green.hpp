#pragma once

#include <array>
#include <memory>
#include <vector>

#include "lefspec/bubbles.hpp"
#include "lefspec/numerics.hpp"

namespace lefspec {

/// Dirichlet Green function G of -Laplace on a domain, its regular part
///   H(x,y) = gamma_n |x-y|^{2-n} - G(x,y),
/// the Robin function tau(x) = H(x,x), and their derivatives.
class GreenOracle {
 public:
  virtual ~GreenOracle() = default;

  virtual int dimension() const = 0;
  virtual bool contains(const Point& x) const = 0;
  /// Distance from x to the boundary (used by near-boundary guards).
  virtual double boundary_distance(const Point& x) const = 0;

  virtual double G(const Point& x, const Point& y) const = 0;
  virtual double H(const Point& x, const Point& y) const = 0;
  virtual double tau(const Point& x) const = 0;

  virtual Point grad_x_G(const Point& x, const Point& y) const = 0;
  virtual Point grad_y_G(const Point& x, const Point& y) const = 0;
  /// hess_xy[k][q] = d^2 G / dx_k dy_q.
  virtual std::vector<std::vector<double>> hess_xy_G(const Point& x, const Point& y) const = 0;
  /// hess_xx[k][q] = d^2 G / dx_k dx_q (y fixed).
  virtual std::vector<std::vector<double>> hess_xx_G(const Point& x, const Point& y) const = 0;

  virtual Point grad_tau(const Point& x) const = 0;
  virtual std::vector<std::vector<double>> hess_tau(const Point& x) const = 0;

  double gamma_n() const;
};

/// Method-of-images oracle on the unit ball:
///   H(x,y) = gamma_n (|x|^2 |y|^2 - 2 x.y + 1)^{-(n-2)/2},
///   tau(x) = gamma_n (1 - |x|^2)^{2-n}.
class UnitBallOracle final : public GreenOracle {
 public:
  explicit UnitBallOracle(int n);

  int dimension() const override { return n_; }
  bool contains(const Point& x) const override;
  double boundary_distance(const Point& x) const override;

  double G(const Point& x, const Point& y) const override;
  double H(const Point& x, const Point& y) const override;
  double tau(const Point& x) const override;

  Point grad_x_G(const Point& x, const Point& y) const override;
  Point grad_y_G(const Point& x, const Point& y) const override;
  std::vector<std::vector<double>> hess_xy_G(const Point& x, const Point& y) const override;
  std::vector<std::vector<double>> hess_xx_G(const Point& x, const Point& y) const override;

  Point grad_tau(const Point& x) const override;
  std::vector<std::vector<double>> hess_tau(const Point& x) const override;

 private:
  int n_;
  double gamma_;
};

/// Ball of radius R centered at c, by scaling the unit-ball oracle:
///   G_R(x,y) = R^{2-n} G_1((x-c)/R, (y-c)/R).
class ScaledBallOracle final : public GreenOracle {
 public:
  ScaledBallOracle(Point center, double radius);

  int dimension() const override { return inner_.dimension(); }
  bool contains(const Point& x) const override;
  double boundary_distance(const Point& x) const override;

  double G(const Point& x, const Point& y) const override;
  double H(const Point& x, const Point& y) const override;
  double tau(const Point& x) const override;

  Point grad_x_G(const Point& x, const Point& y) const override;
  Point grad_y_G(const Point& x, const Point& y) const override;
  std::vector<std::vector<double>> hess_xy_G(const Point& x, const Point& y) const override;
  std::vector<std::vector<double>> hess_xx_G(const Point& x, const Point& y) const override;

  Point grad_tau(const Point& x) const override;
  std::vector<std::vector<double>> hess_tau(const Point& x) const override;

  const Point& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Point to_unit(const Point& x) const;

  Point center_;
  double radius_;
  UnitBallOracle inner_;
};

// ---------------------------------------------------------------------------
// Sphere quadrature
// ---------------------------------------------------------------------------

struct SpherePoint {
  Point x;
  double weight = 0.0;
};

/// Product rule on the sphere |x - center| = r for n in {3,4,5}: Gauss rules with
/// sin^k polar weights, trapezoid in azimuth. Weights sum to |S^{n-1}| r^{n-1}.
std::vector<SpherePoint> sphere_quadrature(int n, const Point& center, double r, int order);

// ---------------------------------------------------------------------------
// Identity checks
// ---------------------------------------------------------------------------

struct RobinIdentityReport {
  double residual_flux_tau = 0.0;      // boundary flux identity against (n-2) tau
  double residual_flux_grad_tau = 0.0; // against the gradient of tau (worst component)
  double residual_flux_hess_tau = 0.0; // against the Hessian of tau (worst entry)
  double max_residual() const;
};

/// Boundary-integral identities relating G-flux moments to tau and its
/// derivatives, evaluated by quadrature on the domain boundary and compared
/// against the oracle closed forms. x0 must be away from the boundary.
RobinIdentityReport robin_identities_check(const GreenOracle& oracle, const Point& x0,
                                           int order = 64);

/// Surface integral pairing the scaling field of G(.,x_j) against G(.,x_l) on
/// the sphere |x - x_i| = r; independent of r. Checked at r and r/2.
double I_integral(const GreenOracle& oracle, int i, int j, int l,
                  const std::vector<Point>& points, double r, int order = 48);

struct JKValue {
  double J = 0.0;
  double K = 0.0;
};

/// Surface integrals pairing dG/dx_k(.,x_j) against G(.,x_l) (J) and against
/// dG/dy_q(.,x_l) (K) on the sphere |x - x_i| = r; independent of r.
JKValue JK_integrals(const GreenOracle& oracle, int i, int j, int l, int k, int q,
                     const std::vector<Point>& points, double r, int order = 48);

/// Scalar field with gradient and Laplacian, for the bilinear Pohozaev check.
struct SmoothField {
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;
  std::function<double(const Point&)> laplacian;
};

/// Residual |LHS - RHS| / scale of the bilinear Pohozaev identity on B(x0, r):
///   int [ (x-x0).grad f Lap g + (x-x0).grad g Lap f ]
///     = r int_dB (2 df/dnu dg/dnu - grad f . grad g) + (n-2) int grad f . grad g.
double bilinear_pohozaev_check(const SmoothField& f, const SmoothField& g, const Point& x0,
                               double r, int n, int volume_order = 24, int surface_order = 24);

/// Worst relative deviation of every analytic oracle derivative against
/// Richardson-extrapolated central differences, over the given sample pairs.
double grad_checks(const GreenOracle& oracle, const std::vector<std::pair<Point, Point>>& samples,
                   double h = 1e-4);

}  // namespace lefspec
