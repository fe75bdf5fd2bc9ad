#include "lefspec/green.hpp"

#include <cmath>
#include <stdexcept>

namespace lefspec {

namespace {

double dot(const Point& x, const Point& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(const Point& x) { return dot(x, x); }

double dist(const Point& x, const Point& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

double GreenOracle::gamma_n() const {
  const int n = dimension();
  return 1.0 / ((n - 2) * sphere_surface_area(n));
}

// ---------------------------------------------------------------------------
// UnitBallOracle
// ---------------------------------------------------------------------------

UnitBallOracle::UnitBallOracle(int n) : n_(n) {
  if (n < 3) throw std::invalid_argument("UnitBallOracle: dimension must be >= 3");
  gamma_ = 1.0 / ((n - 2) * sphere_surface_area(n));
}

bool UnitBallOracle::contains(const Point& x) const { return norm2(x) < 1.0; }

double UnitBallOracle::boundary_distance(const Point& x) const {
  return 1.0 - std::sqrt(norm2(x));
}

double UnitBallOracle::H(const Point& x, const Point& y) const {
  const double s = norm2(x) * norm2(y) - 2.0 * dot(x, y) + 1.0;
  return gamma_ * std::pow(s, -0.5 * (n_ - 2));
}

double UnitBallOracle::G(const Point& x, const Point& y) const {
  return gamma_ * std::pow(dist(x, y), 2.0 - n_) - H(x, y);
}

double UnitBallOracle::tau(const Point& x) const {
  return gamma_ * std::pow(1.0 - norm2(x), 2.0 - n_);
}

Point UnitBallOracle::grad_x_G(const Point& x, const Point& y) const {
  const double s = norm2(x) * norm2(y) - 2.0 * dot(x, y) + 1.0;
  const double d = dist(x, y);
  const double sing = gamma_ * (2.0 - n_) * std::pow(d, -static_cast<double>(n_));
  const double hfac = -gamma_ * 0.5 * (n_ - 2) * std::pow(s, -0.5 * n_);
  Point g(static_cast<std::size_t>(n_));
  const double y2 = norm2(y);
  for (int k = 0; k < n_; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    const double sx = 2.0 * x[ks] * y2 - 2.0 * y[ks];
    g[ks] = sing * (x[ks] - y[ks]) - hfac * sx;
  }
  return g;
}

Point UnitBallOracle::grad_y_G(const Point& x, const Point& y) const { return grad_x_G(y, x); }

std::vector<std::vector<double>> UnitBallOracle::hess_xy_G(const Point& x, const Point& y) const {
  const double s = norm2(x) * norm2(y) - 2.0 * dot(x, y) + 1.0;
  const double d = dist(x, y);
  const double dn = std::pow(d, -static_cast<double>(n_));
  const double dn2 = std::pow(d, -static_cast<double>(n_) - 2.0);
  const double x2 = norm2(x), y2 = norm2(y);
  const double sA = std::pow(s, -0.5 * n_);
  const double sB = std::pow(s, -0.5 * (n_ + 2));
  std::vector<std::vector<double>> hh(static_cast<std::size_t>(n_),
                                      std::vector<double>(static_cast<std::size_t>(n_)));
  for (int k = 0; k < n_; ++k) {
    for (int q = 0; q < n_; ++q) {
      const auto ks = static_cast<std::size_t>(k), qs = static_cast<std::size_t>(q);
      const double delta = (k == q) ? 1.0 : 0.0;
      // singular part gamma |x-y|^{2-n}
      const double sing =
          gamma_ * (2.0 - n_) * (-delta * dn + n_ * (x[ks] - y[ks]) * (x[qs] - y[qs]) * dn2);
      // regular part gamma s^{-(n-2)/2}
      const double sx = 2.0 * x[ks] * y2 - 2.0 * y[ks];
      const double sy = 2.0 * y[qs] * x2 - 2.0 * x[qs];
      const double sxy = 4.0 * x[ks] * y[qs] - 2.0 * delta;
      const double reg = -gamma_ * 0.5 * (n_ - 2) * (-0.5 * n_ * sB * sy * sx + sA * sxy);
      hh[ks][qs] = sing - reg;
    }
  }
  return hh;
}

std::vector<std::vector<double>> UnitBallOracle::hess_xx_G(const Point& x, const Point& y) const {
  const double s = norm2(x) * norm2(y) - 2.0 * dot(x, y) + 1.0;
  const double d = dist(x, y);
  const double dn = std::pow(d, -static_cast<double>(n_));
  const double dn2 = std::pow(d, -static_cast<double>(n_) - 2.0);
  const double y2 = norm2(y);
  const double sA = std::pow(s, -0.5 * n_);
  const double sB = std::pow(s, -0.5 * (n_ + 2));
  std::vector<std::vector<double>> hh(static_cast<std::size_t>(n_),
                                      std::vector<double>(static_cast<std::size_t>(n_)));
  for (int k = 0; k < n_; ++k) {
    for (int q = 0; q < n_; ++q) {
      const auto ks = static_cast<std::size_t>(k), qs = static_cast<std::size_t>(q);
      const double delta = (k == q) ? 1.0 : 0.0;
      const double sing =
          gamma_ * (2.0 - n_) * (delta * dn - n_ * (x[ks] - y[ks]) * (x[qs] - y[qs]) * dn2);
      const double sxk = 2.0 * x[ks] * y2 - 2.0 * y[ks];
      const double sxq = 2.0 * x[qs] * y2 - 2.0 * y[qs];
      const double sxx = 2.0 * delta * y2;
      const double reg = -gamma_ * 0.5 * (n_ - 2) * (-0.5 * n_ * sB * sxq * sxk + sA * sxx);
      hh[ks][qs] = sing - reg;
    }
  }
  return hh;
}

Point UnitBallOracle::grad_tau(const Point& x) const {
  const double f = std::pow(1.0 - norm2(x), 1.0 - n_);
  Point g(static_cast<std::size_t>(n_));
  for (int k = 0; k < n_; ++k)
    g[static_cast<std::size_t>(k)] = 2.0 * (n_ - 2) * gamma_ * x[static_cast<std::size_t>(k)] * f;
  return g;
}

std::vector<std::vector<double>> UnitBallOracle::hess_tau(const Point& x) const {
  const double one_m = 1.0 - norm2(x);
  const double f1 = std::pow(one_m, 1.0 - n_);
  const double f2 = std::pow(one_m, -static_cast<double>(n_));
  std::vector<std::vector<double>> hh(static_cast<std::size_t>(n_),
                                      std::vector<double>(static_cast<std::size_t>(n_)));
  for (int k = 0; k < n_; ++k)
    for (int q = 0; q < n_; ++q) {
      const auto ks = static_cast<std::size_t>(k), qs = static_cast<std::size_t>(q);
      const double delta = (k == q) ? 1.0 : 0.0;
      hh[ks][qs] = 2.0 * (n_ - 2) * gamma_ *
                   (delta * f1 + 2.0 * (n_ - 1) * x[ks] * x[qs] * f2);
    }
  return hh;
}

// ---------------------------------------------------------------------------
// ScaledBallOracle
// ---------------------------------------------------------------------------

ScaledBallOracle::ScaledBallOracle(Point center, double radius)
    : center_(std::move(center)), radius_(radius), inner_(static_cast<int>(center_.size())) {
  if (!(radius > 0.0)) throw std::invalid_argument("ScaledBallOracle: radius must be positive");
}

Point ScaledBallOracle::to_unit(const Point& x) const {
  Point u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) u[i] = (x[i] - center_[i]) / radius_;
  return u;
}

bool ScaledBallOracle::contains(const Point& x) const { return inner_.contains(to_unit(x)); }

double ScaledBallOracle::boundary_distance(const Point& x) const {
  return radius_ * inner_.boundary_distance(to_unit(x));
}

double ScaledBallOracle::G(const Point& x, const Point& y) const {
  const int n = dimension();
  return std::pow(radius_, 2.0 - n) * inner_.G(to_unit(x), to_unit(y));
}

double ScaledBallOracle::H(const Point& x, const Point& y) const {
  const int n = dimension();
  return std::pow(radius_, 2.0 - n) * inner_.H(to_unit(x), to_unit(y));
}

double ScaledBallOracle::tau(const Point& x) const {
  const int n = dimension();
  return std::pow(radius_, 2.0 - n) * inner_.tau(to_unit(x));
}

Point ScaledBallOracle::grad_x_G(const Point& x, const Point& y) const {
  const int n = dimension();
  Point g = inner_.grad_x_G(to_unit(x), to_unit(y));
  const double f = std::pow(radius_, 1.0 - n);
  for (auto& gi : g) gi *= f;
  return g;
}

Point ScaledBallOracle::grad_y_G(const Point& x, const Point& y) const {
  const int n = dimension();
  Point g = inner_.grad_y_G(to_unit(x), to_unit(y));
  const double f = std::pow(radius_, 1.0 - n);
  for (auto& gi : g) gi *= f;
  return g;
}

std::vector<std::vector<double>> ScaledBallOracle::hess_xy_G(const Point& x,
                                                             const Point& y) const {
  const int n = dimension();
  auto hh = inner_.hess_xy_G(to_unit(x), to_unit(y));
  const double f = std::pow(radius_, -static_cast<double>(n));
  for (auto& row : hh)
    for (auto& v : row) v *= f;
  return hh;
}

std::vector<std::vector<double>> ScaledBallOracle::hess_xx_G(const Point& x,
                                                             const Point& y) const {
  const int n = dimension();
  auto hh = inner_.hess_xx_G(to_unit(x), to_unit(y));
  const double f = std::pow(radius_, -static_cast<double>(n));
  for (auto& row : hh)
    for (auto& v : row) v *= f;
  return hh;
}

Point ScaledBallOracle::grad_tau(const Point& x) const {
  const int n = dimension();
  Point g = inner_.grad_tau(to_unit(x));
  const double f = std::pow(radius_, 1.0 - n);
  for (auto& gi : g) gi *= f;
  return g;
}

std::vector<std::vector<double>> ScaledBallOracle::hess_tau(const Point& x) const {
  const int n = dimension();
  auto hh = inner_.hess_tau(to_unit(x));
  const double f = std::pow(radius_, -static_cast<double>(n));
  for (auto& row : hh)
    for (auto& v : row) v *= f;
  return hh;
}

// ---------------------------------------------------------------------------
// Sphere quadrature
// ---------------------------------------------------------------------------

namespace {

// Unit-sphere nodes for S^{n-1}, n >= 2, by polar recursion. Lower levels use
// half the order (floored): the leading polar angle carries the sharpest
// variation of the integrands, so the cost stays near order^2 per extra
// dimension instead of order^3.
std::vector<SpherePoint> unit_sphere_rule(int n, int order) {
  std::vector<SpherePoint> out;
  if (n == 2) {
    const int m = std::max(8, 2 * order);
    const double w = 2.0 * std::numbers::pi / m;
    out.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      const double phi = (2.0 * std::numbers::pi * i) / m;
      out.push_back({{std::cos(phi), std::sin(phi)}, w});
    }
    return out;
  }
  // polar angle: weight sin^{n-2}(theta) d theta = (1 - t^2)^{(n-3)/2} dt
  const double alpha = 0.5 * (n - 3);
  QuadratureRule polar =
      (std::abs(alpha) < 1e-14) ? gauss_legendre(order, -1.0, 1.0) : gauss_gegenbauer(order, alpha);
  std::vector<SpherePoint> sub = unit_sphere_rule(n - 1, std::max(8, order / 2));
  out.reserve(polar.nodes.size() * sub.size());
  for (std::size_t i = 0; i < polar.nodes.size(); ++i) {
    const double t = polar.nodes[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (const auto& sp : sub) {
      Point x(static_cast<std::size_t>(n));
      x[0] = t;
      for (int k = 1; k < n; ++k)
        x[static_cast<std::size_t>(k)] = st * sp.x[static_cast<std::size_t>(k - 1)];
      out.push_back({std::move(x), polar.weights[i] * sp.weight});
    }
  }
  return out;
}

}  // namespace

std::vector<SpherePoint> sphere_quadrature(int n, const Point& center, double r, int order) {
  if (n < 3 || n > 5) throw std::invalid_argument("sphere_quadrature: dimension must be 3, 4 or 5");
  if (order < 4) throw std::invalid_argument("sphere_quadrature: order must be >= 4");
  std::vector<SpherePoint> rule = unit_sphere_rule(n, order);
  const double scale = std::pow(r, n - 1);
  for (auto& sp : rule) {
    for (int k = 0; k < n; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      sp.x[ks] = center[ks] + r * sp.x[ks];
    }
    sp.weight *= scale;
  }
  return rule;
}

// ---------------------------------------------------------------------------
// Identity checks
// ---------------------------------------------------------------------------

double RobinIdentityReport::max_residual() const {
  return std::max({residual_flux_tau, residual_flux_grad_tau, residual_flux_hess_tau});
}

namespace {

// Boundary quadrature of a ball oracle: nodes, outward normals, weights.
struct BoundaryRule {
  std::vector<SpherePoint> nodes;
  Point center;
  double radius = 1.0;
};

BoundaryRule boundary_rule(const GreenOracle& oracle, int order) {
  const int n = oracle.dimension();
  if (const auto* sb = dynamic_cast<const ScaledBallOracle*>(&oracle)) {
    return {sphere_quadrature(n, sb->center(), sb->radius(), order), sb->center(), sb->radius()};
  }
  Point origin(static_cast<std::size_t>(n), 0.0);
  return {sphere_quadrature(n, origin, 1.0, order), origin, 1.0};
}

}  // namespace

RobinIdentityReport robin_identities_check(const GreenOracle& oracle, const Point& x0, int order) {
  const int n = oracle.dimension();
  BoundaryRule br = boundary_rule(oracle, order);
  if (oracle.boundary_distance(x0) < 0.05 * br.radius)
    throw std::invalid_argument("robin_identities_check: x0 too close to the boundary");

  // Align the leading polar axis of the product rule with x0: the integrands
  // peak toward x0 and are mild in the remaining angles.
  {
    Point u(static_cast<std::size_t>(n));
    double unorm = 0.0;
    for (int k = 0; k < n; ++k) {
      u[static_cast<std::size_t>(k)] = x0[static_cast<std::size_t>(k)] - br.center[static_cast<std::size_t>(k)];
      unorm += u[static_cast<std::size_t>(k)] * u[static_cast<std::size_t>(k)];
    }
    unorm = std::sqrt(unorm);
    if (unorm > 1e-12 * br.radius) {
      for (auto& ui : u) ui /= unorm;
      Point w = u;
      w[0] -= 1.0;  // e1 - u
      double wnorm = 0.0;
      for (double wi : w) wnorm += wi * wi;
      if (wnorm > 1e-24) {
        for (auto& node : br.nodes) {
          double dot_w = 0.0;
          for (int k = 0; k < n; ++k)
            dot_w += w[static_cast<std::size_t>(k)] *
                     (node.x[static_cast<std::size_t>(k)] - br.center[static_cast<std::size_t>(k)]);
          const double f = 2.0 * dot_w / wnorm;
          for (int k = 0; k < n; ++k)
            node.x[static_cast<std::size_t>(k)] -= f * w[static_cast<std::size_t>(k)];
        }
      }
    }
  }

  const double tau0 = oracle.tau(x0);
  const Point gtau = oracle.grad_tau(x0);
  const auto htau = oracle.hess_tau(x0);

  double lhs1 = 0.0;
  std::vector<double> lhs2(static_cast<std::size_t>(n), 0.0);
  std::vector<std::vector<double>> lhs3(static_cast<std::size_t>(n),
                                        std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (const auto& node : br.nodes) {
    Point nu(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      nu[ks] = (node.x[ks] - br.center[ks]) / br.radius;
    }
    const Point gx = oracle.grad_x_G(node.x, x0);
    double flux = 0.0, xnu = 0.0;
    for (int k = 0; k < n; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      flux += nu[ks] * gx[ks];
      xnu += (node.x[ks] - x0[ks]) * nu[ks];
    }
    lhs1 += node.weight * xnu * flux * flux;
    for (int k = 0; k < n; ++k)
      lhs2[static_cast<std::size_t>(k)] += node.weight * flux * flux * nu[static_cast<std::size_t>(k)];
    const auto hxy = oracle.hess_xy_G(node.x, x0);
    for (int l = 0; l < n; ++l) {
      double dflux_dyl = 0.0;
      for (int m = 0; m < n; ++m)
        dflux_dyl += nu[static_cast<std::size_t>(m)]
                     * hxy[static_cast<std::size_t>(m)][static_cast<std::size_t>(l)];
      for (int k = 0; k < n; ++k)
        lhs3[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] +=
            node.weight * gx[static_cast<std::size_t>(k)] * dflux_dyl;
    }
  }

  RobinIdentityReport rep;
  const double scale = (n - 2) * tau0;
  rep.residual_flux_tau = std::abs(lhs1 - scale) / scale;
  double gnorm = 0.0, hnorm = 0.0;
  for (int k = 0; k < n; ++k) gnorm = std::max(gnorm, std::abs(gtau[static_cast<std::size_t>(k)]));
  for (int k = 0; k < n; ++k)
    for (int q = 0; q < n; ++q)
      hnorm = std::max(hnorm, std::abs(htau[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)]));
  const double den2 = std::max(gnorm, scale);
  const double den3 = std::max(hnorm, scale);
  for (int k = 0; k < n; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    rep.residual_flux_grad_tau =
        std::max(rep.residual_flux_grad_tau, std::abs(lhs2[ks] - gtau[ks]) / den2);
    for (int l = 0; l < n; ++l) {
      const auto ls = static_cast<std::size_t>(l);
      rep.residual_flux_hess_tau = std::max(
          rep.residual_flux_hess_tau, std::abs(lhs3[ks][ls] - 0.5 * htau[ks][ls]) / den3);
    }
  }
  return rep;
}

namespace {

void check_sphere_clearance(const GreenOracle& oracle, int i, const std::vector<Point>& points,
                            double r) {
  const Point& xi = points[static_cast<std::size_t>(i)];
  if (oracle.boundary_distance(xi) <= r)
    throw std::invalid_argument("surface integral: sphere touches the domain boundary");
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (static_cast<int>(j) == i) continue;
    if (dist(xi, points[j]) <= r)
      throw std::invalid_argument("surface integral: sphere touches another concentration point");
  }
}

}  // namespace

namespace {

double I_integral_at(const GreenOracle& oracle, int i, int j, int l,
                     const std::vector<Point>& points, double r, int order) {
  const int n = oracle.dimension();
  const Point& xi = points[static_cast<std::size_t>(i)];
  const Point& xj = points[static_cast<std::size_t>(j)];
  const Point& xl = points[static_cast<std::size_t>(l)];
  const auto sphere = sphere_quadrature(n, xi, r, order);
  double sum = 0.0;
  for (const auto& node : sphere) {
    Point nu(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
      nu[static_cast<std::size_t>(k)] =
          (node.x[static_cast<std::size_t>(k)] - xi[static_cast<std::size_t>(k)]) / r;

    const double gl = oracle.G(node.x, xl);
    const Point grad_gl = oracle.grad_x_G(node.x, xl);
    const Point grad_gj = oracle.grad_x_G(node.x, xj);
    const auto hess_gj = oracle.hess_xx_G(node.x, xj);

    double f = 0.5 * (n - 2) * oracle.G(node.x, xj);
    for (int k = 0; k < n; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      f += (node.x[ks] - xi[ks]) * grad_gj[ks];
    }
    double dfdnu = 0.0, dgdnu = 0.0;
    for (int m = 0; m < n; ++m) {
      const auto ms = static_cast<std::size_t>(m);
      double dfm = (1.0 + 0.5 * (n - 2)) * grad_gj[ms];
      for (int k = 0; k < n; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        dfm += (node.x[ks] - xi[ks]) * hess_gj[ks][ms];
      }
      dfdnu += nu[ms] * dfm;
      dgdnu += nu[ms] * grad_gl[ms];
    }
    sum += node.weight * (dfdnu * gl - f * dgdnu);
  }
  return sum;
}

}  // namespace

double I_integral(const GreenOracle& oracle, int i, int j, int l,
                  const std::vector<Point>& points, double r, int order) {
  check_sphere_clearance(oracle, i, points, r);
  const double v1 = I_integral_at(oracle, i, j, l, points, r, order);
  const double v2 = I_integral_at(oracle, i, j, l, points, 0.5 * r, order);
  const double scale = std::max({std::abs(v1), std::abs(v2), oracle.gamma_n()});
  if (std::abs(v1 - v2) > 1e-6 * scale)
    throw evaluation_error("I_integral: value not independent of the sphere radius");
  return 0.5 * (v1 + v2);
}

namespace {

JKValue JK_at(const GreenOracle& oracle, int i, int j, int l, int k, int q,
              const std::vector<Point>& points, double r, int order) {
  const int n = oracle.dimension();
  const Point& xi = points[static_cast<std::size_t>(i)];
  const Point& xj = points[static_cast<std::size_t>(j)];
  const Point& xl = points[static_cast<std::size_t>(l)];
  const auto sphere = sphere_quadrature(n, xi, r, order);
  const auto ks = static_cast<std::size_t>(k), qs = static_cast<std::size_t>(q);
  JKValue out;
  for (const auto& node : sphere) {
    Point nu(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m)
      nu[static_cast<std::size_t>(m)] =
          (node.x[static_cast<std::size_t>(m)] - xi[static_cast<std::size_t>(m)]) / r;

    const Point grad_gj = oracle.grad_x_G(node.x, xj);
    const auto hess_gj = oracle.hess_xx_G(node.x, xj);
    const double gl = oracle.G(node.x, xl);
    const Point grad_gl = oracle.grad_x_G(node.x, xl);
    const Point grad_y_gl = oracle.grad_y_G(node.x, xl);
    const auto hess_xy_gl = oracle.hess_xy_G(node.x, xl);

    double dgj_k_dnu = 0.0, dgl_dnu = 0.0, dgl_yq_dnu = 0.0;
    for (int m = 0; m < n; ++m) {
      const auto ms = static_cast<std::size_t>(m);
      dgj_k_dnu += nu[ms] * hess_gj[ms][ks];
      dgl_dnu += nu[ms] * grad_gl[ms];
      dgl_yq_dnu += nu[ms] * hess_xy_gl[ms][qs];
    }
    out.J += node.weight * (dgj_k_dnu * gl - grad_gj[ks] * dgl_dnu);
    out.K += node.weight * (dgj_k_dnu * grad_y_gl[qs] - grad_gj[ks] * dgl_yq_dnu);
  }
  return out;
}

}  // namespace

JKValue JK_integrals(const GreenOracle& oracle, int i, int j, int l, int k, int q,
                     const std::vector<Point>& points, double r, int order) {
  check_sphere_clearance(oracle, i, points, r);
  const JKValue v1 = JK_at(oracle, i, j, l, k, q, points, r, order);
  const JKValue v2 = JK_at(oracle, i, j, l, k, q, points, 0.5 * r, order);
  const double gscale = oracle.gamma_n();
  const double sj = std::max({std::abs(v1.J), std::abs(v2.J), gscale});
  const double sk = std::max({std::abs(v1.K), std::abs(v2.K), gscale});
  if (std::abs(v1.J - v2.J) > 1e-6 * sj || std::abs(v1.K - v2.K) > 1e-6 * sk)
    throw evaluation_error("JK_integrals: value not independent of the sphere radius");
  return {0.5 * (v1.J + v2.J), 0.5 * (v1.K + v2.K)};
}

double bilinear_pohozaev_check(const SmoothField& f, const SmoothField& g, const Point& x0,
                               double r, int n, int volume_order, int surface_order) {
  const QuadratureRule radial = gauss_legendre(volume_order, 0.0, r);
  Point origin(static_cast<std::size_t>(n), 0.0);
  const auto unit_sphere = sphere_quadrature(n, origin, 1.0, surface_order);

  double lhs = 0.0, vol_grad = 0.0;
  for (std::size_t ir = 0; ir < radial.nodes.size(); ++ir) {
    const double rr = radial.nodes[ir];
    const double wr = radial.weights[ir] * std::pow(rr, n - 1);
    for (const auto& node : unit_sphere) {
      Point x(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        x[ks] = x0[ks] + rr * node.x[ks];
      }
      const Point gf = f.gradient(x), gg = g.gradient(x);
      double xgf = 0.0, xgg = 0.0, gfgg = 0.0;
      for (int k = 0; k < n; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        xgf += (x[ks] - x0[ks]) * gf[ks];
        xgg += (x[ks] - x0[ks]) * gg[ks];
        gfgg += gf[ks] * gg[ks];
      }
      const double w = wr * node.weight;
      lhs += w * (xgf * g.laplacian(x) + xgg * f.laplacian(x));
      vol_grad += w * gfgg;
    }
  }

  double surf = 0.0;
  for (const auto& node : unit_sphere) {
    Point x(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      x[ks] = x0[ks] + r * node.x[ks];
    }
    const Point gf = f.gradient(x), gg = g.gradient(x);
    double fn = 0.0, gn = 0.0, gfgg = 0.0;
    for (int k = 0; k < n; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      fn += node.x[ks] * gf[ks];
      gn += node.x[ks] * gg[ks];
      gfgg += gf[ks] * gg[ks];
    }
    surf += node.weight * std::pow(r, n - 1) * (2.0 * fn * gn - gfgg);
  }

  const double rhs = r * surf + (n - 2) * vol_grad;
  const double scale =
      std::max({std::abs(lhs), std::abs(rhs), std::abs(r * surf),
                std::abs((n - 2) * vol_grad), 1e-30});
  return std::abs(lhs - rhs) / scale;
}

double grad_checks(const GreenOracle& oracle, const std::vector<std::pair<Point, Point>>& samples,
                   double h) {
  const int n = oracle.dimension();
  double worst = 0.0;
  const double floor = oracle.gamma_n();
  auto update = [&](double analytic, double numeric) {
    const double denom = std::max(std::abs(analytic), floor);
    worst = std::max(worst, std::abs(analytic - numeric) / denom);
  };

  for (const auto& [x, y] : samples) {
    const Point gx = oracle.grad_x_G(x, y);
    const Point gy = oracle.grad_y_G(x, y);
    const auto hxy = oracle.hess_xy_G(x, y);
    const auto hxx = oracle.hess_xx_G(x, y);
    const Point gt = oracle.grad_tau(x);
    const auto ht = oracle.hess_tau(x);
    for (int k = 0; k < n; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      update(gx[ks], central_derivative(
                         [&](double t) {
                           Point xs = x;
                           xs[ks] = t;
                           return oracle.G(xs, y);
                         },
                         x[ks], h));
      update(gy[ks], central_derivative(
                         [&](double t) {
                           Point ys = y;
                           ys[ks] = t;
                           return oracle.G(x, ys);
                         },
                         y[ks], h));
      update(gt[ks], central_derivative(
                         [&](double t) {
                           Point xs = x;
                           xs[ks] = t;
                           return oracle.tau(xs);
                         },
                         x[ks], h));
      for (int q = 0; q < n; ++q) {
        const auto qs = static_cast<std::size_t>(q);
        update(hxy[ks][qs], central_derivative(
                                [&](double t) {
                                  Point ys = y;
                                  ys[qs] = t;
                                  return oracle.grad_x_G(x, ys)[ks];
                                },
                                y[qs], h));
        update(hxx[ks][qs], central_derivative(
                                [&](double t) {
                                  Point xs = x;
                                  xs[qs] = t;
                                  return oracle.grad_x_G(xs, y)[ks];
                                },
                                x[qs], h));
        update(ht[ks][qs], central_derivative(
                               [&](double t) {
                                 Point xs = x;
                                 xs[qs] = t;
                                 return oracle.grad_tau(xs)[ks];
                               },
                               x[qs], h));
      }
    }
  }
  return worst;
}

}  // namespace lefspec
