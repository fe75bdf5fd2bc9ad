#include "lefspec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace lefspec {

namespace {

constexpr double kPi = std::numbers::pi;

// Legendre polynomial value and derivative at x, degree k.
std::pair<double, double> legendre_pd(int k, double x) {
  double p0 = 1.0, p1 = x;
  if (k == 0) return {1.0, 0.0};
  for (int j = 2; j <= k; ++j) {
    double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  double d = k * (x * p1 - p0) / (x * x - 1.0);
  return {p1, d};
}

}  // namespace

QuadratureRule gauss_legendre(int k, double a, double b) {
  if (k < 1) throw std::invalid_argument("gauss_legendre: k must be >= 1");
  if (!(a < b)) throw std::invalid_argument("gauss_legendre: need a < b");
  QuadratureRule rule;
  rule.a = a;
  rule.b = b;
  rule.nodes.resize(k);
  rule.weights.resize(k);
  // Newton on the canonical [-1,1] roots, symmetric pairs.
  for (int i = 0; i < (k + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (k + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, d] = legendre_pd(k, x);
      double dx = p / d;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    auto [p, d] = legendre_pd(k, x);
    (void)p;
    double w = 2.0 / ((1.0 - x * x) * d * d);
    rule.nodes[i] = x;
    rule.weights[i] = w;
    rule.nodes[k - 1 - i] = -x;
    rule.weights[k - 1 - i] = w;
  }
  if (k % 2 == 1) rule.nodes[k / 2] = 0.0;
  // map to [a,b]
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < k; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  std::reverse(rule.nodes.begin(), rule.nodes.end());
  std::reverse(rule.weights.begin(), rule.weights.end());
  return rule;
}

QuadratureRule gauss_gegenbauer(int k, double alpha) {
  if (k < 1) throw std::invalid_argument("gauss_gegenbauer: k must be >= 1");
  if (alpha <= -1.0) throw std::invalid_argument("gauss_gegenbauer: alpha must exceed -1");
  // Golub-Welsch on the symmetric Jacobi(alpha, alpha) recurrence.
  // b_j^2 = j(j+2a)(j+a)^2-free form for a=alpha:
  //   b_j^2 = j (j + 2a) / ((2j + 2a - 1)(2j + 2a + 1)) * ... standard Jacobi(a,a):
  // For Jacobi(a,b) with a=b: alpha_j = 0 and
  //   beta_j^2 = 4 j (j+a)(j+a)(j+2a) / ((2j+2a)^2 (2j+2a+1)(2j+2a-1))
  SymmetricMatrix jm(static_cast<std::size_t>(k));
  for (int j = 1; j < k; ++j) {
    double a2 = 2.0 * alpha;
    double num = 4.0 * j * (j + alpha) * (j + alpha) * (j + a2);
    double den = (2.0 * j + a2) * (2.0 * j + a2) * (2.0 * j + a2 + 1.0) * (2.0 * j + a2 - 1.0);
    double beta = std::sqrt(num / den);
    jm.set(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(j), beta);
  }
  EigenDecomposition ed = jacobi_eigen(jm, 1e-15);
  // mu0 = int_{-1}^1 (1-t^2)^alpha dt = sqrt(pi) Gamma(alpha+1)/Gamma(alpha+3/2)
  double mu0 = std::sqrt(kPi) * std::exp(std::lgamma(alpha + 1.0) - std::lgamma(alpha + 1.5));
  QuadratureRule rule;
  rule.a = -1.0;
  rule.b = 1.0;
  rule.nodes = ed.values;
  rule.weights.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    double q0 = ed.vectors[static_cast<std::size_t>(i)][0];
    rule.weights[static_cast<std::size_t>(i)] = mu0 * q0 * q0;
  }
  return rule;
}

double sphere_surface_area(int n) {
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double radial_integral(const std::function<double(double)>& f, int n, int order) {
  if (n < 1) throw std::invalid_argument("radial_integral: dimension must be positive");
  QuadratureRule rule = gauss_legendre(order, 0.0, 1.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = rule.nodes[i];
    const double r = t / (1.0 - t);
    const double jac = 1.0 / ((1.0 - t) * (1.0 - t));
    const double val = f(r);
    if (!std::isfinite(val))
      throw evaluation_error("radial_integral: integrand not finite at r=" + std::to_string(r));
    sum += rule.weights[i] * val * std::pow(r, n - 1) * jac;
  }
  return sphere_surface_area(n) * sum;
}

double SymmetricMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

EigenDecomposition jacobi_eigen(const SymmetricMatrix& m, double tol) {
  const std::size_t n = m.order();
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j);
  for (double v : a)
    if (!std::isfinite(v)) throw evaluation_error("jacobi_eigen: non-finite matrix entry");

  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double norm = std::max(m.frobenius_norm(), 1e-300);
  auto offmass = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
    return std::sqrt(s);
  };

  const int max_sweeps = 100;
  int sweep = 0;
  while (offmass() > tol * norm) {
    if (++sweep > max_sweeps) throw iteration_error("jacobi_eigen: no convergence after max sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p], aqq = a[q * n + q];
        const double theta = 0.5 * (aqq - app) / apq;
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t i, std::size_t j) { return a[i * n + i] < a[j * n + j]; });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.assign(n, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a[idx[k] * n + idx[k]];
    for (std::size_t i = 0; i < n; ++i) out.vectors[k][i] = v[i * n + idx[k]];
  }
  return out;
}

void TridiagonalPencil::validate() const {
  if (offdiag.size() + 1 != diag.size())
    throw std::invalid_argument("TridiagonalPencil: offdiag length must be diag length - 1");
  if (massDiag.size() != diag.size())
    throw std::invalid_argument("TridiagonalPencil: massDiag length mismatch");
  for (double b : massDiag)
    if (!(b > 0.0)) throw std::invalid_argument("TridiagonalPencil: massDiag must be positive");
}

int tridiag_count_below(const TridiagonalPencil& p, double sigma) {
  // Sturm pivots of (A - sigma B); B diagonal keeps the recursion tridiagonal.
  const std::size_t n = p.size();
  int count = 0;
  const double tiny = 1e-300;
  double q = p.diag[0] - sigma * p.massDiag[0];
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    double denom = q;
    if (std::abs(denom) < tiny) denom = (denom >= 0.0 ? tiny : -tiny);
    q = (p.diag[i] - sigma * p.massDiag[i]) - p.offdiag[i - 1] * p.offdiag[i - 1] / denom;
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> tridiag_solve(const std::vector<double>& diag,
                                  const std::vector<double>& offdiag,
                                  const std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  // LU with partial pivoting; pivoting introduces a second superdiagonal.
  std::vector<double> c0 = diag, c1(n, 0.0), c2(n, 0.0), x = rhs, low(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    c1[i] = offdiag[i];
    low[i] = offdiag[i];
  }
  const double tiny = 1e-300;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(low[i]) > std::abs(c0[i])) {
      std::swap(c0[i], low[i]);
      std::swap(c0[i + 1], c1[i]);
      if (i + 2 < n) std::swap(c1[i + 1], c2[i]);
      std::swap(x[i], x[i + 1]);
    }
    double piv = c0[i];
    if (std::abs(piv) < tiny) piv = (piv >= 0.0 ? tiny : -tiny);
    const double m = low[i] / piv;
    c0[i + 1] -= m * c1[i];
    if (i + 2 < n) c1[i + 1] -= m * c2[i];
    x[i + 1] -= m * x[i];
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = x[k];
    if (k + 1 < n) s -= c1[k] * x[k + 1];
    if (k + 2 < n) s -= c2[k] * x[k + 2];
    double piv = c0[k];
    if (std::abs(piv) < tiny) piv = (piv >= 0.0 ? tiny : -tiny);
    x[k] = s / piv;
  }
  return x;
}

std::vector<TridiagonalEigenPair> tridiag_generalized_eigen(const TridiagonalPencil& p,
                                                            int count) {
  p.validate();
  const std::size_t n = p.size();
  if (count < 1 || static_cast<std::size_t>(count) > n)
    throw std::invalid_argument("tridiag_generalized_eigen: count out of range");

  // Bracket from the Gershgorin bounds of the reduced (pencil) problem.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    if (i > 0) off += std::abs(p.offdiag[i - 1]);
    if (i + 1 < n) off += std::abs(p.offdiag[i]);
    lo = std::min(lo, (p.diag[i] - off) / p.massDiag[i]);
    hi = std::max(hi, (p.diag[i] + off) / p.massDiag[i]);
  }
  if (!(lo < hi)) {
    lo -= 1.0;
    hi += 1.0;
  }

  std::vector<TridiagonalEigenPair> out;
  out.reserve(static_cast<std::size_t>(count));
  std::mt19937 rng(0x5eed5u);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int k = 0; k < count; ++k) {
    double a = lo, b = hi;
    for (int it = 0; it < 120 && b - a > 1e-15 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
      const double mid = 0.5 * (a + b);
      if (tridiag_count_below(p, mid) >= k + 1)
        b = mid;
      else
        a = mid;
    }
    const double approx = 0.5 * (a + b);

    // Inverse iteration on (A - mu B), then Rayleigh quotient in the pencil metric.
    std::vector<double> x(n);
    for (auto& xi : x) xi = gauss(rng);
    std::vector<double> shifted(n);
    for (std::size_t i = 0; i < n; ++i) shifted[i] = p.diag[i] - approx * p.massDiag[i];
    double mu = approx;
    bool ok = false;
    for (int pass = 0; pass < 8; ++pass) {
      std::vector<double> rhs(n);
      for (std::size_t i = 0; i < n; ++i) rhs[i] = p.massDiag[i] * x[i];
      std::vector<double> y = tridiag_solve(shifted, p.offdiag, rhs);
      double bnorm = 0.0;
      for (std::size_t i = 0; i < n; ++i) bnorm += p.massDiag[i] * y[i] * y[i];
      bnorm = std::sqrt(bnorm);
      if (!std::isfinite(bnorm) || bnorm == 0.0) break;
      for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / bnorm;
      // Rayleigh quotient x^T A x / x^T B x (x already B-normalized).
      double xax = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double ax = p.diag[i] * x[i];
        if (i > 0) ax += p.offdiag[i - 1] * x[i - 1];
        if (i + 1 < n) ax += p.offdiag[i] * x[i + 1];
        xax += x[i] * ax;
      }
      const double mu_new = xax;
      ok = std::abs(mu_new - mu) <= 1e-13 * std::max(1.0, std::abs(mu_new));
      mu = mu_new;
      if (ok && pass >= 1) break;
    }
    if (!ok && !(std::abs(mu - approx) <= 1e-8 * std::max(1.0, std::abs(approx))))
      throw iteration_error("tridiag_generalized_eigen: inverse iteration stagnation");

    // Fix a deterministic sign: first nonzero component positive.
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(x[i]) > 1e-12) {
        if (x[i] < 0.0)
          for (auto& xi : x) xi = -xi;
        break;
      }
    }
    out.push_back({mu, std::move(x)});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& l, const auto& r) { return l.value < r.value; });
  return out;
}

NewtonResult damped_newton(const VectorFn& f, const JacobianFn& jac, std::vector<double> x0,
                           double tol, int maxit) {
  const std::size_t n = x0.size();
  auto supnorm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double vi : v) s = std::max(s, std::abs(vi));
    return s;
  };

  // Dense LU with partial pivoting; returns false on numerical singularity.
  auto lu_solve = [&](std::vector<double> a, std::vector<double> b,
                      std::vector<double>& out) -> bool {
    std::vector<std::size_t> piv(n);
    for (std::size_t i = 0; i < n; ++i) piv[i] = i;
    double max_piv = 0.0, min_piv = std::numeric_limits<double>::infinity();
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t best = col;
      for (std::size_t r = col + 1; r < n; ++r)
        if (std::abs(a[r * n + col]) > std::abs(a[best * n + col])) best = r;
      if (best != col) {
        for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[best * n + c]);
        std::swap(b[col], b[best]);
      }
      const double piv_val = std::abs(a[col * n + col]);
      max_piv = std::max(max_piv, piv_val);
      min_piv = std::min(min_piv, piv_val);
      if (piv_val == 0.0) return false;
      for (std::size_t r = col + 1; r < n; ++r) {
        const double m = a[r * n + col] / a[col * n + col];
        if (m == 0.0) continue;
        for (std::size_t c = col; c < n; ++c) a[r * n + c] -= m * a[col * n + c];
        b[r] -= m * b[col];
      }
    }
    if (min_piv < 1e-14 * max_piv) return false;
    out.assign(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
      double s = b[k];
      for (std::size_t c = k + 1; c < n; ++c) s -= a[k * n + c] * out[c];
      out[k] = s / a[k * n + k];
    }
    return true;
  };

  NewtonResult res;
  res.x = std::move(x0);
  std::vector<double> fx = f(res.x);
  double fnorm = supnorm(fx);
  for (res.iterations = 0; res.iterations < maxit; ++res.iterations) {
    if (fnorm <= tol) {
      res.converged = true;
      break;
    }
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -fx[i];
    std::vector<double> step;
    if (!lu_solve(jac(res.x), rhs, step))
      throw iteration_error("damped_newton: singular Jacobian");
    double t = 1.0;
    bool improved = false;
    for (int halve = 0; halve < 50; ++halve) {
      std::vector<double> xn(n);
      for (std::size_t i = 0; i < n; ++i) xn[i] = res.x[i] + t * step[i];
      std::vector<double> fn = f(xn);
      const double fn_norm = supnorm(fn);
      if (fn_norm < fnorm) {
        res.x = std::move(xn);
        fx = std::move(fn);
        fnorm = fn_norm;
        improved = true;
        break;
      }
      t *= 0.5;
    }
    if (!improved) break;  // stagnation; final residual reported below
  }
  res.residual_norm = fnorm;
  if (fnorm <= tol) res.converged = true;
  if (!res.converged) throw iteration_error("damped_newton: no convergence within maxit");
  return res;
}

JacobianFn finite_difference_jacobian(const VectorFn& f) {
  return [f](const std::vector<double>& x) {
    const std::size_t n = x.size();
    const double eps_cbrt = std::cbrt(std::numeric_limits<double>::epsilon());
    std::vector<double> jac(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double scale = std::max(1.0, std::abs(x[j]));
      const double h = eps_cbrt * scale;
      auto col_at = [&](double step) {
        std::vector<double> xp = x;
        xp[j] += step;
        std::vector<double> fp = f(xp);
        xp[j] = x[j] - step;
        std::vector<double> fm = f(xp);
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = (fp[i] - fm[i]) / (2.0 * step);
        return col;
      };
      // one Richardson level: (4 D(h/2) - D(h)) / 3
      std::vector<double> dh = col_at(h), dh2 = col_at(0.5 * h);
      for (std::size_t i = 0; i < n; ++i) jac[i * n + j] = (4.0 * dh2[i] - dh[i]) / 3.0;
    }
    return jac;
  };
}

AffineFit fit_affine(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 2)
    throw std::invalid_argument("fit_affine: need at least two samples");
  const double nn = static_cast<double>(t.size());
  double st = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sy += y[i];
  }
  const double tbar = st / nn, ybar = sy / nn;
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - tbar) * (t[i] - tbar);
    sty += (t[i] - tbar) * (y[i] - ybar);
  }
  if (stt == 0.0) throw std::invalid_argument("fit_affine: degenerate abscissa set");
  AffineFit fit;
  fit.slope = sty / stt;
  fit.intercept = ybar - fit.slope * tbar;
  double ss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * t[i];
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / nn);
  return fit;
}

double central_derivative(const std::function<double(double)>& f, double x, double h) {
  auto d = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

}  // namespace lefspec
