#include "lefspec/reduction.hpp"

#include <cmath>
#include <stdexcept>

namespace lefspec {

namespace {

// Cholesky solve for the small SPD weight matrix; false when not SPD.
bool spd_solve(const SymmetricMatrix& m, const std::vector<double>& rhs, std::vector<double>& out) {
  const std::size_t n = m.order();
  std::vector<double> l(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      if (i == j) {
        if (s <= 0.0) return false;
        l[i * n + i] = std::sqrt(s);
      } else {
        l[i * n + j] = s / l[j * n + j];
      }
    }
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = rhs[i];
    for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * y[k];
    y[i] = s / l[i * n + i];
  }
  out.assign(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = y[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l[k * n + i] * out[k];
    out[i] = s / l[i * n + i];
  }
  return true;
}

}  // namespace

void Configuration::validate(const GreenOracle& oracle) const {
  if (m < 1) throw std::invalid_argument("Configuration: m must be >= 1");
  if (static_cast<int>(lambdas.size()) != m || static_cast<int>(points.size()) != m)
    throw std::invalid_argument("Configuration: m does not match lambdas/points");
  for (double l : lambdas)
    if (!(l > 0.0)) throw std::invalid_argument("Configuration: rates must be positive");
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(points[static_cast<std::size_t>(i)].size()) != n)
      throw std::invalid_argument("Configuration: point dimension mismatch");
    if (!oracle.contains(points[static_cast<std::size_t>(i)]))
      throw std::invalid_argument("Configuration: point outside the domain");
    for (int j = i + 1; j < m; ++j) {
      double d2 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double d = points[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] -
                         points[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        d2 += d * d;
      }
      if (d2 == 0.0) throw std::invalid_argument("Configuration: points must be pairwise distinct");
    }
  }
}

double upsilon(const Configuration& cfg, const GreenOracle& oracle, const ConstantsTable& table) {
  cfg.validate(oracle);
  const int n = cfg.n, m = cfg.m;
  const double halfpow = 0.5 * (n - 2);
  double interaction = 0.0, self = 0.0, logterm = 0.0;
  for (int i = 0; i < m; ++i) {
    const auto is = static_cast<std::size_t>(i);
    self += oracle.tau(cfg.points[is]) * std::pow(cfg.lambdas[is], n - 2);
    logterm += std::log(cfg.lambdas[is]);
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const auto js = static_cast<std::size_t>(j);
      interaction += oracle.G(cfg.points[is], cfg.points[js]) *
                     std::pow(cfg.lambdas[is] * cfg.lambdas[js], halfpow);
    }
  }
  return table.c1_energy * (self - interaction) - table.c2_energy * logterm;
}

std::vector<double> upsilon_grad(const Configuration& cfg, const GreenOracle& oracle,
                                 const ConstantsTable& table) {
  cfg.validate(oracle);
  const int n = cfg.n, m = cfg.m;
  std::vector<double> grad(static_cast<std::size_t>(m + m * n), 0.0);
  for (int i = 0; i < m; ++i) {
    const auto is = static_cast<std::size_t>(i);
    const double li = cfg.lambdas[is];
    const Point& xi = cfg.points[is];
    double cross = 0.0;  // sum_{j != i} G(x_i,x_j) l_j^{(n-2)/2}
    Point cross_grad(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const auto js = static_cast<std::size_t>(j);
      const double w = std::pow(cfg.lambdas[js], 0.5 * (n - 2));
      cross += oracle.G(xi, cfg.points[js]) * w;
      const Point g = oracle.grad_x_G(xi, cfg.points[js]);
      for (int k = 0; k < n; ++k) cross_grad[static_cast<std::size_t>(k)] += g[static_cast<std::size_t>(k)] * w;
    }
    grad[is] = table.c1_energy *
                   ((n - 2) * oracle.tau(xi) * std::pow(li, n - 3) -
                    (n - 2) * std::pow(li, 0.5 * (n - 4)) * cross) -
               table.c2_energy / li;
    const Point gtau = oracle.grad_tau(xi);
    for (int k = 0; k < n; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      grad[static_cast<std::size_t>(m + i * n + k)] =
          table.c1_energy * (gtau[ks] * std::pow(li, n - 2) -
                             2.0 * std::pow(li, 0.5 * (n - 2)) * cross_grad[ks]);
    }
  }
  return grad;
}

Configuration find_critical(const Configuration& cfg0, const GreenOracle& oracle,
                            const ConstantsTable& table, double tol, int maxit) {
  cfg0.validate(oracle);
  const int n = cfg0.n, m = cfg0.m;
  const std::size_t dim = static_cast<std::size_t>(m + m * n);

  auto unpack = [&](const std::vector<double>& z) {
    Configuration c = cfg0;
    bool inside = true;
    for (int i = 0; i < m; ++i) {
      const auto is = static_cast<std::size_t>(i);
      c.lambdas[is] = std::exp(z[is]);
      for (int k = 0; k < n; ++k)
        c.points[is][static_cast<std::size_t>(k)] = z[static_cast<std::size_t>(m + i * n + k)];
      if (!oracle.contains(c.points[is])) inside = false;
    }
    return std::make_pair(c, inside);
  };

  VectorFn residual = [&](const std::vector<double>& z) -> std::vector<double> {
    auto [c, inside] = unpack(z);
    std::vector<double> out(dim, 0.0);
    if (!inside || std::abs(z[0]) > 30.0) {
      // rate escaped or point left the domain: reject the trial step
      std::fill(out.begin(), out.end(), 1e30);
      return out;
    }
    std::vector<double> g = upsilon_grad(c, oracle, table);
    for (int i = 0; i < m; ++i) {
      const auto is = static_cast<std::size_t>(i);
      out[is] = c.lambdas[is] * g[is];  // gradient in log(lambda)
      for (int k = 0; k < n; ++k) {
        const auto idx = static_cast<std::size_t>(m + i * n + k);
        out[idx] = g[idx];
      }
    }
    return out;
  };

  std::vector<double> z0(dim);
  for (int i = 0; i < m; ++i) {
    const auto is = static_cast<std::size_t>(i);
    z0[is] = std::log(cfg0.lambdas[is]);
    for (int k = 0; k < n; ++k)
      z0[static_cast<std::size_t>(m + i * n + k)] = cfg0.points[is][static_cast<std::size_t>(k)];
  }

  NewtonResult res;
  try {
    res = damped_newton(residual, finite_difference_jacobian(residual), z0, tol, maxit);
  } catch (const iteration_error& e) {
    throw iteration_error(std::string("find_critical: no critical point found (") + e.what() + ")");
  }
  auto [c, inside] = unpack(res.x);
  if (!inside) throw iteration_error("find_critical: iterate escaped the domain");
  return c;
}

ReductionMatrices build_matrices(const Configuration& cfg, const GreenOracle& oracle,
                                 const ConstantsTable& table, double stationarity_tol) {
  cfg.validate(oracle);
  const int n = cfg.n, m = cfg.m;

  // The diagonal simplifications below assume stationarity of the reduced energy.
  {
    const std::vector<double> g = upsilon_grad(cfg, oracle, table);
    double worst = 0.0;
    for (double gi : g) worst = std::max(worst, std::abs(gi));
    if (worst > stationarity_tol * std::max(1.0, table.c2_energy))
      throw std::invalid_argument(
          "build_matrices: configuration is not stationary for the reduced energy");
  }

  ReductionMatrices out;
  out.n = n;
  out.m = m;
  const auto ms = static_cast<std::size_t>(m);
  const auto mns = static_cast<std::size_t>(m * n);
  out.A1 = SymmetricMatrix(ms);
  out.M1 = SymmetricMatrix(ms);
  out.M2 = SymmetricMatrix(ms);
  out.A3 = SymmetricMatrix(ms);
  out.P.assign(ms, std::vector<double>(mns, 0.0));
  out.Q = SymmetricMatrix(mns);

  const double half = 0.5 * (n - 2);
  for (int i = 0; i < m; ++i) {
    const auto is = static_cast<std::size_t>(i);
    const double li = cfg.lambdas[is];
    const double taui = oracle.tau(cfg.points[is]);
    out.A1.set(is, is, -table.C0 + std::pow(li, n - 2) * taui);
    out.M1.set(is, is, table.C0 * std::pow(li, -(n - 2.0)) + taui);
    out.M2.set(is, is, taui);
    out.A3.set(is, is, table.C0 + std::pow(li, n - 2) * taui);
    for (int j = i + 1; j < m; ++j) {
      const auto js = static_cast<std::size_t>(j);
      const double gij = oracle.G(cfg.points[is], cfg.points[js]);
      const double lw = std::pow(li * cfg.lambdas[js], half);
      out.A1.set(is, js, -lw * gij);
      out.M1.set(is, js, -gij);
      out.M2.set(is, js, -gij);
      out.A3.set(is, js, -lw * gij);
    }
  }

  for (int i = 0; i < m; ++i) {
    const auto is = static_cast<std::size_t>(i);
    for (int j = 0; j < m; ++j) {
      const auto js = static_cast<std::size_t>(j);
      const double lj_n2 = std::pow(cfg.lambdas[js], 0.5 * n);
      if (i == j) {
        const Point gtau = oracle.grad_tau(cfg.points[is]);
        for (int k = 0; k < n; ++k)
          out.P[is][static_cast<std::size_t>(j * n + k)] =
              -0.5 * lj_n2 * gtau[static_cast<std::size_t>(k)];
      } else {
        const Point gy = oracle.grad_y_G(cfg.points[is], cfg.points[js]);
        for (int k = 0; k < n; ++k)
          out.P[is][static_cast<std::size_t>(j * n + k)] = lj_n2 * gy[static_cast<std::size_t>(k)];
      }
    }
  }

  for (int i = 0; i < m; ++i) {
    const auto is = static_cast<std::size_t>(i);
    const double li = cfg.lambdas[is];
    // diagonal block: -(l_i^n / 2) hess tau + l_i^{(n+2)/2} sum_{l != i} l_l^{(n-2)/2} hess_xx G
    std::vector<std::vector<double>> block(static_cast<std::size_t>(n),
                                           std::vector<double>(static_cast<std::size_t>(n), 0.0));
    const auto htau = oracle.hess_tau(cfg.points[is]);
    for (int k = 0; k < n; ++k)
      for (int q = 0; q < n; ++q)
        block[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)] =
            -0.5 * std::pow(li, n) * htau[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)];
    for (int l = 0; l < m; ++l) {
      if (l == i) continue;
      const auto ls = static_cast<std::size_t>(l);
      const auto hxx = oracle.hess_xx_G(cfg.points[is], cfg.points[ls]);
      const double w = std::pow(li, 0.5 * (n + 2)) * std::pow(cfg.lambdas[ls], half);
      for (int k = 0; k < n; ++k)
        for (int q = 0; q < n; ++q)
          block[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)] +=
              w * hxx[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)];
    }
    for (int k = 0; k < n; ++k)
      for (int q = k; q < n; ++q) {
        const double gap = out.Q.symmetrize(static_cast<std::size_t>(i * n + k),
                                            static_cast<std::size_t>(i * n + q),
                                            block[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)],
                                            block[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)]);
        out.q_symmetry_gap = std::max(out.q_symmetry_gap, gap);
      }
    for (int j = i + 1; j < m; ++j) {
      const auto js = static_cast<std::size_t>(j);
      const auto hxy_ij = oracle.hess_xy_G(cfg.points[is], cfg.points[js]);
      const auto hxy_ji = oracle.hess_xy_G(cfg.points[js], cfg.points[is]);
      const double w = std::pow(li * cfg.lambdas[js], 0.5 * n);
      for (int k = 0; k < n; ++k)
        for (int q = 0; q < n; ++q) {
          // G symmetry gives d2G/dx_k dy_q (x_i,x_j) = d2G/dx_q dy_k (x_j,x_i)
          const double gap = out.Q.symmetrize(
              static_cast<std::size_t>(i * n + k), static_cast<std::size_t>(j * n + q),
              w * hxy_ij[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)],
              w * hxy_ji[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)]);
          out.q_symmetry_gap = std::max(out.q_symmetry_gap, gap);
        }
    }
  }

  // A2 = P^T M1^{-1} P + Q via SPD solves of M1 against each column of P.
  out.A2 = SymmetricMatrix(mns);
  std::vector<std::vector<double>> m1inv_p(mns);  // column t of M1^{-1} P
  for (std::size_t t = 0; t < mns; ++t) {
    std::vector<double> col(ms);
    for (std::size_t i = 0; i < ms; ++i) col[i] = out.P[i][t];
    if (!spd_solve(out.M1, col, m1inv_p[t]))
      throw evaluation_error("build_matrices: M1 is not positive definite");
  }
  out.m1_positive_definite = true;
  for (std::size_t s = 0; s < mns; ++s)
    for (std::size_t t = s; t < mns; ++t) {
      double v = out.Q(s, t);
      for (std::size_t i = 0; i < ms; ++i) v += out.P[i][s] * m1inv_p[t][i];
      out.A2.set(s, t, v);
    }

  {
    const EigenDecomposition ed = jacobi_eigen(out.M2);
    out.m2_min_eigenvalue = ed.values.front();
  }
  return out;
}

BandSpectra spectra(const ReductionMatrices& mat) {
  BandSpectra sp;
  EigenDecomposition e1 = jacobi_eigen(mat.A1);
  EigenDecomposition e2 = jacobi_eigen(mat.A2);
  EigenDecomposition e3 = jacobi_eigen(mat.A3);
  sp.rho1 = std::move(e1.values);
  sp.c_vectors = std::move(e1.vectors);
  sp.rho2 = std::move(e2.values);
  sp.d_vectors = std::move(e2.vectors);
  sp.rho3 = std::move(e3.values);
  sp.d_hat_vectors = std::move(e3.vectors);
  return sp;
}

double SpectralPrediction::evaluate(double eps) const {
  return base + slope * std::pow(eps, exponent);
}

std::vector<SpectralPrediction> predict(const BandSpectra& sp, const ConstantsTable& table, int n,
                                        int m) {
  std::vector<SpectralPrediction> out;
  out.reserve(static_cast<std::size_t>((n + 2) * m));
  int index = 1;
  for (int l = 0; l < m; ++l) {
    SpectralPrediction pr;
    pr.band = Band::first_m;
    pr.index = index++;
    pr.rho = sp.rho1[static_cast<std::size_t>(l)];
    pr.base = static_cast<double>(n - 2) / (n + 2);
    pr.slope = b1(table, pr.rho);
    pr.exponent = 1.0;
    out.push_back(pr);
  }
  for (int l = 0; l < m * n; ++l) {
    SpectralPrediction pr;
    pr.band = Band::middle_mn;
    pr.index = index++;
    pr.rho = sp.rho2[static_cast<std::size_t>(l)];
    pr.base = 1.0;
    pr.slope = -table.c0_spec * pr.rho;
    pr.exponent = static_cast<double>(n) / (n - 2);
    out.push_back(pr);
  }
  for (int l = 0; l < m; ++l) {
    SpectralPrediction pr;
    pr.band = Band::last_m;
    pr.index = index++;
    pr.rho = sp.rho3[static_cast<std::size_t>(l)];
    pr.base = 1.0;
    pr.slope = table.c1_spec * pr.rho;
    pr.exponent = 1.0;
    out.push_back(pr);
  }
  return out;
}

MorseBounds morse_bounds(const ReductionMatrices& mat, const BandSpectra& sp,
                         std::optional<double> tol_zero) {
  const double tol = tol_zero.value_or(1e-9 * std::max(1.0, mat.A2.frobenius_norm()));
  MorseBounds out;
  int strict_pos = 0, nonneg = 0;
  bool degenerate = false;
  for (double r : sp.rho2) {
    if (r > tol) ++strict_pos;
    if (r >= -tol) ++nonneg;
    if (std::abs(r) <= tol) degenerate = true;
  }
  out.lower = mat.m + strict_pos;
  out.upper = mat.m + nonneg;
  out.nondegenerate = !degenerate;
  if (out.nondegenerate) out.exact = out.lower;
  return out;
}

}  // namespace lefspec
