#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace lefspec {

/// Thrown when an iterative kernel fails to reach its tolerance.
class iteration_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when an integrand or matrix entry evaluates to NaN/Inf.
class evaluation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Nodes/weights of a quadrature rule on [a, b].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double a = -1.0;
  double b = 1.0;

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// k-point Gauss-Legendre rule on [a, b]; exact on polynomials of degree <= 2k-1.
QuadratureRule gauss_legendre(int k, double a, double b);

/// k-point Gauss rule for the weight (1-t^2)^alpha on [-1, 1] (Gegenbauer weight).
/// Used for the sin^m polar-angle factors of product sphere rules.
QuadratureRule gauss_gegenbauer(int k, double alpha);

/// Integral of the radial function f over R^n:  |S^{n-1}| * int_0^inf f(r) r^{n-1} dr,
/// evaluated with the substitution r = t/(1-t) and Gauss-Legendre on (0,1).
double radial_integral(const std::function<double(double)>& f, int n, int order = 200);

/// Surface area of the unit sphere S^{n-1}.
double sphere_surface_area(int n);

// ---------------------------------------------------------------------------
// Dense symmetric eigensolver
// ---------------------------------------------------------------------------

/// Dense symmetric matrix, stored fully; set() keeps it symmetric by construction.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t order) : n_(order), a_(order * order, 0.0) {}

  std::size_t order() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    a_[i * n_ + j] = v;
    a_[j * n_ + i] = v;
  }
  /// Symmetrize an (i,j)/(j,i) pair to their mean; returns the gap |aij - aji|.
  double symmetrize(std::size_t i, std::size_t j, double aij, double aji) {
    set(i, j, 0.5 * (aij + aji));
    return aij > aji ? aij - aji : aji - aij;
  }
  double frobenius_norm() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

struct EigenDecomposition {
  std::vector<double> values;               // ascending
  std::vector<std::vector<double>> vectors; // vectors[k] is the unit eigenvector of values[k]
};

/// Cyclic Jacobi rotations; stops when the off-diagonal Frobenius mass is below
/// tol * ||M||_F. Eigenvalues ascending, eigenvectors orthonormal.
EigenDecomposition jacobi_eigen(const SymmetricMatrix& m, double tol = 1e-14);

// ---------------------------------------------------------------------------
// Generalized tridiagonal eigensolver
// ---------------------------------------------------------------------------

/// Pencil A v = mu B v with A symmetric tridiagonal and B = diag(massDiag) > 0.
struct TridiagonalPencil {
  std::vector<double> diag;     // size N
  std::vector<double> offdiag;  // size N-1
  std::vector<double> massDiag; // size N, strictly positive

  std::size_t size() const { return diag.size(); }
  void validate() const;
};

struct TridiagonalEigenPair {
  double value = 0.0;
  std::vector<double> vector; // B-normalized: v^T B v = 1
};

/// Lowest `count` eigenpairs of the pencil, via bisection on the Sturm pivot
/// counts of the reduced matrix D^{-1/2} A D^{-1/2} - sigma I (computed in
/// pencil form, which is the same congruence and does not lose accuracy when
/// massDiag spans many orders of magnitude), then inverse iteration and a
/// Rayleigh-quotient polish.
std::vector<TridiagonalEigenPair> tridiag_generalized_eigen(const TridiagonalPencil& p,
                                                            int count);

/// Number of pencil eigenvalues strictly below sigma (Sturm pivot count).
int tridiag_count_below(const TridiagonalPencil& p, double sigma);

/// Solve (triadiagonal A + shift*B) x = rhs with partial pivoting.
std::vector<double> tridiag_solve(const std::vector<double>& diag,
                                  const std::vector<double>& offdiag,
                                  const std::vector<double>& rhs);

// ---------------------------------------------------------------------------
// Damped Newton
// ---------------------------------------------------------------------------

using VectorFn = std::function<std::vector<double>(const std::vector<double>&)>;
/// Jacobian callback: returns the dense row-major N x N matrix at x.
using JacobianFn = std::function<std::vector<double>(const std::vector<double>&)>;

struct NewtonResult {
  std::vector<double> x;
  double residual_norm = 0.0; // sup norm of F at the returned iterate
  int iterations = 0;
  bool converged = false;
};

/// Damped Newton on F(x) = 0 with step halving until ||F|| decreases.
/// Throws iteration_error after maxit iterations without reaching tol, and
/// on a numerically singular Jacobian.
NewtonResult damped_newton(const VectorFn& f, const JacobianFn& jac,
                           std::vector<double> x0, double tol, int maxit);

/// Central-difference Jacobian with one Richardson level; step scales with
/// cbrt(machine epsilon) times the per-component magnitude.
JacobianFn finite_difference_jacobian(const VectorFn& f);

// ---------------------------------------------------------------------------
// Affine fits and finite differences
// ---------------------------------------------------------------------------

struct AffineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rms_residual = 0.0;
};

/// Least-squares line through (t_i, y_i); requires at least two distinct t.
AffineFit fit_affine(const std::vector<double>& t, const std::vector<double>& y);

/// Central difference with one Richardson extrapolation level.
double central_derivative(const std::function<double(double)>& f, double x, double h);

}  // namespace lefspec
