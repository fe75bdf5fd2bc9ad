#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lefspec/constants.hpp"
#include "lefspec/green.hpp"
#include "lefspec/numerics.hpp"

namespace lefspec {

/// Candidate multi-bubble configuration: m rates and m interior centers.
struct Configuration {
  int n = 3;
  int m = 1;
  std::vector<double> lambdas;
  std::vector<Point> points;

  void validate(const GreenOracle& oracle) const;
};

/// Reduced energy of a configuration:
///   c1 ( sum_i tau(x_i) l_i^{n-2} - sum_{i != j} G(x_i,x_j) (l_i l_j)^{(n-2)/2} )
///   - c2 log(l_1 ... l_m).
double upsilon(const Configuration& cfg, const GreenOracle& oracle, const ConstantsTable& table);

/// Gradient in (lambda_1..lambda_m, x_1..x_m); length m + m*n.
std::vector<double> upsilon_grad(const Configuration& cfg, const GreenOracle& oracle,
                                 const ConstantsTable& table);

/// Newton search for a stationary configuration, with rates parameterized by
/// log(lambda) so positivity is automatic. Throws iteration_error when no
/// critical point is found (divergence or escape of the rates).
Configuration find_critical(const Configuration& cfg0, const GreenOracle& oracle,
                            const ConstantsTable& table, double tol = 1e-10, int maxit = 200);

/// The matrices controlling the three eigenvalue bands, built at a stationary
/// configuration, plus their spectra.
struct ReductionMatrices {
  int n = 0;
  int m = 0;
  SymmetricMatrix A1;  // m x m, first band
  SymmetricMatrix M1;  // m x m, positive definite weight matrix
  SymmetricMatrix M2;  // m x m, nonnegative definite part
  std::vector<std::vector<double>> P;  // m x mn coupling block
  SymmetricMatrix Q;   // mn x mn second-derivative block
  SymmetricMatrix A2;  // mn x mn, = P^T M1^{-1} P + Q, middle band
  SymmetricMatrix A3;  // m x m, last band
  double q_symmetry_gap = 0.0;  // worst |Q_st - Q_ts| before symmetrization
  bool m1_positive_definite = false;
  double m2_min_eigenvalue = 0.0;
};

struct BandSpectra {
  std::vector<double> rho1;  // ascending
  std::vector<double> rho2;
  std::vector<double> rho3;
  std::vector<std::vector<double>> c_vectors;      // eigenvectors of A1 (unit length)
  std::vector<std::vector<double>> d_vectors;      // eigenvectors of A2
  std::vector<std::vector<double>> d_hat_vectors;  // eigenvectors of A3
};

/// Assemble all matrices at a stationary configuration; throws when the
/// gradient is not below the stationarity tolerance or M1 fails to be SPD.
ReductionMatrices build_matrices(const Configuration& cfg, const GreenOracle& oracle,
                                 const ConstantsTable& table, double stationarity_tol = 1e-8);

BandSpectra spectra(const ReductionMatrices& mat);

enum class Band { first_m, middle_mn, last_m };

/// Asymptotic law of one eigenvalue: mu(eps) = base + slope * eps^exponent.
struct SpectralPrediction {
  Band band = Band::first_m;
  int index = 0;   // 1-based position in the global nondecreasing list
  double base = 0.0;
  double slope = 0.0;
  double exponent = 1.0;
  double rho = 0.0;  // matrix eigenvalue feeding the law

  double evaluate(double eps) const;
};

/// All (n+2)m predictions: m first-band, mn middle-band, m last-band laws.
std::vector<SpectralPrediction> predict(const BandSpectra& sp, const ConstantsTable& table, int n,
                                        int m);

struct MorseBounds {
  int lower = 0;
  int upper = 0;
  bool nondegenerate = false;
  std::optional<int> exact;
};

/// Index bounds m + ind(-A2) <= ind <= m + ind0(-A2) from the middle-band
/// spectrum; tol_zero separates structural zeros from noise (default
/// 1e-9 ||A2||_F).
MorseBounds morse_bounds(const ReductionMatrices& mat, const BandSpectra& sp,
                         std::optional<double> tol_zero = std::nullopt);

}  // namespace lefspec
