#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "lefspec/radial_lab.hpp"

using namespace lefspec;

static void BM_GaussLegendre(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gauss_legendre(k, 0.0, 1.0));
  }
}
BENCHMARK(BM_GaussLegendre)->Arg(32)->Arg(128);

static void BM_SphereQuadrature(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Point c(static_cast<std::size_t>(n), 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sphere_quadrature(n, c, 1.0, 32));
  }
}
BENCHMARK(BM_SphereQuadrature)->Arg(3)->Arg(4)->Arg(5);

static void BM_JacobiEigen(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::mt19937 rng(1);
  std::normal_distribution<double> gauss;
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m.set(i, j, gauss(rng));
  for (auto _ : state) {
    benchmark::DoNotOptimize(jacobi_eigen(m));
  }
}
BENCHMARK(BM_JacobiEigen)->Arg(8)->Arg(24);

static void BM_RadialSolve(benchmark::State& state) {
  const int n = 4;
  const double eps = 0.05;
  const ConstantsTable t = build_constants(n);
  const double lam0 = std::pow(t.C0 / t.gamma_n, 0.5);
  const RadialMesh mesh = RadialMesh::make(8.0 * lam0 * std::sqrt(eps), 400, 400);
  const ProblemParams params = ProblemParams::make(n, eps);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_radial(params, mesh));
  }
}
BENCHMARK(BM_RadialSolve);

static void BM_SectorEigen(benchmark::State& state) {
  const int n = 4;
  const double eps = 0.05;
  const ConstantsTable t = build_constants(n);
  const double lam0 = std::pow(t.C0 / t.gamma_n, 0.5);
  const RadialMesh mesh = RadialMesh::make(8.0 * lam0 * std::sqrt(eps), 400, 400);
  const ProblemParams params = ProblemParams::make(n, eps);
  const RadialSolution sol = solve_radial(params, mesh);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sector_eigen(sol, 1, 1));
  }
}
BENCHMARK(BM_SectorEigen);

BENCHMARK_MAIN();
