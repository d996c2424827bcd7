#include <benchmark/benchmark.h>

#include <random>

#include "gsynth/dynamics.hpp"
#include "gsynth/numerics.hpp"
#include "gsynth/synthesis.hpp"

namespace {

using namespace gsynth;

GraphMatrix product_of_pairs(int pairs) {
  const double r6 = std::sqrt(6.0) / 2.0;
  const Eigen::Index n = 2 * pairs;
  RealMatrix x = RealMatrix::Zero(n, n), y = RealMatrix::Zero(n, n);
  for (Eigen::Index g = 0; g < pairs; ++g) {
    const Eigen::Index a = 2 * g, b = 2 * g + 1;
    x(a, a) = x(b, b) = 1;
    x(a, b) = x(b, a) = r6;
    y(a, a) = y(b, b) = r6;
    y(a, b) = y(b, a) = 1;
  }
  return GraphMatrix(x, y);
}

std::vector<double> sample_times(int count) {
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) t[static_cast<std::size_t>(k)] = 0.5 * k;
  return t;
}

void BM_Evolve(benchmark::State& state) {
  const Realization r = synthesize(product_of_pairs(static_cast<int>(state.range(0))));
  const MomentSystem ms = build_moment_system(r.G, r.C);
  const auto v0 = CovarianceMatrix::vacuum(r.modes());
  const RealVector m0 = RealVector::Zero(ms.A.rows());
  const auto times = sample_times(64);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(ms, v0, m0, times));
}

void BM_EvolveSerial(benchmark::State& state) {
  const Realization r = synthesize(product_of_pairs(static_cast<int>(state.range(0))));
  const MomentSystem ms = build_moment_system(r.G, r.C);
  const auto v0 = CovarianceMatrix::vacuum(r.modes());
  const RealVector m0 = RealVector::Zero(ms.A.rows());
  const auto times = sample_times(64);
  for (auto _ : state) benchmark::DoNotOptimize(serial::evolve(ms, v0, m0, times));
}

RealMatrix random_matrix(Eigen::Index n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  RealMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = g(rng);
  return a;
}

void BM_KroneckerSum(benchmark::State& state) {
  const RealMatrix a = random_matrix(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kronecker_sum(a));
}

void BM_KroneckerSumSerial(benchmark::State& state) {
  const RealMatrix a = random_matrix(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(serial::kronecker_sum(a));
}

}  // namespace

BENCHMARK(BM_Evolve)->Arg(1)->Arg(4)->Arg(8);
BENCHMARK(BM_EvolveSerial)->Arg(1)->Arg(4)->Arg(8);
BENCHMARK(BM_KroneckerSum)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_KroneckerSumSerial)->Arg(8)->Arg(16)->Arg(32);

BENCHMARK_MAIN();
