#include <benchmark/benchmark.h>

#include <random>

#include "blm/linalg.hpp"

namespace {

using blm::MatrixXd;
using blm::VectorXd;

MatrixXd random_spd(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = normal(rng);
  MatrixXd spd = m * m.transpose() + n * MatrixXd::Identity(n, n);
  return spd;
}

void BM_Cholesky(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const blm::SpdMatrix m(random_spd(n, 7));
  for (auto _ : state) {
    benchmark::DoNotOptimize(blm::cholesky(m));
  }
}
BENCHMARK(BM_Cholesky)->Arg(16)->Arg(64)->Arg(128)->Arg(256);

void BM_PrecisionFactor(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const blm::SpdMatrix m(random_spd(n, 11));
  for (auto _ : state) {
    benchmark::DoNotOptimize(blm::precision_factor(m));
  }
}
BENCHMARK(BM_PrecisionFactor)->Arg(16)->Arg(64)->Arg(128);

void BM_SpdInverse(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const blm::SpdMatrix m(random_spd(n, 13));
  for (auto _ : state) {
    benchmark::DoNotOptimize(blm::spd_inverse(m));
  }
}
BENCHMARK(BM_SpdInverse)->Arg(8)->Arg(32);

void BM_ForwardSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const blm::LowerTriangular L = blm::cholesky(blm::SpdMatrix(random_spd(n, 17)));
  const VectorXd b = VectorXd::LinSpaced(n, -1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(blm::forward_solve(L, b));
  }
}
BENCHMARK(BM_ForwardSolve)->Arg(64)->Arg(256);

}  // namespace
