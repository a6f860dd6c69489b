#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "blm/blm.hpp"

namespace {

using blm::MatrixXd;
using blm::VectorXd;

struct Fixture {
  MatrixXd X;
  VectorXd y;
  MatrixXd sigma;

  Fixture(int n, int p) : X(n, p), y(n), sigma(n, n) {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> normal;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < p; ++j) X(i, j) = normal(rng);
      y(i) = normal(rng);
      for (int j = 0; j <= i; ++j) {
        sigma(i, j) = sigma(j, i) = std::exp(-std::abs(i - j) / 10.0);
      }
    }
  }
};

blm::NormalGammaParams prior_for(int p) {
  return blm::NormalGammaParams(VectorXd::Zero(p),
                                blm::SpdMatrix(MatrixXd(0.001 * MatrixXd::Identity(p, p))),
                                1.0, 1.0);
}

void BM_PosteriorUpdateIdentity(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = 10;
  const Fixture fx(n, p);
  const blm::ModelSpec model = blm::ModelSpec::independent(fx.X);
  const blm::NormalGammaParams prior = prior_for(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(blm::posterior_update(prior, model, fx.y));
  }
}
BENCHMARK(BM_PosteriorUpdateIdentity)->Arg(50)->Arg(200)->Arg(1000);

void BM_PosteriorUpdateCorrelated(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = 10;
  const Fixture fx(n, p);
  const blm::NormalGammaParams prior = prior_for(p);
  for (auto _ : state) {
    // Includes the Sigma factorization, the dominant n^3 cost.
    const blm::ModelSpec model(fx.X, blm::SpdMatrix(fx.sigma));
    benchmark::DoNotOptimize(blm::posterior_update(prior, model, fx.y));
  }
}
BENCHMARK(BM_PosteriorUpdateCorrelated)->Arg(50)->Arg(200);

void BM_GpPredictGrid(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  MatrixXd loc(n, 1);
  VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    loc(i, 0) = static_cast<double>(i + 1) / n;
    y(i) = std::sin(2.0 * std::numbers::pi * loc(i, 0));
  }
  const blm::GpDataset data(loc, y);
  const blm::KernelSpec kernel(blm::KernelSpec::Family::SquaredExponential, 0.2, 1e-8);
  const blm::PosteriorSummary fit = blm::gp_fit(data, kernel, prior_for(2));
  MatrixXd grid(50, 1);
  for (int g = 0; g < 50; ++g) grid(g, 0) = (g + 0.5) / 50.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(blm::gp_predict(fit, data, kernel, grid));
  }
}
BENCHMARK(BM_GpPredictGrid)->Arg(50)->Arg(100);

void BM_DlmFilter(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  VectorXd ys(T);
  for (int t = 0; t < T; ++t) ys(t) = normal(rng);
  const blm::DlmSpec spec = blm::DlmSpec::constant(
      MatrixXd::Identity(2, 2), 0.01 * MatrixXd::Identity(2, 2), Eigen::RowVectorXd::Ones(2));
  const blm::DlmState start(0, VectorXd::Zero(2), blm::SpdMatrix::identity(2), 1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(blm::dlm_filter(spec, start, ys));
  }
}
BENCHMARK(BM_DlmFilter)->Arg(100)->Arg(1000);

void BM_TQuantile(benchmark::State& state) {
  double p = 0.5;
  for (auto _ : state) {
    p = 0.5 + 0.49 * std::abs(std::sin(p * 37.0));
    benchmark::DoNotOptimize(blm::t_quantile(4.5, p));
  }
}
BENCHMARK(BM_TQuantile);

}  // namespace
