#include "blm/gp.hpp"

#include <cmath>

#include "doctest.h"
#include "test_util.hpp"

using namespace blm;
using blmtest::random_matrix;
using blmtest::random_vector;

namespace {

NormalGammaParams diffuse_prior(int p) {
  return NormalGammaParams(VectorXd::Zero(p),
                           SpdMatrix(MatrixXd(0.001 * MatrixXd::Identity(p, p))), 1.0, 1.0);
}

/// y(x) = sin(2 pi x) sampled on a line.
GpDataset line_dataset(int n) {
  MatrixXd locations(n, 1);
  VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    locations(i, 0) = static_cast<double>(i + 1) / n;
    y(i) = std::sin(2.0 * std::numbers::pi * locations(i, 0));
  }
  return GpDataset(std::move(locations), std::move(y));
}

}  // namespace

TEST_CASE("kernel_eval: conventions") {
  for (auto family : {KernelSpec::Family::SquaredExponential, KernelSpec::Family::Exponential,
                      KernelSpec::Family::Matern32}) {
    CHECK(kernel_eval(KernelSpec(family, 0.7), 0.0) == doctest::Approx(1.0));
  }
  CHECK(kernel_eval(KernelSpec(KernelSpec::Family::SquaredExponential, 1.0), 1.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(kernel_eval(KernelSpec(KernelSpec::Family::Exponential, 2.0), 2.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  const double s = std::numbers::sqrt3 * 0.5;
  CHECK(kernel_eval(KernelSpec(KernelSpec::Family::Matern32, 2.0), 1.0) ==
        doctest::Approx((1.0 + s) * std::exp(-s)).epsilon(1e-14));

  CHECK_THROWS_AS((void)KernelSpec(KernelSpec::Family::Exponential, 0.0), DomainError);
  CHECK_THROWS_AS((void)KernelSpec(KernelSpec::Family::Exponential, 1.0, -0.1), DomainError);
}

TEST_CASE("kernel_correlation matches elementwise evaluation") {
  const KernelSpec kernel(KernelSpec::Family::SquaredExponential, 0.5, 0.01);
  MatrixXd locations(5, 1);
  locations << 0.1, 0.3, 0.4, 0.8, 1.0;
  const SpdMatrix sigma = kernel_correlation(kernel, locations);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double d = std::abs(locations(i, 0) - locations(j, 0));
      const double expected = std::exp(-std::pow(d / 0.5, 2)) + (i == j ? 0.01 : 0.0);
      CHECK(sigma(i, j) == doctest::Approx(expected).epsilon(1e-14));
    }
  }
}

TEST_CASE("gp_fit: single point equals the direct one-observation update") {
  MatrixXd loc(1, 1);
  loc << 0.4;
  const GpDataset data(loc, VectorXd::Constant(1, 2.0));
  const KernelSpec kernel(KernelSpec::Family::Exponential, 1.0, 0.3);
  const NormalGammaParams prior = diffuse_prior(2);

  const PosteriorSummary via_gp = gp_fit(data, kernel, prior);
  const PosteriorSummary direct = posterior_update(
      prior, ModelSpec(data.design(), SpdMatrix(MatrixXd::Constant(1, 1, 1.3))),
      VectorXd::Constant(1, 2.0));
  CHECK((via_gp.posterior.theta - direct.posterior.theta).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(via_gp.posterior.rate == doctest::Approx(direct.posterior.rate).epsilon(1e-14));
}

TEST_CASE("gp_fit: coincident points without a nugget are singular") {
  MatrixXd loc(2, 1);
  loc << 0.5, 0.5;
  const GpDataset data(loc, VectorXd::Ones(2));
  const KernelSpec kernel(KernelSpec::Family::SquaredExponential, 1.0, 0.0);
  try {
    gp_fit(data, kernel, diffuse_prior(2));
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(std::string(e.what()).find("nugget") != std::string::npos);
  }
}

TEST_CASE("gp_predict: interpolates the data when the nugget is zero") {
  const GpDataset data = line_dataset(8);
  const KernelSpec kernel(KernelSpec::Family::SquaredExponential, 0.5, 0.0);
  const PosteriorSummary fit = gp_fit(data, kernel, diffuse_prior(2));

  const auto preds = gp_predict(fit, data, kernel, data.locations);
  REQUIRE(preds.size() == 8);
  for (int i = 0; i < 8; ++i) {
    CHECK(std::abs(preds[i].mean(0) - data.response(i)) < 1e-6);
    CHECK(preds[i].dispersion(0, 0) < 1e-8);
  }
}

TEST_CASE("gp_predict: a positive nugget breaks interpolation") {
  const GpDataset data = line_dataset(8);
  const KernelSpec kernel(KernelSpec::Family::SquaredExponential, 0.5, 0.01);
  const PosteriorSummary fit = gp_fit(data, kernel, diffuse_prior(2));
  const auto preds = gp_predict(fit, data, kernel, data.locations);
  for (const auto& pred : preds) {
    CHECK(pred.dispersion(0, 0) > 1e-4);
  }
}

TEST_CASE("gp_predict: far from the data the mean falls back to the regression") {
  const GpDataset data = line_dataset(6);
  const double ell = 0.1;
  const KernelSpec kernel(KernelSpec::Family::SquaredExponential, ell, 0.0);
  const PosteriorSummary fit = gp_fit(data, kernel, diffuse_prior(2));

  MatrixXd far(1, 1);
  far << 1.0 + 20.0 * ell;
  const auto preds = gp_predict(fit, data, kernel, far);
  const double regression =
      fit.posterior.theta(0) + fit.posterior.theta(1) * far(0, 0);
  CHECK(std::abs(preds[0].mean(0) - regression) < 1e-6);
}

TEST_CASE("gp_predict: invariant under permuting the training points") {
  std::mt19937_64 rng(64);
  const int n = 10;
  MatrixXd loc = random_matrix(rng, n, 2);
  VectorXd y = random_vector(rng, n);
  const KernelSpec kernel(KernelSpec::Family::Matern32, 0.8, 1e-6);
  const MatrixXd grid = random_matrix(rng, 4, 2);
  const NormalGammaParams prior = diffuse_prior(3);

  const GpDataset data(loc, y);
  const auto base = gp_predict(gp_fit(data, kernel, prior), data, kernel, grid);

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  MatrixXd loc_p(n, 2);
  VectorXd y_p(n);
  for (int i = 0; i < n; ++i) {
    loc_p.row(i) = loc.row(order[i]);
    y_p(i) = y(order[i]);
  }
  const GpDataset shuffled(loc_p, y_p);
  const auto perm = gp_predict(gp_fit(shuffled, kernel, prior), shuffled, kernel, grid);

  for (int g = 0; g < 4; ++g) {
    CHECK(perm[g].mean(0) == doctest::Approx(base[g].mean(0)).epsilon(1e-10));
    CHECK(perm[g].dispersion(0, 0) ==
          doctest::Approx(base[g].dispersion(0, 0)).epsilon(1e-10));
  }
}

TEST_CASE("gp_predict: mean is linear in the responses under a zero prior mean") {
  std::mt19937_64 rng(12);
  const int n = 7;
  const MatrixXd loc = random_matrix(rng, n, 1);
  const VectorXd y1 = random_vector(rng, n);
  const VectorXd y2 = random_vector(rng, n);
  const KernelSpec kernel(KernelSpec::Family::Exponential, 1.2, 1e-8);
  const NormalGammaParams prior = diffuse_prior(2);
  const MatrixXd grid = random_matrix(rng, 3, 1);

  const auto predict_mean = [&](const VectorXd& y) {
    const GpDataset data(loc, y);
    const auto preds = gp_predict(gp_fit(data, kernel, prior), data, kernel, grid);
    VectorXd means(3);
    for (int g = 0; g < 3; ++g) means(g) = preds[g].mean(0);
    return means;
  };
  const VectorXd lhs = predict_mean(y1 + y2);
  const VectorXd rhs = predict_mean(y1) + predict_mean(y2);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("kernel correlation is SPD for all families on jittered random clouds") {
  std::mt19937_64 rng(2025);
  for (auto family : {KernelSpec::Family::SquaredExponential, KernelSpec::Family::Exponential,
                      KernelSpec::Family::Matern32}) {
    const int n = 100;
    const MatrixXd loc = random_matrix(rng, n, 3);
    const KernelSpec kernel(family, 0.5, 1e-10);
    CHECK_NOTHROW(cholesky(kernel_correlation(kernel, loc)));
  }
}
