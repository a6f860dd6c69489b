#include "blm/distributions.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "blm/special_functions.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace blm;
using blmtest::adaptive_simpson;
using blmtest::random_spd;
using blmtest::random_vector;

namespace {

MvT scalar_t(double nu, double mu, double disp) {
  return MvT(nu, VectorXd::Constant(1, mu), SpdMatrix(MatrixXd::Constant(1, 1, disp)));
}

}  // namespace

TEST_CASE("log_gamma matches the C library to 1e-13 relative") {
  for (double x : {0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 25.5, 101.0, 1000.0}) {
    CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
}

TEST_CASE("mvn_logpdf: examples") {
  const MvNormal std1(VectorXd::Zero(1), LowerTriangular::identity(1));
  CHECK(mvn_logpdf(std1, VectorXd::Zero(1)) ==
        doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi)).epsilon(1e-14));

  const MvNormal shifted = MvNormal::from_covariance(
      VectorXd::Constant(1, 1.0), SpdMatrix(MatrixXd::Constant(1, 1, 4.0)));
  CHECK(mvn_logpdf(shifted, VectorXd::Constant(1, 3.0)) ==
        doctest::Approx(-0.5 * std::log(8.0 * std::numbers::pi) - 0.5).epsilon(1e-14));

  const MvNormal std2(VectorXd::Zero(2), LowerTriangular::identity(2));
  CHECK(mvn_logpdf(std2, VectorXd::Zero(2)) ==
        doctest::Approx(-std::log(2.0 * std::numbers::pi)).epsilon(1e-14));

  CHECK_THROWS_AS(mvn_logpdf(std2, VectorXd::Zero(3)), DimensionMismatch);
}

TEST_CASE("mvt_logpdf: scalar hand cases") {
  CHECK(mvt_logpdf(scalar_t(2.0, 0.0, 2.0), VectorXd::Constant(1, 2.0)) ==
        doctest::Approx(-3.5 * std::log(2.0)).epsilon(1e-13));

  for (double nu : {0.7, 1.0, 3.0, 12.0}) {
    const double at_center = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                             0.5 * std::log(nu * std::numbers::pi);
    CHECK(mvt_logpdf(scalar_t(nu, 0.0, 1.0), VectorXd::Zero(1)) ==
          doctest::Approx(at_center).epsilon(1e-13));
  }

  // Cauchy density 1/(pi (1 + y^2)) at 1.
  CHECK(mvt_logpdf(scalar_t(1.0, 0.0, 1.0), VectorXd::Constant(1, 1.0)) ==
        doctest::Approx(std::log(1.0 / (2.0 * std::numbers::pi))).epsilon(1e-13));
}

TEST_CASE("mvt_logpdf: 1-D density integrates to one") {
  for (double nu : {1.0, 2.0, 5.0, 30.0}) {
    const MvT d = scalar_t(nu, 0.0, 1.0);
    const auto integrand = [&](double u) {
      const double x = std::tan(u);
      const double jac = 1.0 + x * x;
      return std::exp(mvt_logpdf(d, VectorXd::Constant(1, x))) * jac;
    };
    const double half_pi = 0.5 * std::numbers::pi;
    const double total = adaptive_simpson(integrand, -half_pi + 1e-10, half_pi - 1e-10, 1e-9);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("mvt_logpdf: invariant under joint coordinate permutation") {
  std::mt19937_64 rng(31);
  const int n = 5;
  const VectorXd mu = random_vector(rng, n);
  const MatrixXd d = random_spd(rng, n);
  const VectorXd y = random_vector(rng, n);
  const double reference = mvt_logpdf(MvT(3.5, mu, SpdMatrix(d)), y);

  Eigen::PermutationMatrix<Eigen::Dynamic> perm(n);
  perm.setIdentity();
  std::shuffle(perm.indices().data(), perm.indices().data() + n, rng);
  const MatrixXd pd = perm * d * perm.transpose();
  const double permuted = mvt_logpdf(MvT(3.5, perm * mu, SpdMatrix(pd)), VectorXd(perm * y));
  CHECK(permuted == doctest::Approx(reference).epsilon(1e-12));
}

TEST_CASE("MvT second moments exist only beyond two degrees of freedom") {
  CHECK(!scalar_t(2.0, 0.0, 1.0).covariance().has_value());
  const auto cov = scalar_t(5.0, 0.0, 2.0).covariance();
  REQUIRE(cov.has_value());
  CHECK((*cov)(0, 0) == doctest::Approx(5.0 / 3.0 * 2.0));
}

TEST_CASE("gamma_logpdf: examples") {
  CHECK(gamma_logpdf(GammaDist(1.0, 1.0), 1.0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(gamma_logpdf(GammaDist(1.0, 2.0), 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(gamma_logpdf(GammaDist(2.0, 3.0), 1.0) ==
        doctest::Approx(std::log(9.0) - 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_logpdf(GammaDist(2.0, 3.0), -0.1), NegativeSupport);
}

TEST_CASE("gamma moments: seeded Monte Carlo within three standard errors") {
  const double alpha = 2.5, beta = 1.7;
  const int n = 100000;
  std::mt19937_64 rng(4242);
  std::gamma_distribution<double> dist(alpha, 1.0 / beta);
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = dist(rng);
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;

  const double true_mean = alpha / beta;
  const double true_var = alpha / (beta * beta);
  const double se_mean = std::sqrt(true_var / n);
  // Var of the sample variance from the gamma fourth central moment.
  const double mu4 = 3.0 * alpha * (alpha + 2.0) / std::pow(beta, 4);
  const double se_var = std::sqrt((mu4 - true_var * true_var) / n);

  CHECK(std::abs(mean - true_mean) < 3.0 * se_mean);
  CHECK(std::abs(var - true_var) < 3.0 * se_var);
}

TEST_CASE("t_quantile: examples") {
  CHECK(t_quantile(7.3, 0.5) == 0.0);
  CHECK(t_quantile(1.0, 0.75) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(t_quantile(1e6, 0.975) == doctest::Approx(1.959966).epsilon(1e-3));
  CHECK_THROWS_AS(t_quantile(2.0, 0.0), DomainError);
  CHECK_THROWS_AS(t_quantile(2.0, 1.0), DomainError);
}

TEST_CASE("t_quantile and t_cdf invert each other") {
  for (double nu : {0.5, 1.0, 2.0, 4.5, 30.0, 1e6}) {
    for (double p : {0.005, 0.05, 0.25, 0.5, 0.9, 0.975, 0.999}) {
      CHECK(t_cdf(nu, t_quantile(nu, p)) == doctest::Approx(p).epsilon(1e-7));
    }
  }
}

TEST_CASE("normal_quantile inverts normal_cdf") {
  for (double p : {1e-6, 0.01, 0.3, 0.5, 0.8, 0.999999}) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963985).epsilon(1e-8));
}
