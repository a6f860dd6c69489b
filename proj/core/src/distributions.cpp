#include "blm/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "blm/special_functions.hpp"

namespace blm {

namespace {

void check_dim(int have, int want, const char* who) {
  if (have != want) {
    throw DimensionMismatch(std::string(who) + ": point has length " + std::to_string(have) +
                            " but the distribution is " + std::to_string(want) + "-dimensional");
  }
}

}  // namespace

MvNormal::MvNormal(VectorXd mean, LowerTriangular covariance_factor)
    : mean_(std::move(mean)), factor_(std::move(covariance_factor)) {
  if (factor_.dim() != static_cast<int>(mean_.size())) {
    throw DimensionMismatch("MvNormal: factor dimension " + std::to_string(factor_.dim()) +
                            " does not match mean length " + std::to_string(mean_.size()));
  }
}

MvNormal MvNormal::from_covariance(VectorXd mean, const SpdMatrix& covariance) {
  return MvNormal(std::move(mean), cholesky(covariance));
}

MvT::MvT(double dof, VectorXd mean, SpdMatrix dispersion)
    : dof_(dof),
      mean_(std::move(mean)),
      dispersion_(std::move(dispersion)),
      factor_(cholesky(dispersion_)) {
  if (!(dof_ > 0.0)) {
    throw DomainError("MvT: degrees of freedom must be positive, got " + std::to_string(dof_));
  }
  if (dispersion_.dim() != static_cast<int>(mean_.size())) {
    throw DimensionMismatch("MvT: dispersion dimension does not match mean length");
  }
}

std::optional<MatrixXd> MvT::covariance() const {
  if (dof_ <= 2.0) return std::nullopt;
  return MatrixXd(dof_ / (dof_ - 2.0) * dispersion_.matrix());
}

GammaDist::GammaDist(double shape, double rate) : shape(shape), rate(rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw DomainError("GammaDist: shape and rate must be positive");
  }
}

double mvn_logpdf(const MvNormal& d, const VectorXd& y) {
  check_dim(static_cast<int>(y.size()), d.dim(), "mvn_logpdf");
  const int n = d.dim();
  const double quad = inv_quad_form(d.covariance_factor(), y - d.mean());
  return -0.5 * (n * std::log(2.0 * std::numbers::pi) +
                 logdet_from_chol(d.covariance_factor()) + quad);
}

double mvt_logpdf(const MvT& d, const VectorXd& y) {
  check_dim(static_cast<int>(y.size()), d.dim(), "mvt_logpdf");
  const int n = d.dim();
  const double nu = d.dof();
  const double quad = inv_quad_form(d.factor_, y - d.mean());
  // |nu D| = nu^n |D|.
  const double logdet_nu_d = n * std::log(nu) + logdet_from_chol(d.factor_);
  return -0.5 * n * std::log(std::numbers::pi) - 0.5 * logdet_nu_d +
         log_gamma(0.5 * (nu + n)) - log_gamma(0.5 * nu) -
         0.5 * (nu + n) * std::log1p(quad / nu);
}

double gamma_logpdf(const GammaDist& d, double y) {
  if (y < 0.0) {
    throw NegativeSupport("gamma_logpdf: support is [0,inf), got " + std::to_string(y));
  }
  if (y == 0.0) {
    if (d.shape == 1.0) return std::log(d.rate);
    return d.shape > 1.0 ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
  }
  return d.shape * std::log(d.rate) - log_gamma(d.shape) + (d.shape - 1.0) * std::log(y) -
         d.rate * y;
}

double t_cdf(double nu, double x) {
  if (!(nu > 0.0)) {
    throw DomainError("t_cdf: degrees of freedom must be positive");
  }
  if (x == 0.0) return 0.5;
  const double ib = incomplete_beta(0.5 * nu, 0.5, nu / (nu + x * x));
  return x > 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

double t_quantile(double nu, double p) {
  if (!(nu > 0.0)) {
    throw DomainError("t_quantile: degrees of freedom must be positive");
  }
  if (!(p > 0.0) || !(p < 1.0)) {
    throw DomainError("t_quantile: p must lie strictly inside (0,1), got " + std::to_string(p));
  }
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -t_quantile(nu, 1.0 - p);

  // Bracket [0, hi] starting from the normal approximation, widened until it
  // actually contains the root (heavy tails can exceed any fixed multiple).
  double hi = std::max(1.0, 10.0 * normal_quantile(p));
  for (int i = 0; i < 1100 && t_cdf(nu, hi) < p; ++i) {
    hi *= 2.0;
  }
  double lo = 0.0;
  for (int i = 0; i < 200 && (hi - lo) > 1e-10 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (t_cdf(nu, mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace blm
