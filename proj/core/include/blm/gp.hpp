#pragma once

#include <functional>
#include <vector>

#include "blm/predictive.hpp"

namespace blm {

/// Stationary isotropic correlation family plus a relative (lambda-scaled)
/// nugget. Conventions, fixed here once:
///   squared-exponential  k(d) = exp(-(d/l)^2)
///   exponential          k(d) = exp(-d/l)
///   matern-3/2           k(d) = (1 + sqrt(3) d/l) exp(-sqrt(3) d/l)
/// The nugget enters only on the diagonal of the training covariance.
struct KernelSpec {
  enum class Family { SquaredExponential, Exponential, Matern32 };

  KernelSpec(Family family, double lengthscale, double nugget = 0.0);

  Family family;
  double lengthscale;
  double nugget;
};

/// Observations y(x_i) at locations x_i (rows), plus the regressor map
/// phi used to build the design matrix. Default phi(x) = [1, x_1, ..., x_q].
struct GpDataset {
  GpDataset(MatrixXd locations, VectorXd response);
  GpDataset(MatrixXd locations, VectorXd response,
            std::function<VectorXd(const VectorXd&)> regressor);

  MatrixXd locations;
  VectorXd response;
  std::function<VectorXd(const VectorXd&)> regressor;

  int n() const { return static_cast<int>(locations.rows()); }
  /// Design matrix X = (phi(x_i)).
  MatrixXd design() const;
};

/// Correlation value at distance d >= 0, without the nugget.
double kernel_eval(const KernelSpec& kernel, double d);

/// Training correlation Sigma_ij = k(d(x_i, x_j)) + nugget * delta_ij.
SpdMatrix kernel_correlation(const KernelSpec& kernel, const MatrixXd& locations);

/// Builds Sigma from the kernel and delegates to posterior_update. With a
/// zero nugget, duplicate locations make Sigma singular; the error message
/// points at the nugget.
PosteriorSummary gp_fit(const GpDataset& data, const KernelSpec& kernel,
                        const NormalGammaParams& prior);

/// Predictive t at each grid row: Xm = phi(x), v = [k(d(x, x_i))]_i,
/// Am_inv = 1 + nugget. With a continuous kernel and zero nugget the
/// mean interpolates the data with vanishing dispersion at training points.
std::vector<PredictiveT> gp_predict(const PosteriorSummary& fit, const GpDataset& data,
                                    const KernelSpec& kernel, const MatrixXd& grid);

/// Known-lambda counterpart of gp_predict.
std::vector<PredictiveNormal> gp_predict_known_lambda(const PosteriorSummary& fit,
                                                      const GpDataset& data,
                                                      const KernelSpec& kernel,
                                                      const MatrixXd& grid, double lambda);

}  // namespace blm
