#include "blm/gp.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace blm {

KernelSpec::KernelSpec(Family family_in, double lengthscale_in, double nugget_in)
    : family(family_in), lengthscale(lengthscale_in), nugget(nugget_in) {
  if (!(lengthscale > 0.0)) {
    throw DomainError("KernelSpec: lengthscale must be positive");
  }
  if (nugget < 0.0) {
    throw DomainError("KernelSpec: nugget must be nonnegative");
  }
}

namespace {

VectorXd default_regressor(const VectorXd& x) {
  VectorXd phi(x.size() + 1);
  phi(0) = 1.0;
  phi.tail(x.size()) = x;
  return phi;
}

}  // namespace

GpDataset::GpDataset(MatrixXd locations_in, VectorXd response_in)
    : GpDataset(std::move(locations_in), std::move(response_in), default_regressor) {}

GpDataset::GpDataset(MatrixXd locations_in, VectorXd response_in,
                     std::function<VectorXd(const VectorXd&)> regressor_in)
    : locations(std::move(locations_in)),
      response(std::move(response_in)),
      regressor(std::move(regressor_in)) {
  if (locations.rows() != response.size()) {
    throw DimensionMismatch("GpDataset: " + std::to_string(locations.rows()) +
                            " locations but " + std::to_string(response.size()) + " responses");
  }
  if (locations.rows() < 1) {
    throw DimensionMismatch("GpDataset: need at least one observation");
  }
}

MatrixXd GpDataset::design() const {
  const VectorXd first = regressor(VectorXd(locations.row(0)));
  MatrixXd X(n(), first.size());
  X.row(0) = first;
  for (int i = 1; i < n(); ++i) {
    X.row(i) = regressor(VectorXd(locations.row(i)));
  }
  return X;
}

double kernel_eval(const KernelSpec& kernel, double d) {
  if (d < 0.0) {
    throw DomainError("kernel_eval: distance must be nonnegative");
  }
  const double r = d / kernel.lengthscale;
  switch (kernel.family) {
    case KernelSpec::Family::SquaredExponential:
      return std::exp(-r * r);
    case KernelSpec::Family::Exponential:
      return std::exp(-r);
    case KernelSpec::Family::Matern32: {
      const double s = std::numbers::sqrt3 * r;
      return (1.0 + s) * std::exp(-s);
    }
  }
  throw DomainError("kernel_eval: unknown kernel family");
}

SpdMatrix kernel_correlation(const KernelSpec& kernel, const MatrixXd& locations) {
  const int n = static_cast<int>(locations.rows());
  MatrixXd sigma(n, n);
  for (int i = 0; i < n; ++i) {
    sigma(i, i) = 1.0 + kernel.nugget;
    for (int j = 0; j < i; ++j) {
      const double d = (locations.row(i) - locations.row(j)).norm();
      sigma(i, j) = sigma(j, i) = kernel_eval(kernel, d);
    }
  }
  return SpdMatrix(std::move(sigma));
}

PosteriorSummary gp_fit(const GpDataset& data, const KernelSpec& kernel,
                        const NormalGammaParams& prior) {
  const SpdMatrix sigma = kernel_correlation(kernel, data.locations);
  try {
    return posterior_update(prior, ModelSpec(data.design(), sigma), data.response);
  } catch (const NotPositiveDefinite& e) {
    throw NotPositiveDefinite(
        std::string(e.what()) +
            " (kernel correlation is singular; duplicate locations? a positive nugget "
            "regularizes it)",
        e.column);
  }
}

namespace {

PredictionTarget grid_point_target(const ModelSpec& model, const GpDataset& data,
                                   const KernelSpec& kernel, const VectorXd& x) {
  const VectorXd phi = data.regressor(x);
  MatrixXd Xm(1, phi.size());
  Xm.row(0) = phi;
  MatrixXd v(data.n(), 1);
  for (int i = 0; i < data.n(); ++i) {
    v(i, 0) = kernel_eval(kernel, (x.transpose() - data.locations.row(i)).norm());
  }
  const SpdMatrix am_inv(MatrixXd::Constant(1, 1, 1.0 + kernel.nugget));
  return PredictionTarget::correlated(model, std::move(Xm), v, am_inv);
}

ModelSpec rebuild_model(const GpDataset& data, const KernelSpec& kernel) {
  return ModelSpec(data.design(), kernel_correlation(kernel, data.locations));
}

}  // namespace

std::vector<PredictiveT> gp_predict(const PosteriorSummary& fit, const GpDataset& data,
                                    const KernelSpec& kernel, const MatrixXd& grid) {
  if (grid.cols() != data.locations.cols()) {
    throw DimensionMismatch("gp_predict: grid points have " + std::to_string(grid.cols()) +
                            " coordinates but the data lives in " +
                            std::to_string(data.locations.cols()) + " dimensions");
  }
  const ModelSpec model = rebuild_model(data, kernel);
  std::vector<PredictiveT> out;
  out.reserve(grid.rows());
  for (int g = 0; g < grid.rows(); ++g) {
    out.push_back(predict_t(fit, grid_point_target(model, data, kernel, VectorXd(grid.row(g)))));
  }
  return out;
}

std::vector<PredictiveNormal> gp_predict_known_lambda(const PosteriorSummary& fit,
                                                      const GpDataset& data,
                                                      const KernelSpec& kernel,
                                                      const MatrixXd& grid, double lambda) {
  if (grid.cols() != data.locations.cols()) {
    throw DimensionMismatch("gp_predict_known_lambda: grid points have " +
                            std::to_string(grid.cols()) + " coordinates but the data lives in " +
                            std::to_string(data.locations.cols()) + " dimensions");
  }
  const ModelSpec model = rebuild_model(data, kernel);
  std::vector<PredictiveNormal> out;
  out.reserve(grid.rows());
  for (int g = 0; g < grid.rows(); ++g) {
    out.push_back(predict_known_lambda(
        fit, grid_point_target(model, data, kernel, VectorXd(grid.row(g))), lambda));
  }
  return out;
}

}  // namespace blm
