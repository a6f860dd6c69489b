#include "blm/dlm.hpp"

#include <cmath>
#include <string>

namespace blm {

DlmState::DlmState(int t_in, VectorXd mean_in, SpdMatrix precision_in, double shape_in,
                   double rate_in)
    : t(t_in),
      mean(std::move(mean_in)),
      precision(std::move(precision_in)),
      shape(shape_in),
      rate(rate_in) {
  if (precision.dim() != dim()) {
    throw DimensionMismatch("DlmState: precision dimension does not match the state mean");
  }
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw DomainError("DlmState: shape and rate must be positive");
  }
}

DlmSpec DlmSpec::constant(MatrixXd G, MatrixXd W, Eigen::RowVectorXd phi) {
  return DlmSpec{[G = std::move(G)](int) { return G; }, [W = std::move(W)](int) { return W; },
                 [phi = std::move(phi)](int) { return phi; }};
}

namespace {

void check_system_dims(const DlmState& state, const MatrixXd& G, const MatrixXd& W) {
  const int p = state.dim();
  if (G.rows() != p || G.cols() != p) {
    throw DimensionMismatch("dlm: evolution matrix must be " + std::to_string(p) + "x" +
                            std::to_string(p));
  }
  if (W.rows() != p || W.cols() != p) {
    throw DimensionMismatch("dlm: system covariance must be " + std::to_string(p) + "x" +
                            std::to_string(p));
  }
}

/// G P^{-1} G' + W as a covariance, validated SPD by the inversion below.
SpdMatrix evolved_covariance(const DlmState& state, const MatrixXd& G, const MatrixXd& W) {
  const MatrixXd cov = spd_inverse(state.precision).matrix();
  MatrixXd evolved = G * cov * G.transpose() + W;
  return SpdMatrix((evolved + evolved.transpose()) / 2.0);
}

}  // namespace

DlmState dlm_evolve(const DlmState& state, const MatrixXd& G, const MatrixXd& W) {
  check_system_dims(state, G, W);
  const SpdMatrix evolved = evolved_covariance(state, G, W);
  SpdMatrix precision = [&] {
    try {
      return spd_inverse(evolved);
    } catch (const NotPositiveDefinite& e) {
      throw NotPositiveDefinite("dlm_evolve: evolved covariance is degenerate (" +
                                    std::string(e.what()) + ")",
                                e.column);
    }
  }();
  return DlmState(state.t, G * state.mean, std::move(precision), state.shape, state.rate);
}

DlmState dlm_update(const DlmState& state, const Eigen::RowVectorXd& phi, double y) {
  if (phi.size() != state.dim()) {
    throw DimensionMismatch("dlm_update: phi has length " + std::to_string(phi.size()) +
                            " but the state is " + std::to_string(state.dim()) + "-dimensional");
  }
  const NormalGammaParams prior(state.mean, state.precision, state.shape, state.rate);
  MatrixXd X(1, phi.size());
  X.row(0) = phi;
  VectorXd obs(1);
  obs(0) = y;
  const PosteriorSummary post = posterior_update(prior, ModelSpec::independent(std::move(X)), obs);
  return DlmState(state.t + 1, post.posterior.theta, post.posterior.precision,
                  post.posterior.shape, post.posterior.rate);
}

PredictiveT dlm_forecast(const DlmState& state, const Eigen::RowVectorXd& phi_next,
                         const MatrixXd& G_next, const MatrixXd& W_next) {
  if (phi_next.size() != state.dim()) {
    throw DimensionMismatch("dlm_forecast: phi has length " + std::to_string(phi_next.size()) +
                            " but the state is " + std::to_string(state.dim()) + "-dimensional");
  }
  check_system_dims(state, G_next, W_next);
  const MatrixXd R = evolved_covariance(state, G_next, W_next).matrix();
  const VectorXd a = G_next * state.mean;
  const double mean = phi_next.dot(a);
  const double spread = 1.0 + (phi_next * R * phi_next.transpose()).value();
  const double dispersion = (state.rate / state.shape) * spread;
  return PredictiveT{2.0 * state.shape, VectorXd::Constant(1, mean),
                     MatrixXd::Constant(1, 1, dispersion)};
}

std::vector<DlmStepRecord> dlm_filter(const DlmSpec& spec, const DlmState& prior,
                                      const VectorXd& ys) {
  std::vector<DlmStepRecord> records;
  records.reserve(ys.size());
  DlmState state = prior;
  for (int i = 0; i < ys.size(); ++i) {
    const int step = state.t + 1;
    const MatrixXd G = spec.evolution(step);
    const MatrixXd W = spec.system_cov(step);
    const Eigen::RowVectorXd phi = spec.observation(step);

    PredictiveT forecast = dlm_forecast(state, phi, G, W);
    const double log_inc =
        mvt_logpdf(forecast.to_mvt(), VectorXd::Constant(1, ys(i)));

    DlmState evolved = dlm_evolve(state, G, W);
    DlmState filtered = dlm_update(evolved, phi, ys(i));
    records.push_back(DlmStepRecord{std::move(forecast), filtered, log_inc});
    state = std::move(filtered);
  }
  return records;
}

}  // namespace blm
