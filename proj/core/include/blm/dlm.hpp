#pragma once

#include <functional>
#include <vector>

#include "blm/predictive.hpp"

namespace blm {

/// Filtered Normal-Gamma state of a univariate dynamic linear model after t
/// scalar observations: theta_t | lambda ~ N(mean, lambda^{-1} precision^{-1}),
/// lambda ~ Ga(shape, rate). Immutable value; each filter step produces a new
/// one.
struct DlmState {
  DlmState(int t, VectorXd mean, SpdMatrix precision, double shape, double rate);

  int t;
  VectorXd mean;
  SpdMatrix precision;
  double shape;
  double rate;

  int dim() const { return static_cast<int>(mean.size()); }
};

/// Time-varying system: evolution matrix G_t, lambda-scaled evolution
/// covariance W_t (zero allowed) and observation row phi_t, each supplied per
/// step index (1-based: the value used to move from t-1 to t).
struct DlmSpec {
  std::function<MatrixXd(int)> evolution;   // G_t, p x p
  std::function<MatrixXd(int)> system_cov;  // W_t, p x p PSD
  std::function<Eigen::RowVectorXd(int)> observation;  // phi_t, 1 x p

  static DlmSpec constant(MatrixXd G, MatrixXd W, Eigen::RowVectorXd phi);
};

/// Moves the state through the system equation: mean G mu, covariance
/// G P^{-1} G' + W, re-inverted to a precision. shape/rate are untouched.
DlmState dlm_evolve(const DlmState& state, const MatrixXd& G, const MatrixXd& W);

/// Conjugate update on one scalar observation: delegates to posterior_update
/// with X = phi, Sigma = [[1]]. shape increments by 1/2.
DlmState dlm_update(const DlmState& state, const Eigen::RowVectorXd& phi, double y);

/// One-step-ahead forecast: evolve, then the scalar predictive t with
/// dof = 2 shape, mean phi a_{t+1}, dispersion (rate/shape)(1 + phi R phi').
PredictiveT dlm_forecast(const DlmState& state, const Eigen::RowVectorXd& phi_next,
                         const MatrixXd& G_next, const MatrixXd& W_next);

/// One filter step of dlm_filter.
struct DlmStepRecord {
  PredictiveT forecast;     // before seeing y_t
  DlmState filtered;        // after the update
  double log_evidence_inc;  // log one-step predictive density at the realized y_t
};

/// Runs forecast + evolve + update over a whole series. The per-step
/// evidence increments sum to the log evidence of the equivalent batch
/// model.
std::vector<DlmStepRecord> dlm_filter(const DlmSpec& spec, const DlmState& prior,
                                      const VectorXd& ys);

}  // namespace blm
