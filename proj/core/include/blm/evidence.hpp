#pragma once

#include <string>
#include <vector>

#include "blm/conjugate.hpp"

namespace blm {

/// Evidence of one candidate model. log_f_y is the full log normalizing
/// constant; log_z drops the terms shared by models with a common lambda
/// prior and correlation, so either may feed the posterior probabilities.
struct ModelEvidence {
  std::string label;
  double log_f_y;
  double log_z;
};

struct ModelCandidate {
  std::string label;
  NormalGammaParams prior;
  ModelSpec model;
};

/// Full log normalizing constant
///   -(n/2) log 2pi + log|B_0|/2 + alpha_0 log beta_0 - lgamma(alpha_0)
///   + lgamma(alpha_n) - alpha_n log beta_n,
/// where log|B_0| = log|A| + log|A_0| - log|A_n| keeps every determinant at
/// p x p or cached-factor cost. With lambda fixed this is the exact Gaussian
/// marginal -(n/2) log 2pi + (n/2) log lambda + log|B_0|/2 - lambda (s2+d2)/2.
double log_evidence(const NormalGammaParams& prior, const ModelSpec& model, const VectorXd& y);

/// Reduced evidence log|B_0|/2 - alpha_n log beta_n (or - lambda beta_n when
/// lambda is fixed). Comparable across models only under a shared
/// correlation and lambda prior.
double log_evidence_reduced(const NormalGammaParams& prior, const ModelSpec& model,
                            const VectorXd& y);

/// Evidence for each candidate. Candidates must share the correlation
/// matrix, alpha_0, beta_0 and the fixed-lambda setting; anything else is an
/// IncompatibleComparison.
std::vector<ModelEvidence> evaluate_models(const std::vector<ModelCandidate>& candidates,
                                           const VectorXd& y);

/// Softmax over log evidences via log-sum-exp; sums to one and survives
/// arbitrarily shifted inputs.
VectorXd model_posterior_probs(const std::vector<double>& log_evidences);

namespace detail {
/// Shared by posterior_update so the summary can carry its own evidence.
double log_evidence_from_update(const NormalGammaParams& prior, const ModelSpec& model,
                                double logdet_A0, double logdet_An, double s2, double d2);
}  // namespace detail

}  // namespace blm
