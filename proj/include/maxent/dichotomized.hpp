#pragma once

#include <cstdint>
#include <vector>

#include "maxent/linalg.hpp"
#include "maxent/model.hpp"

namespace maxent {

// Sign of a beta-smoothed Gaussian: samples are sign(g), g ~ N(0, Sigma + beta I).
// Pairwise moments follow the arcsin law exactly, and for
// beta >= 3^{-1/2} the entropy carries an analytic lower bound.
class DichotomizedGaussianModel {
 public:
  // Requires unit diagonal (within tolerance) and Sigma PSD within tolerance;
  // eigenvalues in [-1e-8, 0) are treated as zero when factorizing.
  DichotomizedGaussianModel(SymMatrix sigma, double beta);

  int spin_count() const { return sigma_.size(); }
  const SymMatrix& sigma() const { return sigma_; }
  double beta() const { return beta_; }
  SymMatrix sampling_covariance() const;        // Sigma + beta I
  double normalization() const { return 1.0 + beta_; }

  // set when beta is below the entropy-bound hypothesis 3^{-1/2}
  bool low_beta_warning() const { return low_beta_warning_; }

  // exact E[x_i x_j] of the sampler: (2/pi) arcsin(Sigma_ij / (1 + beta))
  double pair_moment(int i, int j) const;

 private:
  SymMatrix sigma_;
  double beta_;
  bool low_beta_warning_;
};

// Streaming sampler; owns its buffers, one instance per thread.
class DichotomizedSampler {
 public:
  DichotomizedSampler(const DichotomizedGaussianModel& model, std::uint64_t seed);

  // valid until the next call; sign(0) maps to +1
  const SpinVector& next();

 private:
  GaussianSampler base_;
  RandomStream stream_;
  Eigen::VectorXd z_;
  Eigen::VectorXd g_;
  SpinVector spins_;
};

std::vector<SpinVector> sample(const DichotomizedGaussianModel& model, int count,
                               std::uint64_t seed);

// Hypothesis beta >= 3^{-1/2}; values below error out rather than return 0.
// Natural-log units. Zero at the hypothesis boundary.
double entropy_lower_bound(int n, double beta);

// min over t in [-1,1] \ {0} of (2/pi) arcsin(t)/t, by dense grid plus the
// t -> 0 limit 2/pi. Cached after the first call.
double grothendieck_like_constant();

struct SandwichReport {
  bool pass;
  double worst_slack;  // most negative = worst one-sided margin over all pairs
  int checked_pairs;
  int violations;
  int worst_i;
  int worst_j;
};

// Verifies, pair by pair, that the moment magnitude sits inside
// [G |Sigma_ij| / (1+beta), |Sigma_ij| / (1+beta)] with the sign of Sigma_ij.
SandwichReport moment_sandwich_check(const DichotomizedGaussianModel& model);

}  // namespace maxent
