#include "maxent/dichotomized.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "maxent/errors.hpp"

namespace maxent {

namespace {

constexpr double kBetaHypothesis = 0.5773502691896258;  // 3^{-1/2}

double arcsine_moment(double rho_over_norm) {
  return (2.0 / std::numbers::pi) * std::asin(std::clamp(rho_over_norm, -1.0, 1.0));
}

}  // namespace

DichotomizedGaussianModel::DichotomizedGaussianModel(SymMatrix sigma, double beta)
    : sigma_(std::move(sigma)), beta_(beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("dichotomized: beta must be >= 0");
  if (!sigma_.all_finite()) throw std::invalid_argument("dichotomized: non-finite sigma");
  const int n = sigma_.size();
  if (n < 1) throw std::invalid_argument("dichotomized: empty sigma");
  for (int i = 0; i < n; ++i)
    if (std::abs(sigma_(i, i) - 1.0) > tol().unit_diag)
      throw std::invalid_argument("dichotomized: sigma diagonal entry " + std::to_string(i) +
                                  " = " + std::to_string(sigma_(i, i)) + ", expected 1");
  const EigenDecomposition d = sym_eigen(sigma_);
  const double min_eig = d.eigenvalues(n - 1);
  if (min_eig < -tol().unit_diag)
    throw numerical_error("dichotomized: sigma is not PSD, min eigenvalue " +
                          std::to_string(min_eig));
  low_beta_warning_ = beta_ < kBetaHypothesis;
}

SymMatrix DichotomizedGaussianModel::sampling_covariance() const {
  SymMatrix cov = sigma_;
  for (int i = 0; i < cov.size(); ++i) cov.set(i, i, cov(i, i) + beta_);
  return cov;
}

double DichotomizedGaussianModel::pair_moment(int i, int j) const {
  const int n = sigma_.size();
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw std::invalid_argument("pair_moment: index out of range");
  if (i == j) throw std::invalid_argument("pair_moment: needs i != j");
  return arcsine_moment(sigma_(i, j) / (1.0 + beta_));
}

DichotomizedSampler::DichotomizedSampler(const DichotomizedGaussianModel& model,
                                         std::uint64_t seed)
    : base_(model.sampling_covariance()), stream_(seed), spins_(model.spin_count()) {}

const SpinVector& DichotomizedSampler::next() {
  base_.draw_into(stream_, z_, g_);
  for (int i = 0; i < static_cast<int>(spins_.size()); ++i)
    spins_[i] = g_(i) >= 0.0 ? +1 : -1;
  return spins_;
}

std::vector<SpinVector> sample(const DichotomizedGaussianModel& model, int count,
                               std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample: count must be >= 1");
  DichotomizedSampler sampler(model, seed);
  std::vector<SpinVector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out.push_back(sampler.next());
  return out;
}

double entropy_lower_bound(int n, double beta) {
  if (n < 0) throw std::invalid_argument("entropy_lower_bound: negative n");
  if (beta < kBetaHypothesis * (1.0 - 1e-12))
    throw std::invalid_argument("entropy_lower_bound: beta = " + std::to_string(beta) +
                                " is below the hypothesis 3^{-1/2}");
  const double t = std::pow(3.0, 0.25) * std::sqrt(beta) - 1.0;
  if (t < 1e-12) return 0.0;  // hypothesis boundary, modulo rounding
  return n / 25.0 * t * t / (std::sqrt(3.0) * beta);
}

double grothendieck_like_constant() {
  static const double cached = [] {
    const double limit = 2.0 / std::numbers::pi;  // t -> 0
    double best = limit;
    constexpr double step = 1e-6;
    for (long k = 0; k <= 2000000; ++k) {
      const double t = -1.0 + static_cast<double>(k) * step;
      if (t == 0.0) continue;
      best = std::min(best, (2.0 / std::numbers::pi) * std::asin(t) / t);
    }
    return best;
  }();
  return cached;
}

SandwichReport moment_sandwich_check(const DichotomizedGaussianModel& model) {
  const double g = grothendieck_like_constant();
  const double norm = model.normalization();
  const int n = model.spin_count();
  constexpr double eps = 1e-12;

  SandwichReport report{true, std::numeric_limits<double>::infinity(), 0, 0, -1, -1};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double sigma_ij = model.sigma()(i, j);
      const double m = model.pair_moment(i, j);
      const double lo = g * std::abs(sigma_ij) / norm;
      const double hi = std::abs(sigma_ij) / norm;
      const double slack = std::min(std::abs(m) - lo, hi - std::abs(m));
      const bool sign_ok = m * sigma_ij >= 0.0 || std::abs(m) <= eps;
      ++report.checked_pairs;
      if (slack < report.worst_slack) {
        report.worst_slack = slack;
        report.worst_i = i;
        report.worst_j = j;
      }
      if (!sign_ok || slack < -eps) {
        ++report.violations;
        report.pass = false;
      }
    }
  }
  if (report.checked_pairs == 0) report.worst_slack = 0.0;
  return report;
}

}  // namespace maxent
