#pragma once

#include <cstdint>
#include <vector>

#include "maxent/linalg.hpp"
#include "maxent/model.hpp"

namespace maxent {

inline constexpr int kMaxEnumerationSpins = 22;  // 4M states
inline constexpr int kMaxFitSpins = 15;          // full enumeration per gradient step

// Explicit probability table over {-1, +1}^n, indexed by configuration:
// bit b of the index maps to spin 2b - 1.
class DistributionTable {
 public:
  DistributionTable(int n, std::vector<double> probabilities);

  int spin_count() const { return n_; }
  const std::vector<double>& probabilities() const { return p_; }

  static SpinVector configuration(std::uint32_t index, int n);

 private:
  int n_;
  std::vector<double> p_;
};

// log Z by enumeration with max-shift; natural-log units.
double exact_log_partition(const IsingInstance& instance);

DistributionTable gibbs_distribution(const IsingInstance& instance);

// Energy term plus entropy (natural log, 0 log 0 = 0); equals log Z at the
// Gibbs table and is below it everywhere else.
double exact_gibbs_objective(const IsingInstance& instance, const DistributionTable& table);

SymMatrix exact_pair_moments(const DistributionTable& table);

struct MaxEntFit {
  std::vector<Coupling> couplings;  // fitted potentials, complete graph i < j
  double entropy;                   // dual value at the fit = max entropy
  SymMatrix achieved_moments;
  int iterations;
  bool converged;
};

// Fits exponential-family potentials to target pairwise moments by descent
// on the convex dual, with exact gradients from enumeration. Targets on the
// boundary of the marginal polytope surface as non-convergence.
MaxEntFit fit_maxent(const SymMatrix& target, double tolerance, int max_iterations = 50000);

// n = 2 table of sign(g) for g bivariate normal with correlation rho.
DistributionTable exact_two_dim_dichotomized_table(double rho);

std::vector<SpinVector> sample_table(const DistributionTable& table, int count,
                                     std::uint64_t seed);

}  // namespace maxent
