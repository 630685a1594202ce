#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>

#include "maxent/dichotomized.hpp"
#include "maxent/linalg.hpp"
#include "maxent/model.hpp"

namespace maxent {

struct UniformDescriptor {
  int n;
};

struct GWDescriptor {
  DichotomizedGaussianModel model;
};

struct CharikarDescriptor {
  GramFactors gram;  // Gram vectors of the pseudo-moment matrix
  double scale;      // T = sqrt(4 ln n)
  int n;
};

// A sampleable rounded distribution: a descriptor, a certified analytic
// entropy lower bound (natural-log units), and exact pair moments.
class RoundedDistribution {
 public:
  using Descriptor = std::variant<UniformDescriptor, GWDescriptor, CharikarDescriptor>;

  RoundedDistribution(Descriptor descriptor, double entropy_floor,
                      std::string seed_protocol);

  int spin_count() const;
  double entropy_floor() const { return entropy_floor_; }
  const std::string& seed_protocol() const { return seed_protocol_; }
  const Descriptor& descriptor() const { return descriptor_; }
  const char* name() const;  // "uniform" | "gw" | "charikar"

  // exact E[x_i x_j] under the rounded distribution
  double pair_moment(int i, int j) const;

 private:
  Descriptor descriptor_;
  double entropy_floor_;
  std::string seed_protocol_;
};

// independent fair +-1 coordinates; entropy floor n ln 2 is exact
RoundedDistribution round_uniform(int n);

// dichotomized Gaussian over the pseudo-moments; needs beta >= 3^{-1/2}
// so the entropy floor applies
RoundedDistribution round_gw(const SymMatrix& M, double beta);

struct CharikarRounding {
  SpinVector draw;
  RoundedDistribution distribution;
};

// Scaled-down quadratic form rounding: g_i = <v_i, s> with s standard normal,
// h = g / sqrt(4 ln n), bias r'_i = clamp(h_i, -1, 1) / 2, then independent
// sign flips with P[+1] = (1 + r'_i) / 2. Every bias satisfies |r'_i| <= 1/2.
CharikarRounding round_charikar_scaled(const SymMatrix& M, std::uint64_t seed);

struct EntropyBound {
  double bits;
  double nats;
};

// per-coordinate floor (2 - (3/4) log2 3) bits, i.e. the binary entropy of 3/4
EntropyBound charikar_entropy_bound(int n);

// Building blocks, exposed so the two rounding stages can share randomness:
// the unscaled bias clamps to [-1, 1] (quadratic form rounding), the scaled
// one to [-1/2, 1/2].
Eigen::VectorXd charikar_bias(const GramFactors& gram, double scale, bool scaled,
                              RandomStream& stream);
SpinVector round_with_bias(const Eigen::VectorXd& bias, RandomStream& stream);

// E[r'_i r'_j] for gram inner product rho, by semi-analytic quadrature; this
// equals the exact pair moment of the scaled rounding.
double charikar_pair_moment_exact(double rho, double scale);

// Streaming draws from any rounded distribution; owns buffers. Keeps a
// reference to the distribution, which must outlive the sampler.
class RoundedSampler {
 public:
  RoundedSampler(const RoundedDistribution& dist, std::uint64_t seed);
  const SpinVector& next();

 private:
  const RoundedDistribution& dist_;
  RandomStream stream_;
  std::unique_ptr<GaussianSampler> gw_sampler_;  // GW descriptors only
  Eigen::VectorXd z_;
  Eigen::VectorXd g_;
  SpinVector spins_;
};

// Energy term under the rounded distribution from the exact pair-moment
// formulas; no sampling.
double rounded_exact_energy(const IsingInstance& instance, const RoundedDistribution& dist);

struct GibbsObjectiveEstimate {
  double energy;                // closed form where available, else Monte Carlo
  double energy_ci_half_width;  // 0 when the energy is exact
  double ci_confidence;         // Hoeffding level for the Monte Carlo part
  double entropy_floor;
  double objective;             // energy + entropy_floor
  bool energy_exact;
};

// Closed forms are used for Uniform (always) and GW (arcsin moments); the
// Charikar energy is estimated by Monte Carlo with a Hoeffding interval on
// the bounded per-sample energies. The entropy term is always the certified
// floor, never an estimate.
GibbsObjectiveEstimate rounded_gibbs_objective(const IsingInstance& instance,
                                               const RoundedDistribution& dist,
                                               long long samples, std::uint64_t seed);

}  // namespace maxent
