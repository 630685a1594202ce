#include "maxent/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "maxent/errors.hpp"

namespace maxent {

namespace {

void require_feasible(const SymMatrix& m, double tolerance, const char* who) {
  const int n = m.size();
  for (int i = 0; i < n; ++i)
    if (std::abs(m(i, i) - 1.0) > tolerance)
      throw std::invalid_argument(std::string(who) + ": M diagonal is not 1");
  const EigenDecomposition d = sym_eigen(m);
  if (d.eigenvalues(n - 1) < -tolerance)
    throw numerical_error(std::string(who) + ": M is not PSD, min eigenvalue " +
                          std::to_string(d.eigenvalues(n - 1)));
}

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// E[clamp(Z, -c, c)] for Z ~ N(m, s^2)
double mean_clamped_normal(double m, double s, double c) {
  if (s <= 0.0) return std::clamp(m, -c, c);
  const double a = (-c - m) / s;
  const double b = (c - m) / s;
  return -c * normal_cdf(a) + c * (1.0 - normal_cdf(b)) +
         m * (normal_cdf(b) - normal_cdf(a)) - s * (normal_pdf(b) - normal_pdf(a));
}

// scaled bias as a function of the underlying Gaussian coordinate
double scaled_bias(double u, double scale) {
  return 0.5 * std::clamp(u / scale, -1.0, 1.0);
}

}  // namespace

RoundedDistribution::RoundedDistribution(Descriptor descriptor, double entropy_floor,
                                         std::string seed_protocol)
    : descriptor_(std::move(descriptor)),
      entropy_floor_(entropy_floor),
      seed_protocol_(std::move(seed_protocol)) {}

int RoundedDistribution::spin_count() const {
  if (const auto* u = std::get_if<UniformDescriptor>(&descriptor_)) return u->n;
  if (const auto* g = std::get_if<GWDescriptor>(&descriptor_)) return g->model.spin_count();
  return std::get<CharikarDescriptor>(descriptor_).n;
}

const char* RoundedDistribution::name() const {
  if (std::holds_alternative<UniformDescriptor>(descriptor_)) return "uniform";
  if (std::holds_alternative<GWDescriptor>(descriptor_)) return "gw";
  return "charikar";
}

double RoundedDistribution::pair_moment(int i, int j) const {
  const int n = spin_count();
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw std::invalid_argument("pair_moment: index out of range");
  if (i == j) return 1.0;
  if (std::holds_alternative<UniformDescriptor>(descriptor_)) return 0.0;
  if (const auto* g = std::get_if<GWDescriptor>(&descriptor_))
    return g->model.pair_moment(i, j);
  const auto& c = std::get<CharikarDescriptor>(descriptor_);
  const double rho = std::clamp(c.gram.inner(i, j), -1.0, 1.0);
  return charikar_pair_moment_exact(rho, c.scale);
}

RoundedDistribution round_uniform(int n) {
  if (n < 1) throw std::invalid_argument("round_uniform: n must be >= 1");
  return RoundedDistribution(UniformDescriptor{n}, n * std::numbers::ln2,
                             "one engine word per coordinate, high bit picks the sign");
}

RoundedDistribution round_gw(const SymMatrix& M, double beta) {
  require_feasible(M, tol().feasibility, "round_gw");
  const double floor = entropy_lower_bound(M.size(), beta);  // rejects low beta
  return RoundedDistribution(
      GWDescriptor{DichotomizedGaussianModel(M, beta)}, floor,
      "n Box-Muller normals per draw, g = factor * z, componentwise sign");
}

EntropyBound charikar_entropy_bound(int n) {
  if (n < 1) throw std::invalid_argument("charikar_entropy_bound: n must be >= 1");
  const double bits = (2.0 - 0.75 * std::log2(3.0)) * n;
  return {bits, bits * std::numbers::ln2};
}

Eigen::VectorXd charikar_bias(const GramFactors& gram, double scale, bool scaled,
                              RandomStream& stream) {
  const int d = gram.dimension();
  Eigen::VectorXd s(d);
  for (int k = 0; k < d; ++k) s(k) = stream.normal();
  Eigen::VectorXd bias = gram.vectors * s / scale;
  const double factor = scaled ? 0.5 : 1.0;
  for (int i = 0; i < bias.size(); ++i)
    bias(i) = factor * std::clamp(bias(i), -1.0, 1.0);
  return bias;
}

SpinVector round_with_bias(const Eigen::VectorXd& bias, RandomStream& stream) {
  SpinVector x(bias.size());
  for (int i = 0; i < bias.size(); ++i)
    x[i] = stream.uniform01() < 0.5 * (1.0 + bias(i)) ? +1 : -1;
  return x;
}

CharikarRounding round_charikar_scaled(const SymMatrix& M, std::uint64_t seed) {
  const int n = M.size();
  if (n < 2) throw std::invalid_argument("round_charikar_scaled: needs n >= 2");
  require_feasible(M, tol().feasibility, "round_charikar_scaled");
  GramFactors gram = gram_factorize(M);
  const double scale = std::sqrt(4.0 * std::log(static_cast<double>(n)));
  RandomStream stream(seed);
  Eigen::VectorXd bias = charikar_bias(gram, scale, /*scaled=*/true, stream);
  SpinVector draw = round_with_bias(bias, stream);
  RoundedDistribution dist(
      CharikarDescriptor{std::move(gram), scale, n}, charikar_entropy_bound(n).nats,
      "gram-dimension normals for s, then n rounding uniforms per draw");
  return {std::move(draw), std::move(dist)};
}

double charikar_pair_moment_exact(double rho, double scale) {
  rho = std::clamp(rho, -1.0, 1.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  // E[psi(X) psi(Y)] over the bivariate normal: the inner conditional mean is
  // closed form, the outer integral is composite Simpson on [-12, 12]
  constexpr int points = 24001;
  constexpr double limit = 12.0;
  const double h = 2.0 * limit / (points - 1);
  double acc = 0.0;
  for (int k = 0; k < points; ++k) {
    const double a = -limit + k * h;
    const double inner = (s == 0.0)
                             ? scaled_bias(rho * a, scale)
                             : 0.5 / scale * mean_clamped_normal(rho * a, s, scale);
    const double f = scaled_bias(a, scale) * inner * normal_pdf(a);
    const double w = (k == 0 || k == points - 1) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    acc += w * f;
  }
  return acc * h / 3.0;
}

RoundedSampler::RoundedSampler(const RoundedDistribution& dist, std::uint64_t seed)
    : dist_(dist), stream_(seed), spins_(dist.spin_count()) {
  if (const auto* g = std::get_if<GWDescriptor>(&dist.descriptor()))
    gw_sampler_ = std::make_unique<GaussianSampler>(g->model.sampling_covariance());
}

const SpinVector& RoundedSampler::next() {
  const int n = dist_.spin_count();
  if (std::holds_alternative<UniformDescriptor>(dist_.descriptor())) {
    for (int i = 0; i < n; ++i) spins_[i] = stream_.coin() ? +1 : -1;
    return spins_;
  }
  if (gw_sampler_ != nullptr) {
    gw_sampler_->draw_into(stream_, z_, g_);
    for (int i = 0; i < n; ++i) spins_[i] = g_(i) >= 0.0 ? +1 : -1;
    return spins_;
  }
  const auto& c = std::get<CharikarDescriptor>(dist_.descriptor());
  const int d = c.gram.dimension();
  z_.resize(d);
  for (int k = 0; k < d; ++k) z_(k) = stream_.normal();
  g_.noalias() = c.gram.vectors * z_;
  for (int i = 0; i < n; ++i) {
    const double bias = scaled_bias(g_(i), c.scale);
    spins_[i] = stream_.uniform01() < 0.5 * (1.0 + bias) ? +1 : -1;
  }
  return spins_;
}

double rounded_exact_energy(const IsingInstance& instance, const RoundedDistribution& dist) {
  if (instance.spin_count() != dist.spin_count())
    throw std::invalid_argument("rounded_exact_energy: dimension mismatch");
  double e = 0.0;
  const bool pair = instance.kind() == FunctionalKind::PairProduct;
  for (const auto& c : instance.couplings()) {
    const double m = dist.pair_moment(c.i, c.j);
    e += c.value * (pair ? m : 2.0 - 2.0 * m);
  }
  return e;
}

GibbsObjectiveEstimate rounded_gibbs_objective(const IsingInstance& instance,
                                               const RoundedDistribution& dist,
                                               long long samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("rounded_gibbs_objective: samples must be >= 1");
  if (instance.spin_count() != dist.spin_count())
    throw std::invalid_argument("rounded_gibbs_objective: dimension mismatch");

  GibbsObjectiveEstimate est{};
  est.entropy_floor = dist.entropy_floor();
  est.ci_confidence = 0.999;

  if (std::holds_alternative<CharikarDescriptor>(dist.descriptor())) {
    RoundedSampler sampler(dist, seed);
    double mean = 0.0;
    for (long long k = 0; k < samples; ++k)
      mean += (energy(instance, sampler.next()) - mean) / static_cast<double>(k + 1);
    est.energy = mean;
    const double span =
        instance.kind() == FunctionalKind::PairProduct ? 2.0 : 4.0;  // per-pair range
    const double range = span * instance.coupling_abs_sum();
    const double delta = 1.0 - est.ci_confidence;
    est.energy_ci_half_width =
        range * std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(samples)));
    est.energy_exact = false;
  } else {
    est.energy = rounded_exact_energy(instance, dist);
    est.energy_ci_half_width = 0.0;
    est.energy_exact = true;
  }
  est.objective = est.energy + est.entropy_floor;
  return est;
}

}  // namespace maxent
