#include "maxent/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "maxent/errors.hpp"
#include "maxent/rng.hpp"

namespace maxent {

namespace {

void check_enumerable(int n, int limit, const char* who) {
  if (n > limit)
    throw std::invalid_argument(std::string(who) + ": n = " + std::to_string(n) +
                                " exceeds enumeration guard " + std::to_string(limit));
}

// Energies for all 2^n configurations, fixed iteration order.
std::vector<double> enumerate_energies(const IsingInstance& instance) {
  const int n = instance.spin_count();
  const std::size_t states = std::size_t{1} << n;
  std::vector<double> e(states, 0.0);
  const bool pair = instance.kind() == FunctionalKind::PairProduct;
  for (const auto& c : instance.couplings()) {
    const std::uint32_t bi = std::uint32_t{1} << c.i;
    const std::uint32_t bj = std::uint32_t{1} << c.j;
    for (std::size_t x = 0; x < states; ++x) {
      const bool same = ((x & bi) != 0) == ((x & bj) != 0);
      // pair: x_i x_j in {-1, +1}; sqdiff: (x_i - x_j)^2 in {0, 4}
      e[x] += pair ? (same ? c.value : -c.value) : (same ? 0.0 : 4.0 * c.value);
    }
  }
  return e;
}

double log_sum_exp(const std::vector<double>& e) {
  const double shift = *std::max_element(e.begin(), e.end());
  double s = 0.0;
  for (double v : e) s += std::exp(v - shift);
  return shift + std::log(s);
}

}  // namespace

DistributionTable::DistributionTable(int n, std::vector<double> probabilities)
    : n_(n), p_(std::move(probabilities)) {
  check_enumerable(n, kMaxEnumerationSpins, "DistributionTable");
  if (n < 1) throw std::invalid_argument("DistributionTable: n must be >= 1");
  if (p_.size() != (std::size_t{1} << n))
    throw std::invalid_argument("DistributionTable: wrong table size");
  double sum = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0)) throw std::invalid_argument("DistributionTable: negative probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("DistributionTable: probabilities sum to " +
                                std::to_string(sum));
}

SpinVector DistributionTable::configuration(std::uint32_t index, int n) {
  SpinVector x(n);
  for (int b = 0; b < n; ++b) x[b] = ((index >> b) & 1u) ? +1 : -1;
  return x;
}

double exact_log_partition(const IsingInstance& instance) {
  check_enumerable(instance.spin_count(), kMaxEnumerationSpins, "exact_log_partition");
  return log_sum_exp(enumerate_energies(instance));
}

DistributionTable gibbs_distribution(const IsingInstance& instance) {
  check_enumerable(instance.spin_count(), kMaxEnumerationSpins, "gibbs_distribution");
  std::vector<double> e = enumerate_energies(instance);
  const double log_z = log_sum_exp(e);
  for (double& v : e) v = std::exp(v - log_z);
  return DistributionTable(instance.spin_count(), std::move(e));
}

double exact_gibbs_objective(const IsingInstance& instance, const DistributionTable& table) {
  if (table.spin_count() != instance.spin_count())
    throw std::invalid_argument("exact_gibbs_objective: dimension mismatch");
  const std::vector<double> e = enumerate_energies(instance);
  const auto& p = table.probabilities();
  double energy_term = 0.0;
  double entropy = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    energy_term += p[x] * e[x];
    if (p[x] > 0.0) entropy -= p[x] * std::log(p[x]);
  }
  return energy_term + entropy;
}

SymMatrix exact_pair_moments(const DistributionTable& table) {
  const int n = table.spin_count();
  const auto& p = table.probabilities();
  SymMatrix m(n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
  for (int i = 0; i < n; ++i) {
    const std::size_t bi = std::size_t{1} << i;
    for (int j = i + 1; j < n; ++j) {
      const std::size_t bj = std::size_t{1} << j;
      double s = 0.0;
      for (std::size_t x = 0; x < p.size(); ++x) {
        const bool same = ((x & bi) != 0) == ((x & bj) != 0);
        s += same ? p[x] : -p[x];
      }
      m.set(i, j, s);
    }
  }
  return m;
}

namespace {

struct DualPoint {
  double log_z;
  SymMatrix moments;
};

DualPoint dual_moments(const IsingInstance& instance) {
  return {exact_log_partition(instance), exact_pair_moments(gibbs_distribution(instance))};
}

double dual_value(double log_z, const std::vector<Coupling>& couplings,
                  const SymMatrix& target) {
  double s = log_z;
  for (const auto& c : couplings) s -= c.value * target(c.i, c.j);
  return s;
}

}  // namespace

MaxEntFit fit_maxent(const SymMatrix& target, double tolerance, int max_iterations) {
  const int n = target.size();
  check_enumerable(n, kMaxFitSpins, "fit_maxent");
  if (n < 1) throw std::invalid_argument("fit_maxent: empty target");
  for (int i = 0; i < n; ++i)
    if (std::abs(target(i, i) - 1.0) > 1e-9)
      throw std::invalid_argument("fit_maxent: target diagonal must be 1");

  // Optimize over the complete graph; start at J = 0.
  std::vector<Coupling> j;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) j.push_back({a, b, 0.0});

  const double base_step = 1.0 / n;
  IsingInstance current(n, FunctionalKind::PairProduct, j);
  DualPoint point = dual_moments(current);
  double value = dual_value(point.log_z, j, target);

  MaxEntFit best{j, value, point.moments, 0, false};
  for (int iter = 1; iter <= max_iterations; ++iter) {
    // gradient of the dual: achieved moments minus target
    double grad_inf = 0.0;
    double grad_sq = 0.0;
    std::vector<double> grad(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) {
      grad[k] = point.moments(j[k].i, j[k].j) - target(j[k].i, j[k].j);
      grad_inf = std::max(grad_inf, std::abs(grad[k]));
      grad_sq += grad[k] * grad[k];
    }
    best = {j, value, point.moments, iter - 1, grad_inf < tolerance};
    if (best.converged) return best;

    // backtracking halving from the fixed base step
    double step = base_step;
    while (true) {
      std::vector<Coupling> trial = j;
      for (std::size_t k = 0; k < trial.size(); ++k) trial[k].value -= step * grad[k];
      IsingInstance trial_instance(n, FunctionalKind::PairProduct, trial);
      DualPoint trial_point = dual_moments(trial_instance);
      const double trial_value = dual_value(trial_point.log_z, trial, target);
      if (trial_value <= value - 1e-4 * step * grad_sq) {
        j = std::move(trial);
        point = std::move(trial_point);
        value = trial_value;
        break;
      }
      step *= 0.5;
      if (step < 1e-14) {  // stalled; boundary targets land here
        best.iterations = iter;
        return best;
      }
    }
  }
  best.iterations = max_iterations;
  return best;
}

DistributionTable exact_two_dim_dichotomized_table(double rho) {
  if (!(std::abs(rho) <= 1.0))
    throw std::invalid_argument("exact_two_dim_dichotomized_table: |rho| > 1");
  const double q = std::asin(rho) / (2.0 * std::numbers::pi);
  // index bits: (x1, x2) = (bit0, bit1); equal-sign states are 00 and 11
  return DistributionTable(2, {0.25 + q, 0.25 - q, 0.25 - q, 0.25 + q});
}

std::vector<SpinVector> sample_table(const DistributionTable& table, int count,
                                     std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_table: count must be >= 1");
  const auto& p = table.probabilities();
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    acc += p[x];
    cdf[x] = acc;
  }
  cdf.back() = 1.0;
  RandomStream stream(seed);
  std::vector<SpinVector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double u = stream.uniform01();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto index = static_cast<std::uint32_t>(it - cdf.begin());
    out.push_back(DistributionTable::configuration(index, table.spin_count()));
  }
  return out;
}

}  // namespace maxent
