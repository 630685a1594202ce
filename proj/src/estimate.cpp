#include "maxent/estimate.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "maxent/oracle.hpp"

namespace maxent {

MomentAccumulator::MomentAccumulator(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("MomentAccumulator: n must be >= 1");
  pair_sums_.assign(static_cast<std::size_t>(n) * (n - 1) / 2, 0.0);
}

void MomentAccumulator::add(const SpinVector& x) {
  if (static_cast<int>(x.size()) != n_)
    throw std::invalid_argument("MomentAccumulator: inconsistent sample length");
  std::size_t k = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j, ++k)
      pair_sums_[k] += static_cast<double>(x[i] * x[j]);
  ++count_;
}

MomentEstimate MomentAccumulator::finish() const {
  if (count_ < 2) throw std::invalid_argument("MomentAccumulator: needs at least 2 samples");
  MomentEstimate est{SymMatrix(n_), SymMatrix(n_), count_};
  const double inv = 1.0 / static_cast<double>(count_);
  std::size_t k = 0;
  for (int i = 0; i < n_; ++i) {
    est.moments.set(i, i, 1.0);
    est.standard_errors.set(i, i, 0.0);
    for (int j = i + 1; j < n_; ++j, ++k) {
      const double m = pair_sums_[k] * inv;
      est.moments.set(i, j, m);
      est.standard_errors.set(i, j, std::sqrt(std::max(0.0, 1.0 - m * m) * inv));
    }
  }
  return est;
}

MomentEstimate empirical_moments(const std::vector<SpinVector>& samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("empirical_moments: needs at least 2 samples");
  MomentAccumulator acc(static_cast<int>(samples.front().size()));
  for (const auto& x : samples) acc.add(x);
  return acc.finish();
}

EntropyAccumulator::EntropyAccumulator(int n) : n_(n) {
  if (n < 1 || n > kMaxEnumerationSpins)
    throw std::invalid_argument("EntropyAccumulator: n outside [1, 22]");
  counts_.assign(std::size_t{1} << n, 0);
}

void EntropyAccumulator::add(const SpinVector& x) {
  if (static_cast<int>(x.size()) != n_)
    throw std::invalid_argument("EntropyAccumulator: inconsistent sample length");
  std::size_t index = 0;
  for (int b = 0; b < n_; ++b)
    if (x[b] > 0) index |= std::size_t{1} << b;
  ++counts_[index];
  ++total_;
}

EntropyEstimate EntropyAccumulator::finish() const {
  if (total_ < 1) throw std::invalid_argument("EntropyAccumulator: no samples");
  const double inv = 1.0 / static_cast<double>(total_);
  double h = 0.0;
  std::size_t support = 0;
  for (std::int64_t c : counts_) {
    if (c == 0) continue;
    ++support;
    const double p = static_cast<double>(c) * inv;
    h -= p * std::log(p);
  }
  return {std::max(0.0, h), support, total_};
}

EntropyEstimate plugin_entropy(const std::vector<SpinVector>& samples) {
  if (samples.empty()) throw std::invalid_argument("plugin_entropy: no samples");
  EntropyAccumulator acc(static_cast<int>(samples.front().size()));
  for (const auto& x : samples) acc.add(x);
  return acc.finish();
}

ApproximationReport build_report(const std::string& instance_id,
                                 const IsingInstance& instance,
                                 const PseudoMomentSolution& solution,
                                 const RoundedDistribution& rounding,
                                 const GibbsObjectiveEstimate& rounded,
                                 std::optional<double> exact_log_z, long long sample_count,
                                 std::uint64_t seed) {
  const int n = instance.spin_count();
  if (solution.M.size() != n || rounding.spin_count() != n)
    throw std::invalid_argument("build_report: inconsistent dimensions");
  if (rounded.objective > solution.objective + 1e-6)
    throw std::invalid_argument(
        "build_report: rounded objective exceeds the relaxation objective; "
        "this violates relaxation soundness");

  ApproximationReport r;
  r.instance_id = instance_id;
  r.n = n;
  r.relaxation_objective = solution.objective;
  r.rounding_name = rounding.name();
  r.rounded_objective = rounded.objective;
  r.exact_log_z = exact_log_z;
  r.ratio_rounded_relax = rounded.objective / solution.objective;
  if (exact_log_z) r.ratio_exact_relax = *exact_log_z / solution.objective;
  r.sample_count = sample_count;
  r.seed = seed;
  return r;
}

bool report_self_check(const ApproximationReport& r) {
  const double expected_rounded = r.rounded_objective / r.relaxation_objective;
  if (std::abs(r.ratio_rounded_relax - expected_rounded) > 1e-12) return false;
  if (r.exact_log_z.has_value() != r.ratio_exact_relax.has_value()) return false;
  if (r.exact_log_z) {
    const double expected_exact = *r.exact_log_z / r.relaxation_objective;
    if (std::abs(*r.ratio_exact_relax - expected_exact) > 1e-12) return false;
  }
  return true;
}

namespace {

std::string number(double v) {
  nlohmann::json j = v;
  return j.dump();  // shortest round-trip form, deterministic
}

}  // namespace

std::string report_csv_header() {
  return "instance_id,n,rounding,relax_objective,rounded_objective,exact_logz,"
         "ratio_rounded_relax,ratio_exact_relax,samples,seed";
}

std::string report_csv_row(const ApproximationReport& r) {
  std::string row = r.instance_id;
  row += ',';
  row += std::to_string(r.n);
  row += ',';
  row += r.rounding_name;
  row += ',';
  row += number(r.relaxation_objective);
  row += ',';
  row += number(r.rounded_objective);
  row += ',';
  row += r.exact_log_z ? number(*r.exact_log_z) : "";
  row += ',';
  row += number(r.ratio_rounded_relax);
  row += ',';
  row += r.ratio_exact_relax ? number(*r.ratio_exact_relax) : "";
  row += ',';
  row += std::to_string(r.sample_count);
  row += ',';
  row += std::to_string(r.seed);
  return row;
}

std::string report_json_line(const ApproximationReport& r) {
  nlohmann::ordered_json j;
  j["instance_id"] = r.instance_id;
  j["n"] = r.n;
  j["rounding"] = r.rounding_name;
  j["relax_objective"] = r.relaxation_objective;
  j["rounded_objective"] = r.rounded_objective;
  if (r.exact_log_z)
    j["exact_logz"] = *r.exact_log_z;
  else
    j["exact_logz"] = nullptr;
  j["ratio_rounded_relax"] = r.ratio_rounded_relax;
  if (r.ratio_exact_relax)
    j["ratio_exact_relax"] = *r.ratio_exact_relax;
  else
    j["ratio_exact_relax"] = nullptr;
  j["samples"] = r.sample_count;
  j["seed"] = r.seed;
  return j.dump();
}

}  // namespace maxent
