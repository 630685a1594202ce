#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maxent/linalg.hpp"
#include "maxent/model.hpp"
#include "maxent/relax.hpp"
#include "maxent/rounding.hpp"

namespace maxent {

struct MomentEstimate {
  SymMatrix moments;          // entrywise mean of x_i x_j, unit diagonal
  SymMatrix standard_errors;  // sqrt((1 - m^2) / N)
  long long count;
};

// Streaming fold over samples; partial sums are merged in a fixed order so
// the result does not depend on batching.
class MomentAccumulator {
 public:
  explicit MomentAccumulator(int n);
  void add(const SpinVector& x);
  MomentEstimate finish() const;  // needs >= 2 samples

 private:
  int n_;
  long long count_ = 0;
  std::vector<double> pair_sums_;  // i < j, row-major over pairs
};

MomentEstimate empirical_moments(const std::vector<SpinVector>& samples);

struct EntropyEstimate {
  double entropy;  // natural-log units; plug-in, biased downward
  std::size_t support_size;
  long long count;
};

class EntropyAccumulator {
 public:
  explicit EntropyAccumulator(int n);  // n <= 22, dense count table
  void add(const SpinVector& x);
  EntropyEstimate finish() const;  // needs >= 1 sample

 private:
  int n_;
  long long total_ = 0;
  std::vector<std::int64_t> counts_;
};

EntropyEstimate plugin_entropy(const std::vector<SpinVector>& samples);

struct ApproximationReport {
  std::string instance_id;
  int n;
  double relaxation_objective;
  std::string rounding_name;
  double rounded_objective;
  std::optional<double> exact_log_z;
  double ratio_rounded_relax;
  std::optional<double> ratio_exact_relax;
  long long sample_count;
  std::uint64_t seed;
};

// Assembles a report and validates it: dimensions must agree and the rounded
// objective may not exceed the relaxation objective (that would contradict
// relaxation soundness).
ApproximationReport build_report(const std::string& instance_id, const IsingInstance& instance,
                                 const PseudoMomentSolution& solution,
                                 const RoundedDistribution& rounding,
                                 const GibbsObjectiveEstimate& rounded,
                                 std::optional<double> exact_log_z, long long sample_count,
                                 std::uint64_t seed);

// Ratios recomputed from the stored fields match the stored ratios.
bool report_self_check(const ApproximationReport& report);

std::string report_csv_header();
std::string report_csv_row(const ApproximationReport& report);
std::string report_json_line(const ApproximationReport& report);

}  // namespace maxent
