#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace maxent {

// Pairwise functional family attached to an instance.
enum class FunctionalKind {
  PairProduct,        // phi_{i,j}(x) = x_i * x_j
  SquaredDifference,  // phi_{i,j}(x) = (x_i - x_j)^2
};

// One coupling J_ij on the unordered pair {i, j}, stored with i < j.
struct Coupling {
  int i;
  int j;
  double value;
};

using SpinVector = std::vector<std::int8_t>;  // entries in {-1, +1}

// Pairwise model over n spins. Energies sum over unordered pairs i < j;
// double the couplings to reproduce the ordered-pair convention. Pairs with
// zero coupling are simply absent, and the set of stored pairs is the graph
// of the instance. Immutable after construction.
class IsingInstance {
 public:
  IsingInstance(int n, FunctionalKind kind, std::vector<Coupling> couplings);

  int spin_count() const { return n_; }
  FunctionalKind kind() const { return kind_; }
  const std::vector<Coupling>& couplings() const { return couplings_; }

  double coupling_sum() const;       // sum of J_ij
  double coupling_abs_sum() const;   // sum of |J_ij|
  double coupling_frobenius() const; // ||J||_F of the symmetric coupling matrix

 private:
  int n_;
  FunctionalKind kind_;
  std::vector<Coupling> couplings_;  // canonical: i < j, sorted, unique
};

double energy(const IsingInstance& instance, const SpinVector& x);

// Test ensembles.
struct FerromagneticUniform {
  double lo;
  double hi;
};
struct SpinGlassPM1 {};
enum class WeightDist { PlusMinusOne, GaussianUnit };
struct ErdosRenyi {
  double p;
  WeightDist weights = WeightDist::PlusMinusOne;
};
using Ensemble = std::variant<FerromagneticUniform, SpinGlassPM1, ErdosRenyi>;

IsingInstance generate(const Ensemble& ensemble, int n, std::uint64_t seed,
                       FunctionalKind kind = FunctionalKind::PairProduct);

// Text round trip; store(load(t)) == t for canonical t.
IsingInstance load_instance(const std::string& text);
std::string store_instance(const IsingInstance& instance);

struct ColoringResult {
  std::vector<int> colors;  // one color per vertex, 0-based
  int chi_upper;            // number of colors used
};

// Greedy proper coloring of the coupling graph; vertices in descending
// degree order, ties broken by index. chi_upper bounds chi(G) from above.
ColoringResult greedy_coloring(const IsingInstance& instance);

}  // namespace maxent
