#include "maxent/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "maxent/rng.hpp"

namespace maxent {

IsingInstance::IsingInstance(int n, FunctionalKind kind, std::vector<Coupling> couplings)
    : n_(n), kind_(kind), couplings_(std::move(couplings)) {
  if (n < 1) throw std::invalid_argument("IsingInstance: n must be >= 1");
  for (auto& c : couplings_) {
    if (c.i == c.j) throw std::invalid_argument("IsingInstance: self-loop on vertex " +
                                                std::to_string(c.i));
    if (c.i > c.j) std::swap(c.i, c.j);
    if (c.i < 0 || c.j >= n)
      throw std::invalid_argument("IsingInstance: pair (" + std::to_string(c.i) + ", " +
                                  std::to_string(c.j) + ") out of range");
    if (!std::isfinite(c.value))
      throw std::invalid_argument("IsingInstance: non-finite coupling");
  }
  std::sort(couplings_.begin(), couplings_.end(), [](const Coupling& a, const Coupling& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  for (std::size_t k = 1; k < couplings_.size(); ++k) {
    if (couplings_[k - 1].i == couplings_[k].i && couplings_[k - 1].j == couplings_[k].j)
      throw std::invalid_argument("IsingInstance: duplicate pair (" +
                                  std::to_string(couplings_[k].i) + ", " +
                                  std::to_string(couplings_[k].j) + ")");
  }
}

double IsingInstance::coupling_sum() const {
  double s = 0.0;
  for (const auto& c : couplings_) s += c.value;
  return s;
}

double IsingInstance::coupling_abs_sum() const {
  double s = 0.0;
  for (const auto& c : couplings_) s += std::abs(c.value);
  return s;
}

double IsingInstance::coupling_frobenius() const {
  double s = 0.0;
  for (const auto& c : couplings_) s += 2.0 * c.value * c.value;
  return std::sqrt(s);
}

double energy(const IsingInstance& instance, const SpinVector& x) {
  if (static_cast<int>(x.size()) != instance.spin_count())
    throw std::invalid_argument("energy: spin vector has length " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(instance.spin_count()));
  double e = 0.0;
  if (instance.kind() == FunctionalKind::PairProduct) {
    for (const auto& c : instance.couplings())
      e += c.value * static_cast<double>(x[c.i] * x[c.j]);
  } else {
    for (const auto& c : instance.couplings()) {
      const double d = static_cast<double>(x[c.i] - x[c.j]);
      e += c.value * d * d;
    }
  }
  return e;
}

IsingInstance generate(const Ensemble& ensemble, int n, std::uint64_t seed,
                       FunctionalKind kind) {
  if (n < 1) throw std::invalid_argument("generate: n must be >= 1");
  RandomStream stream(seed);
  std::vector<Coupling> couplings;

  if (const auto* ferro = std::get_if<FerromagneticUniform>(&ensemble)) {
    if (!(0.0 < ferro->lo && ferro->lo <= ferro->hi))
      throw std::invalid_argument("generate: ferromagnetic range needs 0 < lo <= hi");
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        couplings.push_back({i, j, stream.uniform(ferro->lo, ferro->hi)});
  } else if (std::holds_alternative<SpinGlassPM1>(ensemble)) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        couplings.push_back({i, j, stream.coin() ? 1.0 : -1.0});
  } else {
    const auto& er = std::get<ErdosRenyi>(ensemble);
    if (!(er.p >= 0.0 && er.p <= 1.0))
      throw std::invalid_argument("generate: edge probability outside [0, 1]");
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (stream.uniform01() >= er.p) continue;
        const double w = (er.weights == WeightDist::PlusMinusOne)
                             ? (stream.coin() ? 1.0 : -1.0)
                             : stream.normal();
        couplings.push_back({i, j, w});
      }
  }
  return IsingInstance(n, kind, std::move(couplings));
}

namespace {

std::string kind_name(FunctionalKind kind) {
  return kind == FunctionalKind::PairProduct ? "pair" : "sqdiff";
}

FunctionalKind kind_from_name(const std::string& name) {
  if (name == "pair") return FunctionalKind::PairProduct;
  if (name == "sqdiff") return FunctionalKind::SquaredDifference;
  throw std::invalid_argument("instance format: unknown kind \"" + name + "\"");
}

}  // namespace

IsingInstance load_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("instance format: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("kind") || !j.contains("couplings"))
    throw std::invalid_argument("instance format: need fields n, kind, couplings");
  const int n = j.at("n").get<int>();
  const FunctionalKind kind = kind_from_name(j.at("kind").get<std::string>());
  std::vector<Coupling> couplings;
  int line = 0;
  for (const auto& entry : j.at("couplings")) {
    ++line;
    if (!entry.is_array() || entry.size() != 3)
      throw std::invalid_argument("instance format: coupling #" + std::to_string(line) +
                                  " is not a [i, j, J] triple");
    couplings.push_back({entry[0].get<int>(), entry[1].get<int>(), entry[2].get<double>()});
  }
  return IsingInstance(n, kind, std::move(couplings));
}

std::string store_instance(const IsingInstance& instance) {
  nlohmann::ordered_json j;
  j["n"] = instance.spin_count();
  j["kind"] = kind_name(instance.kind());
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : instance.couplings())
    arr.push_back(nlohmann::ordered_json::array({c.i, c.j, c.value}));
  j["couplings"] = std::move(arr);
  return j.dump();
}

ColoringResult greedy_coloring(const IsingInstance& instance) {
  const int n = instance.spin_count();
  std::vector<std::vector<int>> adjacency(n);
  for (const auto& c : instance.couplings()) {
    adjacency[c.i].push_back(c.j);
    adjacency[c.j].push_back(c.i);
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return adjacency[a].size() != adjacency[b].size()
               ? adjacency[a].size() > adjacency[b].size()
               : a < b;
  });

  ColoringResult result;
  result.colors.assign(n, -1);
  result.chi_upper = 0;
  std::vector<char> used;
  for (int v : order) {
    used.assign(static_cast<std::size_t>(result.chi_upper) + 1, 0);
    for (int w : adjacency[v])
      if (result.colors[w] >= 0) used[result.colors[w]] = 1;
    int color = 0;
    while (used[color]) ++color;
    result.colors[v] = color;
    result.chi_upper = std::max(result.chi_upper, color + 1);
  }
  return result;
}

}  // namespace maxent
