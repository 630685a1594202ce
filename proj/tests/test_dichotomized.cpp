#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "maxent/dichotomized.hpp"
#include "maxent/errors.hpp"
#include "maxent/estimate.hpp"
#include "maxent/oracle.hpp"

using namespace maxent;

namespace {

SymMatrix correlation2(double rho) {
  SymMatrix m = SymMatrix::identity(2);
  m.set(0, 1, rho);
  return m;
}

constexpr double kBetaHypothesis = 0.5773502691896258;  // 3^{-1/2}

}  // namespace

TEST_CASE("model construction") {
  SUBCASE("identity sigma") {
    const DichotomizedGaussianModel model(SymMatrix::identity(3), 1.0);
    const SymMatrix cov = model.sampling_covariance();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(cov(i, j) == (i == j ? 2.0 : 0.0));
    CHECK_FALSE(model.low_beta_warning());
  }
  SUBCASE("normalization") {
    const DichotomizedGaussianModel model(correlation2(1.0), kBetaHypothesis);
    CHECK(model.normalization() == doctest::Approx(1.0 + kBetaHypothesis));
  }
  SUBCASE("bad diagonal is rejected") {
    SymMatrix m = SymMatrix::identity(2);
    m.set(0, 0, 0.9);
    CHECK_THROWS_AS(DichotomizedGaussianModel(m, 1.0), std::invalid_argument);
  }
  SUBCASE("indefinite sigma is rejected") {
    CHECK_THROWS_AS(DichotomizedGaussianModel(correlation2(1.5), 1.0), numerical_error);
  }
  SUBCASE("low beta sets the warning flag") {
    CHECK(DichotomizedGaussianModel(SymMatrix::identity(2), 0.1).low_beta_warning());
    CHECK(DichotomizedGaussianModel(SymMatrix::identity(2), 0.0).low_beta_warning());
    CHECK_FALSE(
        DichotomizedGaussianModel(SymMatrix::identity(2), kBetaHypothesis).low_beta_warning());
  }
}

TEST_CASE("pair_moment closed form") {
  const DichotomizedGaussianModel zero(SymMatrix::identity(2), 0.0);
  CHECK(zero.pair_moment(0, 1) == 0.0);
  const DichotomizedGaussianModel full(correlation2(1.0), 0.0);
  CHECK(full.pair_moment(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  const DichotomizedGaussianModel half(correlation2(0.5), 0.0);
  CHECK(half.pair_moment(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS((void)half.pair_moment(0, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)half.pair_moment(0, 2), std::invalid_argument);
}

TEST_CASE("sampling matches the closed-form moment and the quadrant oracle") {
  // rho = 0.5, beta = 0: moment is exactly 1/3, also derivable from the
  // 2-dimensional quadrant table
  const double rho = 0.5;
  const DichotomizedGaussianModel model(correlation2(rho), 0.0);
  const double closed = model.pair_moment(0, 1);
  const SymMatrix table_moment =
      exact_pair_moments(exact_two_dim_dichotomized_table(rho));
  CHECK(closed == doctest::Approx(table_moment(0, 1)).epsilon(1e-12));

  DichotomizedSampler sampler(model, 424242);
  MomentAccumulator acc(2);
  const int count = 1000000;
  for (int k = 0; k < count; ++k) acc.add(sampler.next());
  const MomentEstimate est = acc.finish();
  CHECK(std::abs(est.moments(0, 1) - closed) <= 4.0 * est.standard_errors(0, 1));
}

TEST_CASE("perfect correlation collapses to two configurations") {
  const DichotomizedGaussianModel model(correlation2(1.0), 0.0);
  DichotomizedSampler sampler(model, 7);
  for (int k = 0; k < 2000; ++k) {
    const SpinVector& x = sampler.next();
    CHECK(x[0] == x[1]);
  }
}

TEST_CASE("independent coordinates have near-zero moments") {
  const DichotomizedGaussianModel model(SymMatrix::identity(4), 0.3);
  const auto samples = sample(model, 200000, 99);
  const MomentEstimate est = empirical_moments(samples);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      CHECK(std::abs(est.moments(i, j)) <= 5.0 * est.standard_errors(i, j));
}

TEST_CASE("sampling is deterministic per seed") {
  const DichotomizedGaussianModel model(correlation2(0.3), 0.5);
  CHECK(sample(model, 50, 11) == sample(model, 50, 11));
  CHECK(sample(model, 50, 11) != sample(model, 50, 12));
}

TEST_CASE("entropy lower bound") {
  SUBCASE("zero at the hypothesis boundary, both spellings") {
    CHECK(entropy_lower_bound(1, std::pow(3.0, -0.5)) == 0.0);
    CHECK(entropy_lower_bound(1, 1.0 / std::sqrt(3.0)) == 0.0);
  }
  SUBCASE("value at the ferromagnetic beta") {
    const double beta = 21.8202;
    const double t = std::pow(3.0, 0.25) * std::sqrt(beta) - 1.0;
    const double expected = t * t / (std::sqrt(3.0) * beta) / 25.0;
    CHECK(entropy_lower_bound(1, beta) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(std::abs(entropy_lower_bound(1, beta) - 0.028046) <= 1e-5);
    CHECK(std::abs(entropy_lower_bound(100, beta) - 2.8046) <= 1e-3);
  }
  SUBCASE("linear in n") {
    const double unit = entropy_lower_bound(1, 2.0);
    for (int n : {2, 5, 17})
      CHECK(entropy_lower_bound(n, 2.0) == doctest::Approx(n * unit).epsilon(1e-12));
  }
  SUBCASE("continuous and increasing away from the boundary") {
    double prev = entropy_lower_bound(1, kBetaHypothesis);
    double prev_beta = kBetaHypothesis;
    for (double beta = 0.6; beta < 4.0; beta += 0.01) {
      const double cur = entropy_lower_bound(1, beta);
      CHECK(std::abs(cur - prev) <= 1.0 * (beta - prev_beta));  // no jumps
      CHECK(cur >= prev - 1e-12);  // increasing on this stretch
      prev = cur;
      prev_beta = beta;
    }
  }
  SUBCASE("below the hypothesis errors out instead of returning zero") {
    CHECK_THROWS_AS((void)entropy_lower_bound(1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS((void)entropy_lower_bound(1, 0.0), std::invalid_argument);
  }
}

TEST_CASE("grothendieck-like constant") {
  const double g = grothendieck_like_constant();
  CHECK(std::abs(g - 2.0 / std::numbers::pi) <= 1e-6);
  CHECK(std::round(g * 100.0) / 100.0 == doctest::Approx(0.64));
  // minimality against a coarse grid
  for (double t = -1.0; t <= 1.0; t += 1e-3) {
    if (t == 0.0) continue;
    CHECK(g <= (2.0 / std::numbers::pi) * std::asin(t) / t + 1e-12);
  }
}

TEST_CASE("moment sandwich") {
  SUBCASE("identity sigma passes trivially") {
    const DichotomizedGaussianModel model(SymMatrix::identity(3), 1.0);
    const SandwichReport r = moment_sandwich_check(model);
    CHECK(r.pass);
    CHECK(r.violations == 0);
    CHECK(r.checked_pairs == 3);
  }
  SUBCASE("rho = 1 at beta = 1 sits inside the bounds") {
    const DichotomizedGaussianModel model(correlation2(1.0), 1.0);
    CHECK(model.pair_moment(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    const SandwichReport r = moment_sandwich_check(model);
    CHECK(r.pass);
    CHECK(r.worst_slack >= 0.0);
    // bounds are [G/2, 1/2]
    CHECK(1.0 / 3.0 >= grothendieck_like_constant() / 2.0);
    CHECK(1.0 / 3.0 <= 0.5);
  }
  SUBCASE("negative correlation keeps the sign") {
    const DichotomizedGaussianModel model(correlation2(-0.8), 1.0);
    const double m = model.pair_moment(0, 1);
    CHECK(m == doctest::Approx(-(2.0 / std::numbers::pi) * std::asin(0.4)).epsilon(1e-12));
    CHECK(std::abs(m + 0.2620) <= 1e-4);
    const SandwichReport r = moment_sandwich_check(model);
    CHECK(r.pass);
    CHECK(std::abs(m) >= grothendieck_like_constant() * 0.8 / 2.0);
    CHECK(std::abs(m) <= 0.8 / 2.0);
  }
}
