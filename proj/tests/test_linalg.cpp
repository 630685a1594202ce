#include <doctest.h>

#include <cmath>

#include "maxent/errors.hpp"
#include "maxent/linalg.hpp"
#include "maxent/rng.hpp"

using namespace maxent;

namespace {

SymMatrix sym2(double a, double b, double d) {
  SymMatrix m(2);
  m.set(0, 0, a);
  m.set(0, 1, b);
  m.set(1, 1, d);
  return m;
}

double reconstruction_error(const EigenDecomposition& d, const SymMatrix& a) {
  const Eigen::MatrixXd r =
      d.eigenvectors * d.eigenvalues.asDiagonal() * d.eigenvectors.transpose() - a.dense();
  return r.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("SymMatrix mirrors entries exactly") {
  SymMatrix m(3);
  m.set(2, 0, 0.3);
  CHECK(m(0, 2) == 0.3);
  CHECK(m(2, 0) == 0.3);
  m.set(0, 2, -0.5);
  CHECK(m(2, 0) == -0.5);
}

TEST_CASE("sym_eigen on fixtures") {
  SUBCASE("identity") {
    const auto d = sym_eigen(SymMatrix::identity(3));
    for (int k = 0; k < 3; ++k) CHECK(d.eigenvalues(k) == doctest::Approx(1.0));
  }
  SUBCASE("diagonal") {
    SymMatrix m(3);
    m.set(0, 0, 2.0);
    m.set(1, 1, 0.0);
    m.set(2, 2, -1.0);
    const auto d = sym_eigen(m);
    CHECK(d.eigenvalues(0) == doctest::Approx(2.0));
    CHECK(d.eigenvalues(1) == doctest::Approx(0.0));
    CHECK(d.eigenvalues(2) == doctest::Approx(-1.0));
  }
  SUBCASE("all-ones 2x2 has eigenvalues 2, 0") {
    const auto d = sym_eigen(sym2(1, 1, 1));
    CHECK(d.eigenvalues(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d.eigenvalues(1) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("sym_eigen invariants on random matrices") {
  RandomStream stream(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(stream.uniform_int(0, 6));
    SymMatrix a(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) a.set(i, j, stream.uniform(-2.0, 2.0));
    const auto d = sym_eigen(a);
    const double scale = std::max(1.0, a.max_abs());
    CHECK(reconstruction_error(d, a) <= 1e-8 * scale);
    const Eigen::MatrixXd vtv =
        d.eigenvectors.transpose() * d.eigenvectors - Eigen::MatrixXd::Identity(n, n);
    CHECK(vtv.cwiseAbs().maxCoeff() <= 1e-8);
    for (int k = 1; k < n; ++k) CHECK(d.eigenvalues(k - 1) >= d.eigenvalues(k));
  }
}

TEST_CASE("project_psd") {
  SUBCASE("PSD input is a fixed point") {
    const SymMatrix p = project_psd(sym2(1.0, 0.5, 1.0));
    CHECK(std::abs(p(0, 1) - 0.5) <= 1e-10);
    CHECK(std::abs(p(0, 0) - 1.0) <= 1e-10);
  }
  SUBCASE("clips a negative diagonal direction") {
    SymMatrix m(2);
    m.set(0, 0, 1.0);
    m.set(1, 1, -1.0);
    const SymMatrix p = project_psd(m);
    CHECK(p(0, 0) == doctest::Approx(1.0));
    CHECK(p(1, 1) == doctest::Approx(0.0));
    CHECK(std::abs(p(0, 1)) <= 1e-12);
  }
  SUBCASE("off-diagonal flip matrix projects to the half matrix") {
    const SymMatrix p = project_psd(sym2(0.0, 1.0, 0.0));
    CHECK(p(0, 0) == doctest::Approx(0.5));
    CHECK(p(0, 1) == doctest::Approx(0.5));
    CHECK(p(1, 1) == doctest::Approx(0.5));
  }
  SUBCASE("idempotent on random inputs") {
    RandomStream stream(3);
    for (int trial = 0; trial < 10; ++trial) {
      SymMatrix a(4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j <= i; ++j) a.set(i, j, stream.uniform(-1.0, 1.0));
      const SymMatrix once = project_psd(a);
      const SymMatrix twice = project_psd(once);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j <= i; ++j) CHECK(std::abs(once(i, j) - twice(i, j)) <= 1e-10);
      CHECK(sym_eigen(once).eigenvalues(3) >= -1e-10);
    }
  }
}

TEST_CASE("gram_factorize") {
  SUBCASE("identity gives an orthonormal pair") {
    const GramFactors g = gram_factorize(SymMatrix::identity(2));
    CHECK(g.inner(0, 0) == doctest::Approx(1.0));
    CHECK(g.inner(1, 1) == doctest::Approx(1.0));
    CHECK(g.inner(0, 1) == doctest::Approx(0.0));
  }
  SUBCASE("all-ones 3x3 gives identical unit vectors") {
    SymMatrix m(3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j <= i; ++j) m.set(i, j, 1.0);
    const GramFactors g = gram_factorize(m);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(g.inner(i, j) == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("correlation 0.5 is reproduced") {
    const GramFactors g = gram_factorize(sym2(1.0, 0.5, 1.0));
    CHECK(g.inner(0, 1) == doctest::Approx(0.5).epsilon(1e-10));
  }
  SUBCASE("indefinite input is rejected") {
    CHECK_THROWS_AS((void)gram_factorize(sym2(1.0, 0.0, -1.0)), numerical_error);
  }
  SUBCASE("reconstructs random PSD inputs") {
    RandomStream stream(5);
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 3 + static_cast<int>(stream.uniform_int(0, 4));
      Eigen::MatrixXd b(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = stream.normal();
      const SymMatrix a = SymMatrix::from_dense(b * b.transpose());
      const GramFactors g = gram_factorize(a);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          CHECK(std::abs(g.inner(i, j) - a(i, j)) <= 1e-8 * std::max(1.0, a.max_abs()));
    }
  }
}

TEST_CASE("sample_gaussian fixtures") {
  SUBCASE("zero covariance gives zero samples") {
    const auto samples = sample_gaussian(SymMatrix(2), 10, 1);
    for (const auto& x : samples) CHECK(x.cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("rank-1 perfect correlation") {
    const auto samples = sample_gaussian(sym2(1.0, 1.0, 1.0), 100, 2);
    for (const auto& x : samples) CHECK(std::abs(x(0) - x(1)) <= 1e-6);
  }
  SUBCASE("deterministic for a fixed seed") {
    const auto a = sample_gaussian(SymMatrix::identity(3), 5, 7);
    const auto b = sample_gaussian(SymMatrix::identity(3), 5, 7);
    for (int k = 0; k < 5; ++k) CHECK((a[k] - b[k]).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("count below 1 is rejected") {
    CHECK_THROWS_AS((void)sample_gaussian(SymMatrix::identity(2), 0, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("sample_gaussian statistics over 1e6 draws") {
  const SymMatrix cov = sym2(1.0, 0.5, 1.0);
  const GaussianSampler sampler(cov);
  RandomStream stream(1234);
  const int n_samples = 1000000;
  double s0 = 0, s1 = 0, s00 = 0, s11 = 0, s01 = 0;
  Eigen::VectorXd z, x;
  for (int k = 0; k < n_samples; ++k) {
    sampler.draw_into(stream, z, x);
    s0 += x(0);
    s1 += x(1);
    s00 += x(0) * x(0);
    s11 += x(1) * x(1);
    s01 += x(0) * x(1);
  }
  const double inv = 1.0 / n_samples;
  const double se_mean = std::sqrt(inv);
  CHECK(std::abs(s0 * inv) <= 5 * se_mean);
  CHECK(std::abs(s1 * inv) <= 5 * se_mean);
  const double se_var = std::sqrt(2.0 * inv);           // Var(x^2) = 2 for N(0,1)
  const double se_cov = std::sqrt((1.0 + 0.25) * inv);  // Var(xy) = 1 + rho^2
  CHECK(std::abs(s00 * inv - 1.0) <= 5 * se_var);
  CHECK(std::abs(s00 * inv - 1.0) <= 0.01);
  CHECK(std::abs(s11 * inv - 1.0) <= 5 * se_var);
  CHECK(std::abs(s01 * inv - 0.5) <= 5 * se_cov);
}
