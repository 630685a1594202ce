#include "maxent/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "maxent/errors.hpp"

namespace maxent {

SymMatrix::SymMatrix(int n) : n_(n), tri_(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0) {
  if (n < 0) throw std::invalid_argument("SymMatrix: negative dimension");
}

SymMatrix SymMatrix::identity(int n) {
  SymMatrix m(n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("SymMatrix: input not square");
  const int n = static_cast<int>(a.rows());
  SymMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m.set(i, j, 0.5 * (a(i, j) + a(j, i)));
  return m;
}

Eigen::MatrixXd SymMatrix::dense() const {
  Eigen::MatrixXd a(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) a(i, j) = (*this)(i, j);
  return a;
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : tri_) m = std::max(m, std::abs(v));
  return m;
}

bool SymMatrix::all_finite() const {
  for (double v : tri_)
    if (!std::isfinite(v)) return false;
  return true;
}

EigenDecomposition sym_eigen(const SymMatrix& a) {
  if (!a.all_finite()) throw std::invalid_argument("sym_eigen: non-finite input");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.dense());
  if (solver.info() != Eigen::Success) {
    throw numerical_error("sym_eigen: eigensolver failed, max|A| = " +
                          std::to_string(a.max_abs()));
  }
  const int n = a.size();
  // Eigen returns ascending order; flip to descending.
  EigenDecomposition d;
  d.eigenvalues = solver.eigenvalues().reverse();
  d.eigenvectors.resize(n, n);
  for (int k = 0; k < n; ++k) d.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  return d;
}

SymMatrix project_psd(const SymMatrix& a) {
  const EigenDecomposition d = sym_eigen(a);
  const Eigen::VectorXd clipped = d.eigenvalues.cwiseMax(0.0);
  return SymMatrix::from_dense(d.eigenvectors * clipped.asDiagonal() *
                               d.eigenvectors.transpose());
}

GramFactors gram_factorize(const SymMatrix& a) {
  const EigenDecomposition d = sym_eigen(a);
  const int n = a.size();
  const double min_eig = (n > 0) ? d.eigenvalues(n - 1) : 0.0;
  if (min_eig < -tol().gram_reject) {
    throw numerical_error("gram_factorize: input too indefinite, min eigenvalue " +
                          std::to_string(min_eig));
  }
  GramFactors g;
  g.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    const double lam = std::max(d.eigenvalues(k), 0.0);
    g.vectors.col(k) = d.eigenvectors.col(k) * std::sqrt(lam);
  }
  return g;
}

namespace {

Eigen::MatrixXd eigen_sqrt_factor(const SymMatrix& cov) {
  const EigenDecomposition d = sym_eigen(cov);
  const int n = cov.size();
  Eigen::MatrixXd factor(n, n);
  for (int k = 0; k < n; ++k) {
    factor.col(k) = d.eigenvectors.col(k) * std::sqrt(std::max(d.eigenvalues(k), 0.0));
  }
  return factor;
}

double reconstruction_error(const Eigen::MatrixXd& factor, const SymMatrix& cov) {
  const Eigen::MatrixXd r = factor * factor.transpose() - cov.dense();
  return r.cwiseAbs().maxCoeff();
}

}  // namespace

GaussianSampler::GaussianSampler(const SymMatrix& cov) {
  if (!cov.all_finite()) throw std::invalid_argument("GaussianSampler: non-finite covariance");
  factor_ = eigen_sqrt_factor(cov);
  const double scale = std::max(1.0, cov.max_abs());
  if (reconstruction_error(factor_, cov) > tol().eigen_reconstruct * scale) {
    SymMatrix jittered = cov;
    for (int i = 0; i < cov.size(); ++i)
      jittered.set(i, i, jittered(i, i) + tol().sampler_jitter);
    factor_ = eigen_sqrt_factor(jittered);
    if (reconstruction_error(factor_, cov) > tol().eigen_reconstruct * scale) {
      throw numerical_error("GaussianSampler: covariance factorization failed after jitter");
    }
  }
}

void GaussianSampler::draw_into(RandomStream& stream, Eigen::VectorXd& z,
                                Eigen::VectorXd& out) const {
  const int n = dimension();
  z.resize(n);
  for (int i = 0; i < n; ++i) z(i) = stream.normal();
  out.noalias() = factor_ * z;
}

Eigen::VectorXd GaussianSampler::draw(RandomStream& stream) const {
  Eigen::VectorXd z, out;
  draw_into(stream, z, out);
  return out;
}

std::vector<Eigen::VectorXd> sample_gaussian(const SymMatrix& cov, int count,
                                             std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_gaussian: count must be >= 1");
  const GaussianSampler sampler(cov);
  RandomStream stream(seed);
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(count));
  Eigen::VectorXd z, x;
  for (int k = 0; k < count; ++k) {
    sampler.draw_into(stream, z, x);
    out.push_back(x);
  }
  return out;
}

}  // namespace maxent
