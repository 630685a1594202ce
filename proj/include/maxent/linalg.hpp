#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "maxent/rng.hpp"

namespace maxent {

// All numeric tolerances in one place.
struct Tolerances {
  double eigen_reconstruct = 1e-8;  // ||V L V^T - A||_max, relative to max(1, ||A||_max)
  double psd_floor = 1e-10;         // eigenvalues of a projected matrix stay above -psd_floor
  double gram_match = 1e-8;         // |<v_i, v_j> - A_ij|
  double gram_clip = 1e-8;          // eigenvalues in [-gram_clip, 0) are clipped silently
  double gram_reject = 1e-6;        // min eigenvalue below -gram_reject rejects the input
  double sampler_jitter = 1e-10;    // diagonal jitter retried once on factorization failure
  double feasibility = 1e-8;        // pseudo-moment feasibility residuals
  double unit_diag = 1e-8;          // |diag - 1| for correlation-type inputs
};

inline const Tolerances& tol() {
  static const Tolerances t{};
  return t;
}

// Dense symmetric matrix. The lower triangle is stored once and mirrored on
// access, so entries(i, j) == entries(j, i) holds exactly by construction.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n);

  static SymMatrix identity(int n);
  // Symmetrizes as (A + A^T)/2.
  static SymMatrix from_dense(const Eigen::MatrixXd& a);

  int size() const { return n_; }

  double operator()(int i, int j) const { return tri_[index(i, j)]; }
  void set(int i, int j, double v) { tri_[index(i, j)] = v; }

  Eigen::MatrixXd dense() const;
  double max_abs() const;
  bool all_finite() const;

 private:
  std::size_t index(int i, int j) const {
    if (i < j) std::swap(i, j);
    return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
  }

  int n_ = 0;
  std::vector<double> tri_;
};

struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;   // descending
  Eigen::MatrixXd eigenvectors;  // orthonormal columns, same order
};

EigenDecomposition sym_eigen(const SymMatrix& a);

// Frobenius-nearest PSD matrix: negative eigenvalues clipped to zero.
SymMatrix project_psd(const SymMatrix& a);

// Row i is the Gram vector v_i, with <v_i, v_j> = A_ij.
struct GramFactors {
  Eigen::MatrixXd vectors;  // n x d, d <= n
  int count() const { return static_cast<int>(vectors.rows()); }
  int dimension() const { return static_cast<int>(vectors.cols()); }
  double inner(int i, int j) const { return vectors.row(i).dot(vectors.row(j)); }
};

// Requires min eigenvalue >= -tol().gram_reject; smaller negatives are an error,
// eigenvalues in [-gram_clip, 0) are clipped.
GramFactors gram_factorize(const SymMatrix& a);

// Zero-mean Gaussian sampler for a fixed PSD covariance. The factor is an
// eigendecomposition square root, so rank-deficient covariances need no
// jitter; a jitter of sampler_jitter * I is retried once if reconstruction
// fails. draw_into is const and takes caller-owned buffers, so one sampler
// may serve concurrent streams.
class GaussianSampler {
 public:
  explicit GaussianSampler(const SymMatrix& cov);

  int dimension() const { return static_cast<int>(factor_.rows()); }

  void draw_into(RandomStream& stream, Eigen::VectorXd& z, Eigen::VectorXd& out) const;
  Eigen::VectorXd draw(RandomStream& stream) const;

 private:
  Eigen::MatrixXd factor_;  // factor * N(0, I) has the requested covariance
};

std::vector<Eigen::VectorXd> sample_gaussian(const SymMatrix& cov, int count,
                                             std::uint64_t seed);

}  // namespace maxent
