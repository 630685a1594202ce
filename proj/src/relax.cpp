#include "maxent/relax.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "maxent/errors.hpp"

namespace maxent {

namespace {

Eigen::MatrixXd psd_clip(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (a + a.transpose()));
  if (solver.info() != Eigen::Success)
    throw numerical_error("project_feasible: eigensolver failed");
  const Eigen::VectorXd lam = solver.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd out = solver.eigenvectors() * lam.asDiagonal() *
                        solver.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

struct DykstraResult {
  Eigen::MatrixXd matrix;
  int inner_iterations;
};

// Dykstra cycle over {PSD} -> ({entries >= 0} ->) {diag = 1}. The diagonal
// set is affine, so it carries no correction term.
DykstraResult dykstra_project(const Eigen::MatrixXd& m0, bool ferro, int max_inner,
                              double change_tolerance) {
  const auto n = m0.rows();
  Eigen::MatrixXd x = 0.5 * (m0 + m0.transpose());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  int used = max_inner;
  for (int it = 1; it <= max_inner; ++it) {
    const Eigen::MatrixXd x_prev = x;
    const Eigen::MatrixXd y = psd_clip(x + p);
    p = x + p - y;
    Eigen::MatrixXd z;
    if (ferro) {
      z = (y + q).cwiseMax(0.0);
      q = y + q - z;
    } else {
      z = y;
    }
    x = z;
    x.diagonal().setOnes();
    if ((x - x_prev).cwiseAbs().maxCoeff() < change_tolerance) {
      used = it;
      break;
    }
  }
  return {std::move(x), used};
}

FeasibilityReport residuals_of(const Eigen::MatrixXd& m, bool ferro) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw numerical_error("check_feasibility: eigensolver failed");
  FeasibilityReport r;
  // bordered matrix [[1, 0], [0, M]] only adds the eigenvalue 1
  r.min_eigenvalue = std::min(1.0, solver.eigenvalues().minCoeff());
  r.max_diag_error = (m.diagonal().array() - 1.0).abs().maxCoeff();
  r.min_entry = m.minCoeff();
  r.ferro = ferro;
  return r;
}

double objective_of(const IsingInstance& instance, const Eigen::MatrixXd& m) {
  double e = 0.0;
  if (instance.kind() == FunctionalKind::PairProduct) {
    for (const auto& c : instance.couplings()) e += c.value * m(c.i, c.j);
  } else {
    for (const auto& c : instance.couplings()) e += c.value * (2.0 - 2.0 * m(c.i, c.j));
  }
  return e + instance.spin_count();
}

}  // namespace

double relax_objective(const IsingInstance& instance, const SymMatrix& M) {
  if (M.size() != instance.spin_count())
    throw std::invalid_argument("relax_objective: dimension mismatch");
  for (int i = 0; i < M.size(); ++i)
    if (std::abs(M(i, i) - 1.0) > 1e-6)
      throw std::invalid_argument("relax_objective: diagonal entry " + std::to_string(i) +
                                  " is not 1");
  return objective_of(instance, M.dense());
}

FeasibilityReport check_feasibility(const SymMatrix& M, bool ferro) {
  return residuals_of(M.dense(), ferro);
}

SymMatrix project_feasible(const SymMatrix& M, bool ferro, int max_inner,
                           double feasibility_tolerance) {
  if (!M.all_finite()) throw std::invalid_argument("project_feasible: non-finite input");
  const DykstraResult r =
      dykstra_project(M.dense(), ferro, max_inner, 0.01 * feasibility_tolerance);
  const FeasibilityReport rep = residuals_of(r.matrix, ferro);
  if (!rep.pass(feasibility_tolerance)) {
    throw numerical_error(
        "project_feasible: inner iteration cap exceeded, residuals min_eig = " +
        std::to_string(rep.min_eigenvalue) + ", diag = " + std::to_string(rep.max_diag_error) +
        ", min_entry = " + std::to_string(rep.min_entry));
  }
  return SymMatrix::from_dense(r.matrix);
}

PseudoMomentSolution solve_relaxation(const IsingInstance& instance,
                                      const SolverConfig& config) {
  const int n = instance.spin_count();
  if (config.max_iterations < 0 || config.dykstra_inner_iterations < 1 ||
      config.objective_tolerance <= 0.0 || config.feasibility_tolerance <= 0.0)
    throw std::invalid_argument("solve_relaxation: invalid solver configuration");
  if (config.ferro) {
    for (const auto& c : instance.couplings())
      if (!(c.value > 0.0))
        throw std::invalid_argument("solve_relaxation: ferro mode requires all J > 0");
  }

  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  const double norm_f = instance.coupling_frobenius();
  PseudoMomentSolution best;
  best.M = SymMatrix::identity(n);
  best.objective = objective_of(instance, identity);
  best.residuals = residuals_of(identity, config.ferro);
  best.iterations = 0;
  best.converged = true;
  if (norm_f == 0.0) return best;  // every feasible M is optimal; keep M = I

  // gradient of the energy term; constant because the objective is linear in M
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, n);
  const double pair_sign =
      instance.kind() == FunctionalKind::PairProduct ? 1.0 : -2.0;
  for (const auto& c : instance.couplings()) {
    grad(c.i, c.j) += pair_sign * c.value;
    grad(c.j, c.i) += pair_sign * c.value;
  }

  const double step = config.step_size > 0.0 ? config.step_size : 1.0 / norm_f;
  const double change_tol = 0.01 * config.feasibility_tolerance;

  Eigen::MatrixXd m = identity;
  double prev_objective = best.objective;
  int stable = 0;
  best.converged = false;
  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    m = dykstra_project(m + step * grad, config.ferro, config.dykstra_inner_iterations,
                        change_tol)
            .matrix;
    const double obj = objective_of(instance, m);
    const FeasibilityReport rep = residuals_of(m, config.ferro);
    if (rep.pass(config.feasibility_tolerance) && obj > best.objective) {
      best.M = SymMatrix::from_dense(m);
      best.objective = obj;
      best.residuals = rep;
    }
    best.iterations = iter;
    const double rel_change = std::abs(obj - prev_objective) / std::max(1.0, std::abs(obj));
    prev_objective = obj;
    stable = rel_change < config.objective_tolerance ? stable + 1 : 0;
    if (stable >= 50 && rep.pass(config.feasibility_tolerance)) {
      best.converged = true;
      break;
    }
  }
  return best;
}

std::string store_solution(const PseudoMomentSolution& solution) {
  nlohmann::ordered_json j;
  const int n = solution.M.size();
  j["n"] = n;
  j["objective"] = solution.objective;
  j["converged"] = solution.converged;
  j["residuals"] = {{"min_eigenvalue", solution.residuals.min_eigenvalue},
                    {"max_diag_error", solution.residuals.max_diag_error},
                    {"min_entry", solution.residuals.min_entry},
                    {"ferro", solution.residuals.ferro}};
  auto arr = nlohmann::ordered_json::array();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) arr.push_back(solution.M(i, k));
  j["M"] = std::move(arr);
  j["iterations"] = solution.iterations;
  return j.dump();
}

PseudoMomentSolution load_solution(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("solution format: ") + e.what());
  }
  PseudoMomentSolution s;
  const int n = j.at("n").get<int>();
  if (n < 1) throw std::invalid_argument("solution format: n must be >= 1");
  const auto& arr = j.at("M");
  if (static_cast<int>(arr.size()) != n * n)
    throw std::invalid_argument("solution format: M must hold n*n entries");
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) m(i, k) = arr[static_cast<std::size_t>(i) * n + k].get<double>();
  s.M = SymMatrix::from_dense(m);
  s.objective = j.at("objective").get<double>();
  s.converged = j.at("converged").get<bool>();
  const auto& r = j.at("residuals");
  s.residuals = {r.at("min_eigenvalue").get<double>(), r.at("max_diag_error").get<double>(),
                 r.at("min_entry").get<double>(), r.at("ferro").get<bool>()};
  s.iterations = j.value("iterations", 0);
  return s;
}

}  // namespace maxent
