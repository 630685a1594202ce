#pragma once

#include <string>

#include "maxent/linalg.hpp"
#include "maxent/model.hpp"

namespace maxent {

struct SolverConfig {
  double step_size = 0.0;              // <= 0 means the default 1 / ||J||_F
  int max_iterations = 20000;
  double objective_tolerance = 1e-7;   // relative change, must hold 50 iterations running
  double feasibility_tolerance = 1e-8;
  int dykstra_inner_iterations = 200;
  bool ferro = false;                  // adds the entrywise M_ij >= 0 constraint
};

struct FeasibilityReport {
  double min_eigenvalue;   // of the bordered matrix [[1, 0], [0, M]]
  double max_diag_error;   // max_i |M_ii - 1|
  double min_entry;        // most negative entry; only gates in ferro mode
  bool ferro;

  bool pass(double tolerance) const {
    return min_eigenvalue >= -tolerance && max_diag_error <= tolerance &&
           (!ferro || min_entry >= -tolerance);
  }
};

// Feasible pseudo-moment matrix with the objective value reached. The first
// moments are fixed at zero (the objective is even under global spin flip),
// so only the n x n pair block is carried.
struct PseudoMomentSolution {
  SymMatrix M;
  double objective;
  FeasibilityReport residuals;
  int iterations;
  bool converged;
};

// Energy term of the relaxation plus the entropy proxy. The proxy is the
// constant n, not n log 2: the relaxation bounds entropy by one unit per
// spin, and the reported objectives keep that convention.
double relax_objective(const IsingInstance& instance, const SymMatrix& M);

// Projected gradient ascent with Dykstra projections onto
// {PSD} ∩ {diag = 1} (∩ {entries >= 0} in ferro mode). Returns the best
// feasible iterate; converged = false is reported, not thrown.
PseudoMomentSolution solve_relaxation(const IsingInstance& instance,
                                      const SolverConfig& config = {});

FeasibilityReport check_feasibility(const SymMatrix& M, bool ferro);

// Dykstra projection onto the feasible set; fixed point on feasible inputs.
// Throws numerical_error if the inner iteration cap leaves residuals above
// the feasibility tolerance.
SymMatrix project_feasible(const SymMatrix& M, bool ferro,
                           int max_inner = 200, double feasibility_tolerance = 1e-8);

// Solution file round trip (objective, converged, residuals, M row-major).
std::string store_solution(const PseudoMomentSolution& solution);
PseudoMomentSolution load_solution(const std::string& text);

}  // namespace maxent
