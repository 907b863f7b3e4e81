#pragma once

#include <vector>

#include <Eigen/Dense>

namespace mpc {

enum class RowSense { LessEqual, Equal };

/// min cᵀx  s.t.  A x (<= | =) b,  x >= 0.
struct LpProblem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  std::vector<RowSense> sense;
  Eigen::VectorXd c;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;      // primal, one entry per column of A
  Eigen::VectorXd duals;  // one per row; <= 0 on LessEqual rows at optimality
  double value = 0.0;
};

/// Two-phase revised simplex with Dantzig pricing and a Bland fallback on
/// stalls. Intended for few rows (tens) and many columns (thousands).
LpSolution solve_lp(const LpProblem& problem, double tol = 1e-11, int max_iterations = 20000);

}  // namespace mpc
