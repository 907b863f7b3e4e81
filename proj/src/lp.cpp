#include "mpc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpc/errors.hpp"

namespace mpc {

namespace {

struct Tableau {
  Eigen::MatrixXd T;  // rows × (columns + slacks + artificials)
  Eigen::VectorXd b;
  std::vector<int> basis;
  int original = 0;
  int first_artificial = 0;
};

enum class PhaseResult { Optimal, Unbounded, IterationLimit };

// Runs the simplex on `tab` with cost vector `cost`; columns for which
// `allowed` is false never enter the basis.
PhaseResult run_phase(Tableau& tab, const Eigen::VectorXd& cost, const std::vector<bool>& allowed,
                      double tol, int max_iterations, Eigen::VectorXd& duals) {
  const int m = static_cast<int>(tab.T.rows());
  const int total = static_cast<int>(tab.T.cols());
  int stall = 0;
  double last_objective = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < max_iterations; ++iter) {
    Eigen::MatrixXd B(m, m);
    Eigen::VectorXd cb(m);
    for (int i = 0; i < m; ++i) {
      B.col(i) = tab.T.col(tab.basis[i]);
      cb(i) = cost(tab.basis[i]);
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    const Eigen::VectorXd xb = lu.solve(tab.b);
    duals = lu.transpose().solve(cb);
    const double objective = cb.dot(xb);
    stall = objective < last_objective - tol ? 0 : stall + 1;
    last_objective = objective;
    const bool bland = stall > 30;

    std::vector<bool> in_basis(static_cast<std::size_t>(total), false);
    for (int j : tab.basis) in_basis[static_cast<std::size_t>(j)] = true;

    int entering = -1;
    double best = -tol;
    for (int j = 0; j < total; ++j) {
      if (!allowed[static_cast<std::size_t>(j)] || in_basis[static_cast<std::size_t>(j)]) continue;
      const double reduced = cost(j) - duals.dot(tab.T.col(j));
      if (reduced < best) {
        best = reduced;
        entering = j;
        if (bland) break;
      }
    }
    if (entering < 0) return PhaseResult::Optimal;

    const Eigen::VectorXd direction = lu.solve(tab.T.col(entering));
    int leaving = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (direction(i) <= 1e-12) continue;
      const double candidate = std::max(xb(i), 0.0) / direction(i);
      if (candidate < ratio - 1e-15 ||
          (candidate <= ratio + 1e-15 && leaving >= 0 && tab.basis[i] < tab.basis[leaving])) {
        ratio = candidate;
        leaving = i;
      }
    }
    if (leaving < 0) return PhaseResult::Unbounded;
    tab.basis[static_cast<std::size_t>(leaving)] = entering;
  }
  return PhaseResult::IterationLimit;
}

}  // namespace

LpSolution solve_lp(const LpProblem& problem, double tol, int max_iterations) {
  const int m = static_cast<int>(problem.A.rows());
  const int ncols = static_cast<int>(problem.A.cols());
  if (problem.b.size() != m || static_cast<int>(problem.sense.size()) != m ||
      problem.c.size() != ncols) {
    throw DomainError("solve_lp: inconsistent problem dimensions");
  }

  // Row scaling keeps coefficients of very different magnitudes comparable.
  Eigen::VectorXd scale(m);
  for (int i = 0; i < m; ++i) {
    double mx = std::abs(problem.b(i));
    if (ncols > 0) mx = std::max(mx, problem.A.row(i).cwiseAbs().maxCoeff());
    scale(i) = mx > 0.0 ? 1.0 / mx : 1.0;
  }

  int slacks = 0;
  for (auto s : problem.sense) slacks += s == RowSense::LessEqual ? 1 : 0;

  // Rows that need an artificial: equalities, and <= rows with negative rhs.
  std::vector<int> sign(static_cast<std::size_t>(m), 1);
  std::vector<bool> needs_artificial(static_cast<std::size_t>(m), false);
  int artificials = 0;
  for (int i = 0; i < m; ++i) {
    const double bi = problem.b(i) * scale(i);
    if (bi < 0.0) sign[static_cast<std::size_t>(i)] = -1;
    if (problem.sense[static_cast<std::size_t>(i)] == RowSense::Equal || bi < 0.0) {
      needs_artificial[static_cast<std::size_t>(i)] = true;
      ++artificials;
    }
  }

  Tableau tab;
  tab.original = ncols;
  tab.first_artificial = ncols + slacks;
  const int total = ncols + slacks + artificials;
  tab.T = Eigen::MatrixXd::Zero(m, total);
  tab.b.resize(m);
  tab.basis.assign(static_cast<std::size_t>(m), -1);
  int slack_col = ncols;
  int art_col = tab.first_artificial;
  for (int i = 0; i < m; ++i) {
    const double s = scale(i) * sign[static_cast<std::size_t>(i)];
    tab.T.row(i).head(ncols) = problem.A.row(i) * s;
    tab.b(i) = problem.b(i) * s;
    if (problem.sense[static_cast<std::size_t>(i)] == RowSense::LessEqual) {
      tab.T(i, slack_col) = sign[static_cast<std::size_t>(i)];
      if (!needs_artificial[static_cast<std::size_t>(i)]) tab.basis[static_cast<std::size_t>(i)] = slack_col;
      ++slack_col;
    }
    if (needs_artificial[static_cast<std::size_t>(i)]) {
      tab.T(i, art_col) = 1.0;
      tab.basis[static_cast<std::size_t>(i)] = art_col;
      ++art_col;
    }
  }

  LpSolution out;
  Eigen::VectorXd duals;
  std::vector<bool> allowed(static_cast<std::size_t>(total), true);

  if (artificials > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total);
    phase1.tail(artificials).setOnes();
    const PhaseResult r1 = run_phase(tab, phase1, allowed, tol, max_iterations, duals);
    if (r1 == PhaseResult::IterationLimit) {
      out.status = LpStatus::IterationLimit;
      return out;
    }
    Eigen::MatrixXd B(m, m);
    for (int i = 0; i < m; ++i) B.col(i) = tab.T.col(tab.basis[static_cast<std::size_t>(i)]);
    const Eigen::VectorXd xb = B.partialPivLu().solve(tab.b);
    double infeasibility = 0.0;
    for (int i = 0; i < m; ++i) {
      if (tab.basis[static_cast<std::size_t>(i)] >= tab.first_artificial) infeasibility += std::abs(xb(i));
    }
    if (infeasibility > 1e-9) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    // Drive zero-level artificials out of the basis where a pivot exists.
    for (int i = 0; i < m; ++i) {
      if (tab.basis[static_cast<std::size_t>(i)] < tab.first_artificial) continue;
      for (int i2 = 0; i2 < m; ++i2) B.col(i2) = tab.T.col(tab.basis[static_cast<std::size_t>(i2)]);
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
      std::vector<bool> in_basis(static_cast<std::size_t>(total), false);
      for (int j : tab.basis) in_basis[static_cast<std::size_t>(j)] = true;
      for (int j = 0; j < tab.first_artificial; ++j) {
        if (in_basis[static_cast<std::size_t>(j)]) continue;
        const Eigen::VectorXd d = lu.solve(tab.T.col(j));
        if (std::abs(d(i)) > 1e-9) {
          tab.basis[static_cast<std::size_t>(i)] = j;
          break;
        }
      }
    }
    for (int j = tab.first_artificial; j < total; ++j) allowed[static_cast<std::size_t>(j)] = false;
  }

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(total);
  cost.head(ncols) = problem.c;
  const PhaseResult r2 = run_phase(tab, cost, allowed, tol, max_iterations, duals);
  if (r2 == PhaseResult::Unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  if (r2 == PhaseResult::IterationLimit) {
    out.status = LpStatus::IterationLimit;
    return out;
  }

  Eigen::MatrixXd B(m, m);
  for (int i = 0; i < m; ++i) B.col(i) = tab.T.col(tab.basis[static_cast<std::size_t>(i)]);
  const Eigen::VectorXd xb = B.partialPivLu().solve(tab.b);
  out.x = Eigen::VectorXd::Zero(ncols);
  for (int i = 0; i < m; ++i) {
    const int j = tab.basis[static_cast<std::size_t>(i)];
    if (j < ncols) out.x(j) = std::max(xb(i), 0.0);
  }
  out.duals.resize(m);
  for (int i = 0; i < m; ++i) out.duals(i) = duals(i) * scale(i) * sign[static_cast<std::size_t>(i)];
  out.value = problem.c.dot(out.x);
  out.status = LpStatus::Optimal;
  return out;
}

}  // namespace mpc
