#pragma once

#include <span>
#include <vector>

namespace otso {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };
enum class RowSense { Le, Ge, Eq };

struct LpRow {
  std::vector<double> coeff;
  RowSense sense = RowSense::Le;
  double rhs = 0.0;
};

// min objective . x  subject to rows, x >= 0. Dense, intended for problems
// with at most a few hundred variables and rows.
struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<LpRow> rows;

  LpRow& add_row(RowSense sense, double rhs) {
    rows.push_back(LpRow{std::vector<double>(num_vars, 0.0), sense, rhs});
    return rows.back();
  }
};

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  double value = 0.0;
  std::vector<double> x;
  // row_dual[r] = d(value)/d(rhs_r): <= 0 for Le rows, >= 0 for Ge rows.
  std::vector<double> row_dual;
  int iterations = 0;

  bool ok() const { return status == LpStatus::Optimal; }
};

LpSolution lp_solve(const LpProblem& problem);

// Among all optimal solutions, returns the lexicographically smallest x
// (coordinate by coordinate). Duals are taken from the initial solve.
LpSolution lp_solve_lexicographic(const LpProblem& problem);

struct KktReport {
  double primal_residual = 0.0;   // max row/bound violation
  double dual_residual = 0.0;     // max violation of A^T y <= c on support
  double complementarity = 0.0;   // max |y_r * slack_r|
  double duality_gap = 0.0;       // |c.x - y.b|
};

KktReport lp_check_kkt(const LpProblem& problem, const LpSolution& solution);

}  // namespace otso
