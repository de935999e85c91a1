#include "otso/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace otso {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kRatioTol = 1e-10;
constexpr double kFeasTol = 1e-7;

// Dense tableau simplex over equality form  A z = b, z >= 0, b >= 0.
// Columns: structural | slack/surplus | artificial. Both phase objectives are
// carried as extra tableau rows and updated by the same pivots.
class Tableau {
 public:
  Tableau(const LpProblem& p) : m_(static_cast<int>(p.rows.size())), n_(p.num_vars) {
    row_flip_.assign(m_, 1.0);
    slack_col_.assign(m_, -1);
    art_col_.assign(m_, -1);
    sense_.assign(m_, RowSense::Le);

    int num_slack = 0;
    for (const auto& r : p.rows)
      if (r.sense != RowSense::Eq) ++num_slack;
    // every row gets an artificial column; unused ones just never enter
    cols_ = n_ + num_slack + m_;
    width_ = cols_ + 1;  // + rhs
    a_.assign(static_cast<std::size_t>(m_ + 2) * width_, 0.0);
    basis_.assign(m_, -1);

    int sc = n_;
    for (int r = 0; r < m_; ++r) {
      const LpRow& row = p.rows[r];
      if (static_cast<int>(row.coeff.size()) != n_)
        throw std::invalid_argument("lp_solve: row dimension mismatch");
      double flip = 1.0;
      RowSense sense = row.sense;
      if (row.rhs < 0.0) {
        flip = -1.0;
        if (sense == RowSense::Le)
          sense = RowSense::Ge;
        else if (sense == RowSense::Ge)
          sense = RowSense::Le;
      }
      row_flip_[r] = flip;
      sense_[r] = sense;
      for (int j = 0; j < n_; ++j) at(r, j) = flip * row.coeff[j];
      rhs(r) = flip * row.rhs;
      if (row.sense != RowSense::Eq) {
        slack_col_[r] = sc;
        at(r, sc) = (sense == RowSense::Le) ? 1.0 : -1.0;
        ++sc;
      }
      art_col_[r] = n_ + num_slack + r;
      at(r, art_col_[r]) = 1.0;
    }

    // starting basis: slack where it is +1, artificial otherwise
    for (int r = 0; r < m_; ++r) {
      if (slack_col_[r] >= 0 && at(r, slack_col_[r]) > 0.5) {
        basis_[r] = slack_col_[r];
        at(r, art_col_[r]) = 0.0;
        art_col_[r] = -1;
      } else {
        basis_[r] = art_col_[r];
      }
    }

    // phase-2 objective row (row m_): original costs
    for (int j = 0; j < n_; ++j) obj2(j) = p.objective[j];
    // phase-1 objective row (row m_+1): cost 1 on live artificials, then
    // reduced against the rows whose artificial is basic
    for (int r = 0; r < m_; ++r)
      if (art_col_[r] >= 0) a_[idx(m_ + 1, art_col_[r])] = 1.0;
    for (int r = 0; r < m_; ++r) {
      if (art_col_[r] < 0) continue;
      for (int j = 0; j < width_; ++j) a_[idx(m_ + 1, j)] -= a_[idx(r, j)];
    }
  }

  LpStatus run(int& iterations) {
    // phase 1
    if (has_artificial()) {
      LpStatus s = iterate(m_ + 1, /*allow_artificial=*/true, iterations);
      if (s == LpStatus::IterLimit) return s;
      if (phase1_value() > kFeasTol) return LpStatus::Infeasible;
      drive_out_artificials();
    }
    artificial_barred_ = true;
    return iterate(m_, /*allow_artificial=*/false, iterations);
  }

  double value() const { return -a_[idx(m_, cols_)]; }

  std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (int r = 0; r < m_; ++r)
      if (basis_[r] >= 0 && basis_[r] < n_) x[basis_[r]] = rhs_const(r);
    return x;
  }

  // y_r = d(value)/d(b_r) in the user's orientation
  std::vector<double> duals() const {
    std::vector<double> y(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      double rc;
      if (slack_col_[r] >= 0) {
        double sign = sense_[r] == RowSense::Le ? 1.0 : -1.0;
        rc = a_[idx(m_, slack_col_[r])];
        y[r] = -sign * rc;
      } else {
        // equality row: artificial column was e_r with zero phase-2 cost
        int c = n_ + num_slack_total() + r;
        rc = a_[idx(m_, c)];
        y[r] = -rc;
      }
      y[r] *= row_flip_[r];
    }
    return y;
  }

 private:
  int num_slack_total() const { return cols_ - n_ - m_; }
  std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * width_ + c; }
  double& at(int r, int c) { return a_[idx(r, c)]; }
  double& rhs(int r) { return a_[idx(r, cols_)]; }
  double rhs_const(int r) const { return a_[idx(r, cols_)]; }
  double& obj2(int c) { return a_[idx(m_, c)]; }
  double phase1_value() const { return -a_[idx(m_ + 1, cols_)]; }

  bool has_artificial() const {
    for (int r = 0; r < m_; ++r)
      if (basis_[r] >= n_ + num_slack_total()) return true;
    return false;
  }

  bool is_artificial(int col) const { return col >= n_ + num_slack_total(); }

  void pivot(int pr, int pc) {
    double piv = at(pr, pc);
    double inv = 1.0 / piv;
    for (int j = 0; j < width_; ++j) a_[idx(pr, j)] *= inv;
    at(pr, pc) = 1.0;
    for (int r = 0; r < m_ + 2; ++r) {
      if (r == pr) continue;
      double f = a_[idx(r, pc)];
      if (f == 0.0) continue;
      for (int j = 0; j < width_; ++j) a_[idx(r, j)] -= f * a_[idx(pr, j)];
      a_[idx(r, pc)] = 0.0;
    }
    basis_[pr] = pc;
  }

  LpStatus iterate(int obj_row, bool allow_artificial, int& iterations) {
    const int max_iter = 2000 + 200 * (m_ + n_);
    int stall = 0;
    double last = -a_[idx(obj_row, cols_)];
    while (true) {
      if (++iterations > max_iter) return LpStatus::IterLimit;
      bool bland = stall > 2 * (m_ + n_);
      int pc = -1;
      double best = -kPivotTol;
      for (int j = 0; j < cols_; ++j) {
        if (!allow_artificial && is_artificial(j)) continue;
        if (artificial_barred_ && is_artificial(j)) continue;
        double rc = a_[idx(obj_row, j)];
        if (rc < -kPivotTol) {
          if (bland) { pc = j; break; }
          if (rc < best) { best = rc; pc = j; }
        }
      }
      if (pc < 0) return LpStatus::Optimal;

      int pr = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r) {
        double arc = at(r, pc);
        if (arc > kRatioTol) {
          double ratio = rhs_const(r) / arc;
          if (ratio < best_ratio - kRatioTol ||
              (ratio < best_ratio + kRatioTol && (pr < 0 || basis_[r] < basis_[pr]))) {
            best_ratio = ratio;
            pr = r;
          }
        }
      }
      if (pr < 0) return LpStatus::Unbounded;
      pivot(pr, pc);

      double cur = -a_[idx(obj_row, cols_)];
      if (cur < last - 1e-12) { stall = 0; last = cur; } else { ++stall; }
    }
  }

  void drive_out_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_ + num_slack_total()) continue;
      int pc = -1;
      for (int j = 0; j < n_ + num_slack_total(); ++j) {
        if (std::abs(at(r, j)) > kFeasTol) { pc = j; break; }
      }
      if (pc >= 0) pivot(r, pc);
      // else: the row is redundant; the artificial stays basic at level 0
    }
  }

  int m_, n_, cols_, width_;
  std::vector<double> a_;
  std::vector<int> basis_;
  std::vector<int> slack_col_, art_col_;
  std::vector<double> row_flip_;
  std::vector<RowSense> sense_;
  bool artificial_barred_ = false;
};

}  // namespace

LpSolution lp_solve(const LpProblem& problem) {
  LpSolution sol;
  if (problem.num_vars == 0) {
    // feasibility of constant rows only
    sol.x.clear();
    sol.row_dual.assign(problem.rows.size(), 0.0);
    for (const auto& r : problem.rows) {
      bool ok = (r.sense == RowSense::Le && 0.0 <= r.rhs + kFeasTol) ||
                (r.sense == RowSense::Ge && 0.0 >= r.rhs - kFeasTol) ||
                (r.sense == RowSense::Eq && std::abs(r.rhs) <= kFeasTol);
      if (!ok) sol.status = LpStatus::Infeasible;
    }
    return sol;
  }
  if (static_cast<int>(problem.objective.size()) != problem.num_vars)
    throw std::invalid_argument("lp_solve: objective dimension mismatch");

  Tableau t(problem);
  int iters = 0;
  sol.status = t.run(iters);
  sol.iterations = iters;
  if (sol.status == LpStatus::Optimal) {
    sol.x = t.primal();
    sol.value = t.value();
    sol.row_dual = t.duals();
  }
  return sol;
}

LpSolution lp_solve_lexicographic(const LpProblem& problem) {
  LpSolution base = lp_solve(problem);
  if (!base.ok()) return base;

  LpProblem p = problem;
  double eps = 1e-9 * (1.0 + std::abs(base.value));
  {
    LpRow& pin = p.add_row(RowSense::Le, base.value + eps);
    pin.coeff = problem.objective;
  }
  std::vector<double> x = base.x;
  for (int j = 0; j < problem.num_vars; ++j) {
    LpProblem q = p;
    q.objective.assign(problem.num_vars, 0.0);
    q.objective[j] = 1.0;
    LpSolution s = lp_solve(q);
    if (!s.ok()) break;  // numerical trouble: keep the best x so far
    x = s.x;
    LpRow& pin = p.add_row(RowSense::Le, s.value + eps);
    pin.coeff.assign(problem.num_vars, 0.0);
    pin.coeff[j] = 1.0;
  }
  base.x = x;
  return base;
}

KktReport lp_check_kkt(const LpProblem& p, const LpSolution& s) {
  KktReport rep;
  if (!s.ok()) return rep;
  const int n = p.num_vars;
  std::vector<double> aty(n, 0.0);
  double ydotb = 0.0;
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    const LpRow& row = p.rows[r];
    double ax = 0.0;
    for (int j = 0; j < n; ++j) ax += row.coeff[j] * s.x[j];
    double slack = row.rhs - ax;
    double viol = 0.0;
    if (row.sense == RowSense::Le) viol = std::max(0.0, -slack);
    else if (row.sense == RowSense::Ge) viol = std::max(0.0, slack);
    else viol = std::abs(slack);
    rep.primal_residual = std::max(rep.primal_residual, viol);
    rep.complementarity = std::max(rep.complementarity, std::abs(s.row_dual[r] * slack));
    ydotb += s.row_dual[r] * row.rhs;
    for (int j = 0; j < n; ++j) aty[j] += s.row_dual[r] * row.coeff[j];
  }
  double cx = 0.0;
  for (int j = 0; j < n; ++j) {
    cx += p.objective[j] * s.x[j];
    rep.primal_residual = std::max(rep.primal_residual, -s.x[j]);
    // dual feasibility: c_j - A^T y >= 0, with equality on the support
    double red = p.objective[j] - aty[j];
    rep.dual_residual = std::max(rep.dual_residual, -red);
    if (s.x[j] > 1e-7) rep.dual_residual = std::max(rep.dual_residual, std::abs(red));
  }
  rep.duality_gap = std::abs(cx - ydotb);
  return rep;
}

}  // namespace otso
