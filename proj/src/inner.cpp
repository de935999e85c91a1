#include "otso/inner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace otso {

namespace {

double direction_sign(const ProblemInstance& inst) {
  return inst.direction == Direction::Packing ? 1.0 : -1.0;
}

Vec penalty_weights(std::span<const double> dual, const ProblemInstance& inst) {
  double s = direction_sign(inst);
  Vec w(inst.num_constraints, 0.0);
  for (int i = 0; i < inst.num_constraints; ++i)
    w[i] = s * dual[i] / (inst.horizon * inst.targets[i]);
  return w;
}

// projected subgradient fallback for opaque convex oracles
InnerSolution oracle_minimize(std::span<const double> c, const Vec& weights,
                              const TypeRealization& type, const ProblemInstance& inst,
                              const Polyhedron& poly) {
  const int n = inst.dim_x();
  auto objective = [&](std::span<const double> x) {
    double v = cost_value(type, x);
    for (int i = 0; i < inst.num_constraints; ++i)
      if (weights[i] != 0.0) v += weights[i] * usage_value(type, i, c, x);
    return v;
  };
  auto project = [&](Vec x) {
    for (int pass = 0; pass < 12; ++pass) {
      for (int j = 0; j < n; ++j) x[j] = std::clamp(x[j], poly.lo[j], poly.hi[j]);
      for (int r = 0; r < poly.num_rows(); ++r) {
        std::span<const double> row(&poly.rows.data[static_cast<std::size_t>(r) * n],
                                    static_cast<std::size_t>(n));
        double ax = dot(row, x);
        if (ax > poly.rhs[r] + 1e-12) {
          double nn = dot(row, row);
          if (nn <= 0.0) continue;
          double f = (ax - poly.rhs[r]) / nn;
          for (int j = 0; j < n; ++j) x[j] -= f * row[j];
        }
      }
    }
    return x;
  };

  Vec x = project(Vec(n, 0.0));
  Vec best_x = x;
  double best = objective(x);
  double radius = 0.0;
  for (int j = 0; j < n; ++j) radius = std::max(radius, poly.hi[j] - poly.lo[j]);
  const double h = 1e-6;
  Vec grad(n);
  for (int k = 1; k <= 500; ++k) {
    Vec xp = x, xm = x;
    for (int j = 0; j < n; ++j) {
      xp[j] = x[j] + h;
      xm[j] = x[j] - h;
      grad[j] = (objective(xp) - objective(xm)) / (2.0 * h);
      xp[j] = x[j];
      xm[j] = x[j];
    }
    double gn = std::sqrt(dot(grad, grad));
    if (gn < 1e-12) break;
    double step = radius / (gn * std::sqrt(static_cast<double>(k)));
    for (int j = 0; j < n; ++j) x[j] -= step * grad[j];
    x = project(std::move(x));
    double v = objective(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  InnerSolution sol;
  sol.x = best_x;
  sol.value = best;
  sol.approximate = true;
  return sol;
}

}  // namespace

Polyhedron feasible_set(const TypeRealization& type, std::span<const double> c,
                        const ProblemInstance& inst) {
  const int n = inst.dim_x();
  const int dc = inst.dim_c();
  ExtraRows extra = make_extra_rows(type, c, n);
  const int nb = type.coupling.rows;
  const int ne = extra.coeff.rows;

  Polyhedron poly;
  poly.rows = Mat(nb + ne, n);
  poly.rhs.assign(nb + ne, 0.0);
  poly.rhs_sens = Mat(nb + ne, dc);
  for (int r = 0; r < nb; ++r) {
    for (int j = 0; j < n; ++j) poly.rows.at(r, j) = type.coupling.at(r, j);
    poly.rhs[r] = c[r];
    poly.rhs_sens.at(r, r) = 1.0;
  }
  for (int r = 0; r < ne; ++r) {
    for (int j = 0; j < n; ++j) poly.rows.at(nb + r, j) = extra.coeff.at(r, j);
    poly.rhs[nb + r] = extra.rhs[r];
    for (int k = 0; k < dc; ++k) poly.rhs_sens.at(nb + r, k) = extra.rhs_sens.at(r, k);
  }
  poly.lo.resize(n);
  poly.hi.resize(n);
  for (int j = 0; j < n; ++j) {
    poly.lo[j] = std::max(0.0, inst.second_stage_box.lo[j]);
    poly.hi[j] = inst.second_stage_box.hi[j];
  }
  return poly;
}

InnerSolution lp_solve_polyhedron(std::span<const double> objective, const Polyhedron& poly,
                                  bool lexicographic) {
  const int n = static_cast<int>(objective.size());
  LpProblem p;
  p.num_vars = n;
  p.objective.assign(objective.begin(), objective.end());
  for (int r = 0; r < poly.num_rows(); ++r) {
    LpRow& row = p.add_row(RowSense::Le, poly.rhs[r]);
    for (int j = 0; j < n; ++j) row.coeff[j] = poly.rows.at(r, j);
  }
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(poly.hi[j])) {
      LpRow& row = p.add_row(RowSense::Le, poly.hi[j]);
      row.coeff[j] = 1.0;
    }
  }
  // variables are x >= 0 in the kernel; nonzero lower bounds enter as rows
  for (int j = 0; j < n; ++j) {
    if (poly.lo[j] > 0.0) {
      LpRow& row = p.add_row(RowSense::Ge, poly.lo[j]);
      row.coeff[j] = 1.0;
    }
  }

  LpSolution s = lexicographic ? lp_solve_lexicographic(p) : lp_solve(p);
  InnerSolution out;
  out.status = s.status;
  if (s.ok()) {
    out.x = s.x;
    out.value = s.value;
    out.row_dual.assign(s.row_dual.begin(), s.row_dual.begin() + poly.num_rows());
  }
  return out;
}

InnerSolution solve_second_stage(std::span<const double> c, std::span<const double> dual,
                                 const TypeRealization& type, const ProblemInstance& inst,
                                 bool lexicographic) {
  Vec w = penalty_weights(dual, inst);
  Polyhedron poly = feasible_set(type, c, inst);

  if (!type.affine()) {
    InnerSolution sol = oracle_minimize(c, w, type, inst, poly);
    return sol;
  }

  const int n = inst.dim_x();
  Vec obj(n, 0.0);
  for (int j = 0; j < n; ++j) obj[j] = type.cost.coeff[j];
  double constant = type.cost.offset;
  for (int i = 0; i < inst.num_constraints; ++i) {
    if (w[i] == 0.0) continue;
    const ConstraintFn& g = type.usage[i];
    for (int j = 0; j < n; ++j) obj[j] += w[i] * g.x_coeff[j];
    constant += w[i] * (dot(g.c_coeff, c) + g.offset);
  }

  InnerSolution sol = lp_solve_polyhedron(obj, poly, lexicographic);
  if (sol.status == LpStatus::Infeasible) {
    std::ostringstream msg;
    msg << "solve_second_stage: empty feasible set; violating rows at x=0:";
    for (int r = 0; r < poly.num_rows(); ++r)
      if (poly.rhs[r] < -1e-12) msg << " " << r;
    throw std::runtime_error(msg.str());
  }
  if (!sol.ok()) return sol;
  sol.value += constant;
  return sol;
}

double lagrangian_value(std::span<const double> c, std::span<const double> dual,
                        const TypeRealization& type, const ProblemInstance& inst) {
  return evaluate_lagrangian(c, dual, type, inst, /*want_subgradient=*/false).value;
}

LagrangianEval evaluate_lagrangian(std::span<const double> c, std::span<const double> dual,
                                   const TypeRealization& type, const ProblemInstance& inst,
                                   bool want_subgradient) {
  LagrangianEval out;
  out.inner = solve_second_stage(c, dual, type, inst);
  double s = direction_sign(inst);
  double dual_term = 0.0;
  for (int i = 0; i < inst.num_constraints; ++i) dual_term += dual[i];
  out.value = inst.first_stage_cost_value(c) - s * dual_term / inst.horizon + out.inner.value;

  if (want_subgradient) {
    if (out.inner.approximate || out.inner.row_dual.empty())
      throw std::runtime_error("evaluate_lagrangian: duals unavailable for subgradient");
    const int dc = inst.dim_c();
    out.subgradient.assign(dc, 0.0);
    if (inst.first_stage_cost_oracle) {
      const double h = 1e-6;
      Vec cp(c.begin(), c.end()), cm(c.begin(), c.end());
      for (int k = 0; k < dc; ++k) {
        cp[k] += h;
        cm[k] -= h;
        out.subgradient[k] =
            (inst.first_stage_cost_oracle(cp) - inst.first_stage_cost_oracle(cm)) / (2.0 * h);
        cp[k] = c[k];
        cm[k] = c[k];
      }
    } else {
      for (int k = 0; k < dc && k < static_cast<int>(inst.first_stage_cost.coeff.size()); ++k)
        out.subgradient[k] = inst.first_stage_cost.coeff[k];
    }
    Polyhedron poly = feasible_set(type, c, inst);
    for (int r = 0; r < poly.num_rows(); ++r)
      for (int k = 0; k < dc; ++k)
        out.subgradient[k] += poly.rhs_sens.at(r, k) * out.inner.row_dual[r];
    Vec w = penalty_weights(dual, inst);
    for (int i = 0; i < inst.num_constraints; ++i) {
      if (w[i] == 0.0) continue;
      for (int k = 0; k < dc && k < static_cast<int>(type.usage[i].c_coeff.size()); ++k)
        out.subgradient[k] += w[i] * type.usage[i].c_coeff[k];
    }
  }
  return out;
}

Vec subgradient_c(std::span<const double> c, std::span<const double> dual,
                  const TypeRealization& type, const ProblemInstance& inst) {
  return evaluate_lagrangian(c, dual, type, inst, /*want_subgradient=*/true).subgradient;
}

}  // namespace otso
