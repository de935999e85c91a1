#pragma once

#include <span>
#include <vector>

#include "otso/lp.hpp"
#include "otso/model.hpp"

namespace otso {

// Period feasible set as a row system over x: rows . x <= rhs(c), plus the
// variable box. rhs_sens holds d(rhs)/dc for the active piece of each row.
struct Polyhedron {
  Mat rows;
  Vec rhs;
  Mat rhs_sens;
  Vec lo, hi;

  int num_rows() const { return rows.rows; }
};

Polyhedron feasible_set(const TypeRealization& type, std::span<const double> c,
                        const ProblemInstance& inst);

struct InnerSolution {
  Vec x;
  double value = 0.0;  // weighted objective including constant terms
  Vec row_dual;        // aligned with Polyhedron rows; nonpositive for <= rows
  LpStatus status = LpStatus::Optimal;
  bool approximate = false;  // subgradient fallback was used

  bool ok() const { return status == LpStatus::Optimal; }
};

// min over the polyhedron of objective . x; thin wrapper over the LP kernel
InnerSolution lp_solve_polyhedron(std::span<const double> objective, const Polyhedron& poly,
                                  bool lexicographic = false);

// min_x f(x) + sum_i sign * dual_i * g_i(c, x) / (T beta_i) over K(theta, c);
// sign is +1 for packing and -1 for covering. Throws std::runtime_error naming
// the violating rows when K(theta, c) is empty.
InnerSolution solve_second_stage(std::span<const double> c, std::span<const double> dual,
                                 const TypeRealization& type, const ProblemInstance& inst,
                                 bool lexicographic = false);

// single-period relaxed value: p(c) -/+ (1/T) sum_i dual_i + inner optimum
double lagrangian_value(std::span<const double> c, std::span<const double> dual,
                        const TypeRealization& type, const ProblemInstance& inst);

struct LagrangianEval {
  double value = 0.0;
  InnerSolution inner;
  Vec subgradient;  // d value / d c
};

LagrangianEval evaluate_lagrangian(std::span<const double> c, std::span<const double> dual,
                                   const TypeRealization& type, const ProblemInstance& inst,
                                   bool want_subgradient = true);

// grad p(c) + rhs_sens^T row_dual + sum_i sign * dual_i * grad_c g_i / (T beta_i)
Vec subgradient_c(std::span<const double> c, std::span<const double> dual,
                  const TypeRealization& type, const ProblemInstance& inst);

}  // namespace otso
