#pragma once

// Hand-built instances shared by the test suites.

#include <vector>

#include "otso/model.hpp"

namespace otso::testing {

// one resource, f = -x, g = x, K = [0,1]; no first-stage decision
inline TypeRealization unit_service_type(double cost_slope = -1.0) {
  TypeRealization t;
  t.cost.coeff = {cost_slope};
  t.usage.resize(1);
  t.usage[0].x_coeff = {1.0};
  t.usage[0].c_coeff = {0.0};
  t.coupling = Mat(0, 1);
  return t;
}

inline ProblemInstance toy_instance(int horizon, double beta = 0.5,
                                    Direction dir = Direction::Packing) {
  ProblemInstance inst;
  inst.horizon = horizon;
  inst.num_constraints = 1;
  inst.targets = {beta};
  inst.direction = dir;
  inst.first_stage.lo = {0.0};
  inst.first_stage.hi = {0.0};
  inst.first_stage_cost.coeff = {0.0};
  inst.second_stage_box.lo = {0.0};
  inst.second_stage_box.hi = {1.0};

  StreamSegment seg;
  seg.first = 1;
  seg.last = horizon;
  seg.dist.kind = Dist::Kind::Discrete;
  seg.dist.support = {unit_service_type()};
  seg.dist.weights = {1.0};
  inst.distribution_stream.segments = {seg};
  inst.prediction_stream = inst.distribution_stream;
  return inst;
}

// one resource with a real first-stage budget: x <= c, c in [0,1]
inline ProblemInstance coupled_toy_instance(int horizon, double beta = 0.5) {
  ProblemInstance inst = toy_instance(horizon, beta);
  inst.first_stage.hi = {1.0};
  TypeRealization t = unit_service_type();
  t.coupling = Mat(1, 1, 1.0);
  inst.distribution_stream.segments[0].dist.support = {t};
  inst.prediction_stream = inst.distribution_stream;
  return inst;
}

// random affine instance with convex structure (no min-cover kink):
// dim_x in {2,3}, dim_c = 1, coupling row, demand caps
inline ProblemInstance random_affine_instance(std::uint64_t salt, CounterRng& rng,
                                              Direction dir = Direction::Packing) {
  (void)salt;
  ProblemInstance inst;
  int dx = 2 + static_cast<int>(rng.next_u64() % 2);
  int m = 1 + static_cast<int>(rng.next_u64() % 2);
  inst.horizon = 50;
  inst.num_constraints = m;
  inst.direction = dir;
  inst.targets.resize(m);
  for (int i = 0; i < m; ++i) inst.targets[i] = rng.uniform(0.2, 0.8);
  inst.first_stage.lo = {0.0};
  inst.first_stage.hi = {2.0};
  inst.first_stage_cost.coeff = {rng.uniform(-0.4, 0.4)};
  inst.second_stage_box.lo.assign(dx, 0.0);
  inst.second_stage_box.hi.assign(dx, 1.0);

  TypeRealization t;
  t.cost.coeff.resize(dx);
  for (int j = 0; j < dx; ++j) t.cost.coeff[j] = rng.uniform(-1.0, 1.0) / dx;
  t.usage.resize(m);
  for (int i = 0; i < m; ++i) {
    t.usage[i].x_coeff.resize(dx);
    for (int j = 0; j < dx; ++j) t.usage[i].x_coeff[j] = rng.uniform(0.0, 1.0) / dx;
    t.usage[i].c_coeff = {rng.uniform(0.0, 0.2)};
    t.usage[i].offset = 0.0;
  }
  t.coupling = Mat(1, dx);
  for (int j = 0; j < dx; ++j) t.coupling.at(0, j) = rng.uniform(0.3, 1.0);
  t.extra_kind = ExtraRowsKind::DemandCaps;
  t.tag.resize(dx);
  for (int j = 0; j < dx; ++j) t.tag[j] = rng.uniform(0.3, 1.0);

  StreamSegment seg;
  seg.first = 1;
  seg.last = inst.horizon;
  seg.dist.kind = Dist::Kind::Discrete;
  seg.dist.support = {t};
  seg.dist.weights = {1.0};
  inst.distribution_stream.segments = {seg};
  return inst;
}

}  // namespace otso::testing
