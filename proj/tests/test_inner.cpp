#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "otso/inner.hpp"
#include "otso/rng.hpp"

using namespace otso;
using otso::testing::coupled_toy_instance;
using otso::testing::random_affine_instance;

TEST_CASE("no penalty serves fully") {
  ProblemInstance inst = coupled_toy_instance(10);
  TypeRealization type = inst.distribution_stream.segments[0].dist.support[0];
  Vec c = {1.0}, dual = {0.0};
  InnerSolution s = solve_second_stage(c, dual, type, inst);
  REQUIRE(s.ok());
  CHECK(s.x[0] == doctest::Approx(1.0));
  CHECK(s.value == doctest::Approx(-1.0));
}

TEST_CASE("strong penalty flips service off") {
  ProblemInstance inst = coupled_toy_instance(10, 0.5);
  TypeRealization type = inst.distribution_stream.segments[0].dist.support[0];
  Vec c = {1.0};
  Vec dual = {2.0 * inst.horizon * inst.targets[0]};  // dual/(T beta) = 2
  InnerSolution s = solve_second_stage(c, dual, type, inst);
  REQUIRE(s.ok());
  CHECK(s.x[0] == doctest::Approx(0.0));
  CHECK(s.value == doctest::Approx(0.0));
}

TEST_CASE("null first stage forces the null recourse") {
  ProblemInstance inst = coupled_toy_instance(10);
  TypeRealization type = inst.distribution_stream.segments[0].dist.support[0];
  Vec c = {0.0}, dual = {0.0};
  InnerSolution s = solve_second_stage(c, dual, type, inst);
  REQUIRE(s.ok());
  CHECK(s.x[0] == doctest::Approx(0.0));
  CHECK(s.value == doctest::Approx(0.0));
}

TEST_CASE("relaxed value matches hand evaluation on the toy") {
  int T = 10;
  double beta = 0.5;
  ProblemInstance inst = coupled_toy_instance(T, beta);
  TypeRealization type = inst.distribution_stream.segments[0].dist.support[0];
  Vec c = {1.0};

  Vec zero = {0.0};
  CHECK(lagrangian_value(c, zero, type, inst) == doctest::Approx(-1.0));

  // dual = T beta / 2: value = -dual/T + min_x (-x + x/2) = -0.25 - 0.5
  Vec half = {T * beta / 2.0};
  CHECK(lagrangian_value(c, half, type, inst) == doctest::Approx(-0.75));

  // dual = T beta: the inner objective is flat, value = -beta
  Vec tie = {static_cast<double>(T) * beta};
  CHECK(lagrangian_value(c, tie, type, inst) == doctest::Approx(-0.5));
}

TEST_CASE("feasibility and duality invariants on random instances") {
  for (int trial = 0; trial < 50; ++trial) {
    CounterRng rng(11u, 0, static_cast<std::uint64_t>(trial), RngPurpose::Test);
    ProblemInstance inst = random_affine_instance(trial, rng);
    TypeRealization type = inst.distribution_stream.segments[0].dist.support[0];
    Vec c = {rng.uniform(0.1, 2.0)};
    Vec dual(inst.num_constraints);
    for (auto& d : dual) d = rng.uniform(0.0, 2.0 * inst.horizon);

    InnerSolution s = solve_second_stage(c, dual, type, inst);
    REQUIRE(s.ok());
    Polyhedron poly = feasible_set(type, c, inst);
    for (int r = 0; r < poly.num_rows(); ++r) {
      double ax = 0.0;
      for (int j = 0; j < inst.dim_x(); ++j) ax += poly.rows.at(r, j) * s.x[j];
      CHECK(ax <= poly.rhs[r] + 1e-8);
      CHECK(s.row_dual[r] <= 1e-9);
    }
    for (int j = 0; j < inst.dim_x(); ++j) {
      CHECK(s.x[j] >= poly.lo[j] - 1e-8);
      CHECK(s.x[j] <= poly.hi[j] + 1e-8);
    }
  }
}

TEST_CASE("subgradient matches central differences away from kinks") {
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 100; ++trial) {
    CounterRng rng(13u, 0, static_cast<std::uint64_t>(trial), RngPurpose::Test);
    ProblemInstance inst = random_affine_instance(trial, rng);
    TypeRealization type = inst.distribution_stream.segments[0].dist.support[0];
    Vec c = {rng.uniform(0.2, 1.8)};
    Vec dual(inst.num_constraints);
    for (auto& d : dual) d = rng.uniform(0.0, inst.horizon * 0.8);

    const double h = 1e-5;
    Vec cp = {c[0] + h}, cm = {c[0] - h};
    double vp = lagrangian_value(cp, dual, type, inst);
    double vm = lagrangian_value(cm, dual, type, inst);
    double fd = (vp - vm) / (2.0 * h);
    // one-sided slopes must agree for the point to be away from a kink
    double v0 = lagrangian_value(c, dual, type, inst);
    double left = (v0 - vm) / h, right = (vp - v0) / h;
    if (std::abs(left - right) > 1e-6) continue;

    Vec g = subgradient_c(c, dual, type, inst);
    CHECK(g[0] == doctest::Approx(fd).epsilon(0).scale(1.0));
    CHECK(std::abs(g[0] - fd) < 1e-4);
    ++checked;
  }
  CHECK(checked >= 100);
}

TEST_CASE("subgradient inequality certifies convexity in c") {
  for (int trial = 0; trial < 20; ++trial) {
    CounterRng rng(17u, 0, static_cast<std::uint64_t>(trial), RngPurpose::Test);
    ProblemInstance inst = random_affine_instance(trial, rng);
    TypeRealization type = inst.distribution_stream.segments[0].dist.support[0];
    Vec c = {rng.uniform(0.1, 1.9)};
    Vec dual(inst.num_constraints);
    for (auto& d : dual) d = rng.uniform(0.0, inst.horizon);
    double v = lagrangian_value(c, dual, type, inst);
    Vec g = subgradient_c(c, dual, type, inst);
    for (int k = 0; k < 100; ++k) {
      Vec cp = {rng.uniform(0.0, 2.0)};
      double vp = lagrangian_value(cp, dual, type, inst);
      CHECK(vp >= v + g[0] * (cp[0] - c[0]) - 1e-7);
    }
  }
}

TEST_CASE("convexity chords in c and concavity chords in dual") {
  int chords = 0;
  for (int trial = 0; trial < 25; ++trial) {
    CounterRng rng(19u, 0, static_cast<std::uint64_t>(trial), RngPurpose::Test);
    ProblemInstance inst = random_affine_instance(trial, rng);
    TypeRealization type = inst.distribution_stream.segments[0].dist.support[0];
    Vec dual(inst.num_constraints);
    for (auto& d : dual) d = rng.uniform(0.0, inst.horizon);
    for (int k = 0; k < 20; ++k) {
      Vec c1 = {rng.uniform(0.0, 2.0)}, c2 = {rng.uniform(0.0, 2.0)};
      Vec mid = {0.5 * (c1[0] + c2[0])};
      double lhs = lagrangian_value(mid, dual, type, inst);
      double rhs = 0.5 * lagrangian_value(c1, dual, type, inst) +
                   0.5 * lagrangian_value(c2, dual, type, inst);
      CHECK(lhs <= rhs + 1e-9);

      Vec l1(inst.num_constraints), l2(inst.num_constraints), lm(inst.num_constraints);
      for (int i = 0; i < inst.num_constraints; ++i) {
        l1[i] = rng.uniform(0.0, inst.horizon);
        l2[i] = rng.uniform(0.0, inst.horizon);
        lm[i] = 0.5 * (l1[i] + l2[i]);
      }
      Vec c = {rng.uniform(0.0, 2.0)};
      double mids = lagrangian_value(c, lm, type, inst);
      double avg = 0.5 * lagrangian_value(c, l1, type, inst) +
                   0.5 * lagrangian_value(c, l2, type, inst);
      CHECK(mids >= avg - 1e-9);
      ++chords;
    }
  }
  CHECK(chords >= 500);
}

TEST_CASE("min-cover row sensitivity on the budget branch") {
  // exp-style type: two resources, caps (0.6, 0.8), cover row sum x >= min(c, 1.4)
  ProblemInstance inst;
  inst.horizon = 100;
  inst.num_constraints = 2;
  inst.targets = {0.5, 0.5};
  inst.first_stage.lo = {0.0};
  inst.first_stage.hi = {2.0};
  inst.first_stage_cost.coeff = {0.0};
  inst.second_stage_box.lo = {0.0, 0.0};
  inst.second_stage_box.hi = {2.0, 2.0};
  TypeRealization t;
  t.cost.coeff = {-0.3, -0.3};
  t.usage.resize(2);
  t.usage[0].x_coeff = {0.5, 0.0};
  t.usage[1].x_coeff = {0.0, 0.5};
  t.coupling = Mat(1, 2, 1.0);
  t.extra_kind = ExtraRowsKind::DemandCapsMinCover;
  t.tag = {0.6, 0.8};
  StreamSegment seg;
  seg.first = 1;
  seg.last = 100;
  seg.dist.kind = Dist::Kind::Discrete;
  seg.dist.support = {t};
  seg.dist.weights = {1.0};
  inst.distribution_stream.segments = {seg};

  Vec dual = {40.0, 10.0};
  Vec c = {0.9};  // interior of the c <= total-demand branch
  const double h = 1e-5;
  Vec cp = {c[0] + h}, cm = {c[0] - h};
  double right = (lagrangian_value(cp, dual, t, inst) - lagrangian_value(c, dual, t, inst)) / h;
  double left = (lagrangian_value(c, dual, t, inst) - lagrangian_value(cm, dual, t, inst)) / h;
  REQUIRE(std::abs(left - right) < 1e-6);  // smooth here
  Vec g = subgradient_c(c, dual, t, inst);
  CHECK(std::abs(g[0] - 0.5 * (left + right)) < 1e-4);
}
