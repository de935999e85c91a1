#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "otso/rng.hpp"

namespace otso {

using Vec = std::vector<double>;

struct Mat {
  int rows = 0, cols = 0;
  Vec data;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}
  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// value = coeff . x + offset
struct AffineFn {
  Vec coeff;
  double offset = 0.0;
  double operator()(std::span<const double> x) const { return dot(coeff, x) + offset; }
};

// constraint usage g(c, x) = x_coeff . x + c_coeff . c + offset
struct ConstraintFn {
  Vec x_coeff;
  Vec c_coeff;
  double offset = 0.0;
  double eval(std::span<const double> c, std::span<const double> x) const {
    return dot(x_coeff, x) + dot(c_coeff, c) + offset;
  }
};

// Additional feasible-set rows E x <= h(c) produced per period, with the
// sensitivity dh/dc needed by the first-stage subgradient.
struct ExtraRows {
  Mat coeff;      // rows x dim_x
  Vec rhs;        // h(c)
  Mat rhs_sens;   // rows x dim_c, dh/dc at the active piece
};

// Serializable descriptions of the extra-row generators used by the bundled
// scenarios. Custom generators can be attached via TypeRealization::extra_rows_fn.
enum class ExtraRowsKind {
  None,
  DemandCaps,          // x_i <= tag_i
  DemandCapsMinCover,  // x_i <= tag_i and sum x >= min(c, sum tag)
};

struct TypeRealization {
  AffineFn cost;                        // second-stage cost over x, values in [-1,1]
  std::vector<ConstraintFn> usage;      // one per long-term constraint, values in [0,1]
  Mat coupling;                         // B: coupling rows B x <= c (row r pairs with c_r)
  ExtraRowsKind extra_kind = ExtraRowsKind::None;
  Vec tag;                              // scenario payload (e.g. realized demand)

  // opaque convex oracles; when set they take precedence over the affine
  // descriptors and route the inner solve through the subgradient fallback
  std::function<double(std::span<const double>)> cost_oracle;
  std::vector<std::function<double(std::span<const double>, std::span<const double>)>> usage_oracles;

  bool affine() const { return !cost_oracle && usage_oracles.empty(); }
};

ExtraRows make_extra_rows(const TypeRealization& type, std::span<const double> c, int dim_x);
bool types_equal(const TypeRealization& a, const TypeRealization& b);

enum class Direction { Packing, Covering };

struct Dist {
  enum class Kind { TruncNormal, Discrete } kind = Kind::Discrete;
  // TruncNormal: demand d_i = max(0, Normal(mean_i, stddev)), mapped to a
  // TypeRealization by the instance's builder
  Vec mean;
  double stddev = 0.0;
  // Discrete
  std::vector<TypeRealization> support;
  Vec weights;
};

struct StreamSegment {
  int first = 1, last = 1;  // inclusive period range
  Dist dist;
};

struct DistStream {
  std::vector<StreamSegment> segments;

  bool empty() const { return segments.empty(); }
  int segment_of(int t) const;  // -1 if uncovered
  const StreamSegment& at(int t) const;
};

struct FirstStageSet {
  bool finite = false;
  Vec lo, hi;               // box when finite == false
  std::vector<Vec> points;  // finite support otherwise

  int dim() const { return finite ? (points.empty() ? 0 : static_cast<int>(points[0].size()))
                                  : static_cast<int>(lo.size()); }
  Vec project(Vec c) const;  // box: componentwise clamp; finite: nearest point
};

struct BoxSet {
  Vec lo, hi;
};

enum class TypeBuilderKind { Explicit, PackingAllocator, CoveringFillRate };

struct TypeBuilderParams {
  Vec raw_targets;            // per-constraint budget/service targets in raw units
  double budget_cap = 0.0;    // first-stage cap, also the objective unit scale
  double demand_floor = 0.0;  // fill-rate denominator floor
};

struct ProblemInstance {
  int horizon = 0;
  int num_constraints = 0;
  Vec targets;  // componentwise in (0,1)
  Direction direction = Direction::Packing;
  FirstStageSet first_stage;
  AffineFn first_stage_cost;  // p, with p(0) = 0
  std::function<double(std::span<const double>)> first_stage_cost_oracle;
  BoxSet second_stage_box;
  double normalization_scale = 1.0;  // raw objective units per normalized unit
  TypeBuilderKind builder = TypeBuilderKind::Explicit;
  TypeBuilderParams builder_params;
  DistStream distribution_stream;
  std::optional<DistStream> prediction_stream;

  int dim_c() const { return first_stage.dim(); }
  int dim_x() const { return static_cast<int>(second_stage_box.hi.size()); }

  double first_stage_cost_value(std::span<const double> c) const {
    return first_stage_cost_oracle ? first_stage_cost_oracle(c) : first_stage_cost(c);
  }
};

double cost_value(const TypeRealization& type, std::span<const double> x);
double usage_value(const TypeRealization& type, int i, std::span<const double> c,
                   std::span<const double> x);

// maps a raw demand draw into a TypeRealization per the instance's builder
TypeRealization build_type(const ProblemInstance& inst, const Vec& demand);

TypeRealization sample_from_dist(const ProblemInstance& inst, const Dist& dist, CounterRng& rng);

// realization for period t; throws std::out_of_range when t is outside [1, T]
TypeRealization sample_type(const ProblemInstance& inst, int t, CounterRng& rng);

// empty when all invariants hold on a probe sample; each entry names the
// violated clause
std::vector<std::string> validate_instance(const ProblemInstance& inst);

}  // namespace otso
