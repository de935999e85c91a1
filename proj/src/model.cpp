#include "otso/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace otso {

namespace {
bool close(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

bool vec_equal(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}
}  // namespace

ExtraRows make_extra_rows(const TypeRealization& type, std::span<const double> c, int dim_x) {
  ExtraRows out;
  switch (type.extra_kind) {
    case ExtraRowsKind::None:
      return out;
    case ExtraRowsKind::DemandCaps: {
      int n = static_cast<int>(type.tag.size());
      out.coeff = Mat(n, dim_x);
      out.rhs.assign(n, 0.0);
      out.rhs_sens = Mat(n, static_cast<int>(c.size()));
      for (int i = 0; i < n; ++i) {
        out.coeff.at(i, i) = 1.0;
        out.rhs[i] = type.tag[i];
      }
      return out;
    }
    case ExtraRowsKind::DemandCapsMinCover: {
      int n = static_cast<int>(type.tag.size());
      out.coeff = Mat(n + 1, dim_x);
      out.rhs.assign(n + 1, 0.0);
      out.rhs_sens = Mat(n + 1, static_cast<int>(c.size()));
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        out.coeff.at(i, i) = 1.0;
        out.rhs[i] = type.tag[i];
        total += type.tag[i];
      }
      // -sum x <= -min(c, total demand); at the kink take the c-branch
      for (int j = 0; j < dim_x; ++j) out.coeff.at(n, j) = -1.0;
      double budget = c.empty() ? 0.0 : c[0];
      if (budget <= total) {
        out.rhs[n] = -budget;
        out.rhs_sens.at(n, 0) = -1.0;
      } else {
        out.rhs[n] = -total;
      }
      return out;
    }
  }
  return out;
}

bool types_equal(const TypeRealization& a, const TypeRealization& b) {
  if (!vec_equal(a.cost.coeff, b.cost.coeff) || a.cost.offset != b.cost.offset) return false;
  if (a.usage.size() != b.usage.size()) return false;
  for (std::size_t i = 0; i < a.usage.size(); ++i) {
    if (!vec_equal(a.usage[i].x_coeff, b.usage[i].x_coeff)) return false;
    if (!vec_equal(a.usage[i].c_coeff, b.usage[i].c_coeff)) return false;
    if (a.usage[i].offset != b.usage[i].offset) return false;
  }
  if (a.coupling.rows != b.coupling.rows || a.coupling.cols != b.coupling.cols ||
      !vec_equal(a.coupling.data, b.coupling.data))
    return false;
  return a.extra_kind == b.extra_kind && vec_equal(a.tag, b.tag);
}

int DistStream::segment_of(int t) const {
  for (std::size_t s = 0; s < segments.size(); ++s)
    if (t >= segments[s].first && t <= segments[s].last) return static_cast<int>(s);
  return -1;
}

const StreamSegment& DistStream::at(int t) const {
  int s = segment_of(t);
  if (s < 0) throw std::out_of_range("DistStream: period not covered");
  return segments[s];
}

Vec FirstStageSet::project(Vec c) const {
  if (!finite) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::clamp(c[i], lo[i], hi[i]);
    return c;
  }
  double best = std::numeric_limits<double>::infinity();
  const Vec* arg = nullptr;
  for (const Vec& p : points) {
    double d = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) d += (c[i] - p[i]) * (c[i] - p[i]);
    if (d < best) {
      best = d;
      arg = &p;
    }
  }
  if (!arg) throw std::invalid_argument("FirstStageSet: empty finite set");
  return *arg;
}

double cost_value(const TypeRealization& type, std::span<const double> x) {
  return type.cost_oracle ? type.cost_oracle(x) : type.cost(x);
}

double usage_value(const TypeRealization& type, int i, std::span<const double> c,
                   std::span<const double> x) {
  if (!type.usage_oracles.empty()) return type.usage_oracles[i](c, x);
  return type.usage[i].eval(c, x);
}

TypeRealization build_type(const ProblemInstance& inst, const Vec& demand) {
  const int m = inst.num_constraints;
  const int dx = inst.dim_x();
  TypeRealization type;
  type.tag = demand;
  type.cost.coeff.assign(dx, 0.0);
  type.usage.resize(m);
  switch (inst.builder) {
    case TypeBuilderKind::Explicit:
      throw std::invalid_argument("build_type: instance has no parametric builder");
    case TypeBuilderKind::PackingAllocator: {
      // usage_i = x_i / (T * raw_target_i): fraction of constraint i's total
      // budget consumed this period
      for (int i = 0; i < m; ++i) {
        type.usage[i].x_coeff.assign(dx, 0.0);
        type.usage[i].x_coeff[i] = 1.0 / (inst.horizon * inst.builder_params.raw_targets[i]);
      }
      type.coupling = Mat(1, dx, 1.0);
      type.extra_kind = ExtraRowsKind::DemandCapsMinCover;
      break;
    }
    case TypeBuilderKind::CoveringFillRate: {
      // usage_i = x_i / demand_i: the fill rate for constraint i this period
      double floor = inst.builder_params.demand_floor;
      type.tag.resize(demand.size());
      for (std::size_t i = 0; i < demand.size(); ++i)
        type.tag[i] = std::max(demand[i], floor);
      for (int i = 0; i < m; ++i) {
        type.usage[i].x_coeff.assign(dx, 0.0);
        type.usage[i].x_coeff[i] = 1.0 / type.tag[i];
      }
      type.coupling = Mat(1, dx, 1.0);
      type.extra_kind = ExtraRowsKind::DemandCaps;
      break;
    }
  }
  return type;
}

TypeRealization sample_from_dist(const ProblemInstance& inst, const Dist& dist, CounterRng& rng) {
  if (dist.kind == Dist::Kind::Discrete) {
    int k = rng.categorical(dist.weights);
    return dist.support[k];
  }
  Vec demand(dist.mean.size());
  for (std::size_t i = 0; i < demand.size(); ++i)
    demand[i] = std::max(0.0, rng.normal(dist.mean[i], dist.stddev));
  return build_type(inst, demand);
}

TypeRealization sample_type(const ProblemInstance& inst, int t, CounterRng& rng) {
  if (t < 1 || t > inst.horizon) throw std::out_of_range("sample_type: period out of range");
  return sample_from_dist(inst, inst.distribution_stream.at(t).dist, rng);
}

namespace {

// scale a candidate point into the period feasible set so boundedness can be
// probed on points that actually belong to K(theta, c)
Vec feasible_probe(const ProblemInstance& inst, const TypeRealization& type,
                   std::span<const double> c, Vec x) {
  const int dx = inst.dim_x();
  for (int j = 0; j < dx; ++j)
    x[j] = std::clamp(x[j], std::max(0.0, inst.second_stage_box.lo[j]),
                      inst.second_stage_box.hi[j]);
  auto shrink = [&](std::span<const double> row, double rhs) {
    double ax = dot(row, x);
    if (ax > rhs && ax > 1e-300) {
      double f = std::max(0.0, rhs) / ax;
      for (double& v : x) v *= f;
    }
  };
  for (int pass = 0; pass < 3; ++pass) {
    for (int r = 0; r < type.coupling.rows; ++r) {
      std::span<const double> row(&type.coupling.data[static_cast<std::size_t>(r) * dx],
                                  static_cast<std::size_t>(dx));
      shrink(row, c[r]);
    }
    ExtraRows extra = make_extra_rows(type, c, dx);
    for (int r = 0; r < extra.coeff.rows; ++r) {
      // only shrink against upper-bound style rows
      std::span<const double> row(&extra.coeff.data[static_cast<std::size_t>(r) * dx],
                                  static_cast<std::size_t>(dx));
      bool nonneg = true;
      for (double v : row)
        if (v < 0.0) nonneg = false;
      if (nonneg) shrink(row, extra.rhs[r]);
    }
  }
  return x;
}

}  // namespace

std::vector<std::string> validate_instance(const ProblemInstance& inst) {
  std::vector<std::string> reports;
  auto add = [&](std::string msg) { reports.push_back(std::move(msg)); };

  if (inst.horizon < 1) add("horizon must be a positive integer");
  if (static_cast<int>(inst.targets.size()) != inst.num_constraints)
    add("targets dimension does not match constraint count");
  for (double b : inst.targets)
    if (!(b > 0.0 && b < 1.0)) {
      add("target outside (0,1)");
      break;
    }

  const int dc = inst.dim_c();
  const int dx = inst.dim_x();
  Vec zero_c(dc, 0.0), zero_x(dx, 0.0);

  if (!inst.first_stage.finite) {
    for (int i = 0; i < dc; ++i)
      if (inst.first_stage.lo[i] > 1e-12 || inst.first_stage.hi[i] < -1e-12) {
        add("null action not in first-stage set");
        break;
      }
  } else {
    bool has_zero = false;
    for (const Vec& p : inst.first_stage.points) {
      bool z = true;
      for (double v : p)
        if (std::abs(v) > 1e-12) z = false;
      if (z) has_zero = true;
    }
    if (!has_zero) add("null action not in first-stage set");
  }
  for (int j = 0; j < dx; ++j)
    if (inst.second_stage_box.lo[j] > 1e-12 || inst.second_stage_box.hi[j] < -1e-12) {
      add("null action not in second-stage box");
      break;
    }
  if (!(inst.normalization_scale > 0.0)) add("normalization scale must be positive");
  if (!close(inst.first_stage_cost_value(zero_c), 0.0, 1e-9))
    add("first-stage cost at null action nonzero");

  if (inst.distribution_stream.empty()) {
    add("distribution stream missing");
    return reports;
  }
  for (int t : {1, inst.horizon, std::max(1, inst.horizon / 2)})
    if (inst.distribution_stream.segment_of(t) < 0) {
      add("distribution stream does not cover the horizon");
      break;
    }
  for (const auto& seg : inst.distribution_stream.segments) {
    if (seg.dist.kind == Dist::Kind::Discrete) {
      if (seg.dist.support.empty()) add("discrete distribution has empty support");
      double s = 0.0;
      for (double w : seg.dist.weights) {
        s += w;
        if (w < 0.0) add("discrete weight negative");
      }
      if (std::abs(s - 1.0) > 1e-12) add("discrete weights do not sum to 1");
    }
  }

  // probe sampled types for the boundedness and null-action clauses
  const int probes = 1000;
  bool bad_f0 = false, bad_g0 = false, bad_fb = false, bad_gb = false;
  for (int k = 0; k < probes; ++k) {
    CounterRng rng(20250809u, 0, static_cast<std::uint64_t>(k), RngPurpose::Probe);
    int t = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(inst.horizon));
    TypeRealization type = sample_type(inst, t, rng);
    if (std::abs(cost_value(type, zero_x)) > 1e-9) bad_f0 = true;
    for (int i = 0; i < inst.num_constraints; ++i)
      if (std::abs(usage_value(type, i, zero_c, zero_x)) > 1e-9) bad_g0 = true;

    Vec c_probe(dc);
    if (inst.first_stage.finite) {
      c_probe = inst.first_stage.points[k % inst.first_stage.points.size()];
    } else {
      for (int i = 0; i < dc; ++i)
        c_probe[i] = rng.uniform(inst.first_stage.lo[i], inst.first_stage.hi[i]);
    }
    Vec x_probe(dx);
    for (int j = 0; j < dx; ++j)
      x_probe[j] = (k % 3 == 0) ? inst.second_stage_box.hi[j]
                                : rng.uniform(0.0, inst.second_stage_box.hi[j]);
    Vec x = feasible_probe(inst, type, c_probe, x_probe);
    if (std::abs(cost_value(type, x)) > 1.0 + 1e-9) bad_fb = true;
    for (int i = 0; i < inst.num_constraints; ++i) {
      double g = usage_value(type, i, c_probe, x);
      if (g < -1e-9 || g > 1.0 + 1e-9) bad_gb = true;
    }
  }
  if (bad_f0) add("null action not cost-free");
  if (bad_g0) add("null action consumes constraint budget");
  if (bad_fb) add("second-stage cost outside [-1,1] on probe sample");
  if (bad_gb) add("constraint function outside [0,1] on probe sample");

  return reports;
}

}  // namespace otso
