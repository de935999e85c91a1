#include "otso/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace otso {

std::vector<double> HedgeState::distribution() const {
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<double> y(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) y[i] = weights[i] / total;
  return y;
}

HedgeState hedge_init(int num_experts, int horizon) {
  if (num_experts < 1) throw std::invalid_argument("hedge_init: need at least one expert");
  if (horizon < 1) throw std::invalid_argument("hedge_init: need a positive horizon");
  HedgeState s;
  s.weights.assign(num_experts, 1.0);
  s.rate = std::sqrt(std::log(static_cast<double>(num_experts)) / horizon);
  return s;
}

HedgeState hedge_init(int num_experts, int horizon, double payoff_bound) {
  HedgeState s = hedge_init(num_experts, horizon);
  if (!(payoff_bound > 0.0)) throw std::invalid_argument("hedge_init: payoff bound must be positive");
  s.rate /= payoff_bound;
  s.payoff_bound = payoff_bound;
  return s;
}

int hedge_select(const HedgeState& state, CounterRng& rng) {
  return rng.categorical(state.weights);
}

void hedge_update(HedgeState& state, std::span<const double> payoffs) {
  if (payoffs.size() != state.weights.size())
    throw std::invalid_argument("hedge_update: payoff dimension mismatch");
  for (double l : payoffs)
    if (!std::isfinite(l)) throw std::invalid_argument("hedge_update: non-finite payoff");

  double max_w = 0.0;
  for (std::size_t i = 0; i < payoffs.size(); ++i) {
    state.weights[i] *= std::exp(state.sign * state.rate * payoffs[i]);
    max_w = std::max(max_w, state.weights[i]);
  }
  if (max_w > 1e100) {
    double total = 0.0;
    for (double w : state.weights) total += w;
    double f = static_cast<double>(state.weights.size()) / total;
    for (double& w : state.weights) w *= f;
  }
}

OgdState ogd_init(std::vector<double> start, std::vector<double> lo, std::vector<double> hi,
                  double step_scale) {
  OgdState s;
  s.lo = std::move(lo);
  s.hi = std::move(hi);
  s.step_scale = step_scale;
  s.iterate = std::move(start);
  double d2 = 0.0;
  for (std::size_t i = 0; i < s.lo.size(); ++i) {
    s.iterate[i] = std::clamp(s.iterate[i], s.lo[i], s.hi[i]);
    d2 += (s.hi[i] - s.lo[i]) * (s.hi[i] - s.lo[i]);
  }
  s.diameter = std::sqrt(d2);
  return s;
}

void ogd_step(OgdState& state, std::span<const double> subgradient, int t) {
  if (t < 1) throw std::invalid_argument("ogd_step: period must be >= 1");
  if (subgradient.size() != state.iterate.size())
    throw std::invalid_argument("ogd_step: gradient dimension mismatch");
  double norm2 = 0.0;
  for (double g : subgradient) {
    if (!std::isfinite(g)) throw std::invalid_argument("ogd_step: non-finite subgradient");
    norm2 += g * g;
  }
  state.grad_bound = std::max(state.grad_bound, std::sqrt(norm2));
  double eta = state.step_scale / std::sqrt(static_cast<double>(t));
  for (std::size_t i = 0; i < state.iterate.size(); ++i)
    state.iterate[i] =
        std::clamp(state.iterate[i] - eta * subgradient[i], state.lo[i], state.hi[i]);
}

std::vector<double> Exp3State::distribution() const {
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<double> p(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i)
    p[i] = (1.0 - exploration) * weights[i] / total + exploration / weights.size();
  return p;
}

Exp3State exp3_init(int num_arms, int horizon, double payoff_bound) {
  if (num_arms < 1) throw std::invalid_argument("exp3_init: need at least one arm");
  Exp3State s;
  s.weights.assign(num_arms, 1.0);
  s.payoff_bound = payoff_bound;
  double k = static_cast<double>(num_arms);
  s.exploration =
      std::min(1.0, std::sqrt(k * std::log(std::max(k, 1.001)) / ((std::exp(1.0) - 1.0) * horizon)));
  s.rate = s.exploration / k;
  return s;
}

int exp3_select(const Exp3State& state, CounterRng& rng) {
  auto p = state.distribution();
  return rng.categorical(p);
}

void exp3_update(Exp3State& state, int arm, double payoff) {
  if (arm < 0 || arm >= state.arms()) throw std::out_of_range("exp3_update: arm out of range");
  if (!std::isfinite(payoff)) throw std::invalid_argument("exp3_update: non-finite payoff");
  auto p = state.distribution();
  // rewards mapped to [0,1] before the importance-weighted update
  double reward01 = std::clamp((payoff + state.payoff_bound) / (2.0 * state.payoff_bound), 0.0, 1.0);
  double estimate = reward01 / p[arm];
  state.weights[arm] *= std::exp(state.rate * estimate);
  double max_w = 0.0;
  for (double w : state.weights) max_w = std::max(max_w, w);
  if (max_w > 1e100) {
    for (double& w : state.weights) w /= max_w;
  }
}

double expert_regret(const std::vector<std::vector<double>>& payoffs,
                     const std::vector<int>& chosen) {
  if (payoffs.size() != chosen.size())
    throw std::invalid_argument("expert_regret: dimension mismatch");
  if (payoffs.empty()) return 0.0;
  std::size_t m = payoffs[0].size();
  std::vector<double> totals(m, 0.0);
  double realized = 0.0;
  for (std::size_t t = 0; t < payoffs.size(); ++t) {
    if (payoffs[t].size() != m) throw std::invalid_argument("expert_regret: ragged payoffs");
    for (std::size_t i = 0; i < m; ++i) totals[i] += payoffs[t][i];
    realized += payoffs[t][chosen[t]];
  }
  double best = totals[0];
  for (double v : totals) best = std::max(best, v);
  return best - realized;
}

double ogd_regret(const std::vector<std::function<double(std::span<const double>)>>& losses,
                  const std::vector<std::vector<double>>& iterates,
                  std::span<const double> lo, std::span<const double> hi,
                  int grid_points_per_dim) {
  if (losses.size() != iterates.size())
    throw std::invalid_argument("ogd_regret: dimension mismatch");
  double realized = 0.0;
  for (std::size_t t = 0; t < losses.size(); ++t) realized += losses[t](iterates[t]);

  std::size_t d = lo.size();
  std::vector<int> idx(d, 0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> point(d);
  while (true) {
    for (std::size_t i = 0; i < d; ++i) {
      double f = grid_points_per_dim > 1
                     ? static_cast<double>(idx[i]) / (grid_points_per_dim - 1)
                     : 0.0;
      point[i] = lo[i] + f * (hi[i] - lo[i]);
    }
    double total = 0.0;
    for (const auto& h : losses) total += h(point);
    best = std::min(best, total);
    std::size_t k = 0;
    while (k < d && ++idx[k] == grid_points_per_dim) idx[k++] = 0;
    if (k == d) break;
  }
  return realized - best;
}

}  // namespace otso
