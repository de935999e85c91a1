#pragma once

#include <functional>
#include <span>
#include <vector>

#include "otso/rng.hpp"

namespace otso {

// Exponential-weights expert algorithm. Payoffs are rewards when sign = +1
// (the dual player maximizes), losses when sign = -1.
struct HedgeState {
  std::vector<double> weights;
  double rate = 0.0;          // epsilon
  double sign = 1.0;
  double payoff_bound = 1.0;  // delta, for clipping diagnostics

  int experts() const { return static_cast<int>(weights.size()); }
  std::vector<double> distribution() const;
};

HedgeState hedge_init(int num_experts, int horizon);
// rate scaled to the payoff magnitude: eps = sqrt(log m / T) / payoff_bound
HedgeState hedge_init(int num_experts, int horizon, double payoff_bound);

int hedge_select(const HedgeState& state, CounterRng& rng);

// w_i <- w_i * exp(sign * rate * payoff_i); renormalizes when the largest
// weight exceeds 1e100 (leaves the selection distribution unchanged)
void hedge_update(HedgeState& state, std::span<const double> payoffs);

// Projected online gradient descent over a box with step eta_t = scale/sqrt(t).
struct OgdState {
  std::vector<double> iterate;
  std::vector<double> lo, hi;
  double step_scale = 1.0;
  double grad_bound = 0.0;  // running max |g|_2, diagnostic G
  double diameter = 0.0;    // box diameter, diagnostic F
};

OgdState ogd_init(std::vector<double> start, std::vector<double> lo, std::vector<double> hi,
                  double step_scale = 1.0);

void ogd_step(OgdState& state, std::span<const double> subgradient, int t);

// EXP3 with exploration mixing; payoffs are rewards in [-bound, bound].
struct Exp3State {
  std::vector<double> weights;
  double rate = 0.0;
  double exploration = 0.0;  // gamma
  double payoff_bound = 1.0;

  int arms() const { return static_cast<int>(weights.size()); }
  std::vector<double> distribution() const;  // >= gamma/K everywhere
};

Exp3State exp3_init(int num_arms, int horizon, double payoff_bound = 1.0);
int exp3_select(const Exp3State& state, CounterRng& rng);
void exp3_update(Exp3State& state, int arm, double payoff);

// realized expert regret: max_i sum_t payoff[t][i] - sum_t payoff[t][chosen_t]
double expert_regret(const std::vector<std::vector<double>>& payoffs,
                     const std::vector<int>& chosen);

// realized OGD regret against the best fixed point on a dense grid
double ogd_regret(const std::vector<std::function<double(std::span<const double>)>>& losses,
                  const std::vector<std::vector<double>>& iterates,
                  std::span<const double> lo, std::span<const double> hi,
                  int grid_points_per_dim);

}  // namespace otso
