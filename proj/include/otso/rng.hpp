#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace otso {

// Stream labels so independent draws never share a counter sequence.
enum class RngPurpose : std::uint64_t {
  TypeDraw = 1,
  DualDraw = 2,
  ArmDraw = 3,
  Saa = 4,
  Probe = 5,
  Scenario = 6,
  Test = 7,
};

// Counter-based generator: the stream is a pure function of
// (seed, replication, period, purpose), so parallel replications reproduce
// serial runs bit for bit.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t replication, std::uint64_t period,
             RngPurpose purpose)
      : state_(key(seed, replication, period, static_cast<std::uint64_t>(purpose))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1), 53-bit resolution
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller; consumes two uniforms per draw so streams stay aligned.
  double normal(double mean = 0.0, double sd = 1.0) {
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 < 1e-300) u1 = 1e-300;
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(6.283185307179586476925286766559 * u2);
  }

  // index sampled proportional to nonnegative weights
  int categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::invalid_argument("categorical: weights sum to zero");
    double u = uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

 private:
  static std::uint64_t avalanche(std::uint64_t z) {
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
    return z ^ (z >> 33);
  }
  static std::uint64_t key(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                           std::uint64_t d) {
    std::uint64_t h = avalanche(a + 0x9e3779b97f4a7c15ULL);
    h = avalanche(h ^ (b + 0xbf58476d1ce4e5b9ULL));
    h = avalanche(h ^ (c + 0x94d049bb133111ebULL));
    h = avalanche(h ^ (d + 0x2545f4914f6cdd1dULL));
    return h;
  }

  std::uint64_t state_;
};

// mean of max(0, X) for X ~ Normal(mean, sd); used by sampler checks
inline double clipped_normal_mean(double mean, double sd) {
  double z = mean / sd;
  double phi = std::exp(-0.5 * z * z) / std::sqrt(6.283185307179586476925286766559);
  double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
  return mean * cdf + sd * phi;
}

}  // namespace otso
