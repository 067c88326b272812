#include "aoibandit/rng.hpp"

#include <cmath>

namespace aoib {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_trial_seed(std::uint64_t base_seed, std::uint64_t trial_index) {
  std::uint64_t s = base_seed + 0x9e3779b97f4a7c15ULL * (trial_index + 1);
  return splitmix64(s);
}

std::uint64_t derive_stream_seed(std::uint64_t trial_seed, StreamRole role) {
  std::uint64_t s = trial_seed + 0xbf58476d1ce4e5b9ULL * (static_cast<std::uint64_t>(role) + 1);
  return splitmix64(s);
}

double sample_normal(Rng& rng) {
  for (;;) {
    const double a = 2.0 * rng.next_u01() - 1.0;
    const double b = 2.0 * rng.next_u01() - 1.0;
    const double s = a * a + b * b;
    if (s >= 1.0 || s == 0.0) continue;
    return a * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double sample_gamma(double shape, Rng& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = sample_normal(rng);
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = rng.next_u01();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_beta(std::int64_t a, std::int64_t b, Rng& rng) {
  const double ga = sample_gamma(static_cast<double>(a), rng);
  const double gb = sample_gamma(static_cast<double>(b), rng);
  return ga / (ga + gb);
}

}  // namespace aoib
