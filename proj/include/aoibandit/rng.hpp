#pragma once

#include <algorithm>
#include <cstdint>
#include <random>

namespace aoib {

// Every consumer of randomness owns a named stream. Coupled runs hand the
// same channel/accuracy streams to both trajectories; everything else stays
// isolated so no consumer can perturb another's sequence.
enum class StreamRole : std::uint64_t {
  EnvChannel = 1,      // U(t): channel success draws (shared when coupled)
  EnvAccuracy = 2,     // V(t): measurement accuracy draws (shared when coupled)
  PolicyEnv = 3,       // policy-side environment, uncoupled runs
  OracleEnv = 4,       // oracle-side environment, uncoupled runs
  PolicyInternal = 5,  // exploration coins, posterior draws
  Warmup = 6,          // discarded oracle warm-up slots
};

std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t derive_trial_seed(std::uint64_t base_seed, std::uint64_t trial_index);
std::uint64_t derive_stream_seed(std::uint64_t trial_seed, StreamRole role);

// mt19937_64 behind an explicit uniform mapping. The standard pins the engine
// output bit-exactly, so sequences replay identically across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in [0, 1), 53-bit resolution
  double next_u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  std::uint64_t next_u64() { return gen_(); }

  // uniform integer in [0, n)
  int next_index(int n) {
    return std::min(n - 1, static_cast<int>(next_u01() * static_cast<double>(n)));
  }

 private:
  std::mt19937_64 gen_;
};

// Marsaglia polar method.
double sample_normal(Rng& rng);

// Marsaglia-Tsang rejection sampler; requires shape >= 1, which always holds
// for Beta posteriors over integer success/failure counts.
double sample_gamma(double shape, Rng& rng);

// Beta(a, b) with integer shapes >= 1 via two gamma draws. Consumes an
// unbounded number of uniforms, so it must run on its own stream.
double sample_beta(std::int64_t a, std::int64_t b, Rng& rng);

}  // namespace aoib
