#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aoibandit/model.hpp"

namespace aoib {

// Thrown when the top-two quality gap is zero: the learning constant c is
// undefined and no bound can be evaluated for the instance.
class DegenerateGapError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct InstanceConstants {
  int num_sources = 0;
  int best_index = 0;
  double d = 0.0;
  double mu_star = 0.0;
  double mu_min = 0.0;
  double p_star = 0.0;
  double q_star = 0.0;
  double p_min = 0.0;
  double q_min = 0.0;
  // Defined only for multi-source instances.
  std::optional<double> delta;    // mu* minus the best of the rest
  std::optional<double> delta_p;  // min over k != k* of p_k - p_k*; may be negative
  std::optional<double> c;        // max{-2/ln(d(1-p*)), 4K/(delta^2 (1-d)^2)}
};

// All constants derived from the raw parameters and per-source qualities.
// The first c argument degenerates to 0 when p* == 1 (the -2/ln(0) limit).
InstanceConstants instance_constants(const SystemConfig& config);

// mu* * [alpha c ln(T) (1 + K/T^4) + (K/T + 1/T^3)], alpha > 1, T >= 2.
double etc_upper_bound(std::int64_t horizon, double alpha, const InstanceConstants& consts);

struct EgBound {
  double value = 0.0;             // mu*-scaled total of the five terms
  std::array<double, 5> terms{};  // mu*-scaled individual terms
  std::vector<std::string> diagnostics;
};

// Five-term closed form for the decaying-exploration schedule, evaluated
// verbatim. Throws std::domain_error when T - c*ln(T) + 1 <= 1. The second
// term's closed form needs c/K < 1, which real instances never satisfy; it is
// evaluated as written and flagged in `diagnostics`.
EgBound eg_upper_bound(std::int64_t horizon, double alpha, const InstanceConstants& consts);

// a*ln(a/b) + (1-a)*ln((1-a)/(1-b)) with 0*ln(0) := 0. Infinite when b is 0
// or 1 and a disagrees.
double bernoulli_kl(double a, double b);

struct LowerBoundResult {
  double learning_term = 0.0;  // log(T)-scaled component; zero for K = 1
  double linear_term = 0.0;    // (p*q* - p_min q_min) * T
  double value = 0.0;
  std::vector<std::string> diagnostics;
};

// Regret floor for policies whose suboptimal pulls grow at most as t^gamma.
// C and gamma are caller-supplied knobs; the result is reported next to its
// inputs, never as instance-intrinsic. Logarithms are natural.
LowerBoundResult lower_bound(std::int64_t horizon, double gamma, double C,
                             const InstanceConstants& consts);

}  // namespace aoib
