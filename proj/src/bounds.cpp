#include "aoibandit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "aoibandit/oracle.hpp"

namespace aoib {

InstanceConstants instance_constants(const SystemConfig& config) {
  config.validate();
  const auto quality = optimal_source(config);
  const int k_count = config.num_sources();

  InstanceConstants out;
  out.num_sources = k_count;
  out.best_index = quality.best_index;
  out.d = config.d;
  out.mu_star = quality.mu[quality.best_index];
  out.mu_min = quality.mu[0];
  out.p_min = config.sources[0].p;
  out.q_min = config.sources[0].q;
  for (int k = 1; k < k_count; ++k) {
    out.mu_min = std::min(out.mu_min, quality.mu[k]);
    out.p_min = std::min(out.p_min, config.sources[k].p);
    out.q_min = std::min(out.q_min, config.sources[k].q);
  }
  out.p_star = config.sources[quality.best_index].p;
  out.q_star = config.sources[quality.best_index].q;

  if (k_count >= 2) {
    out.delta = *quality.gap;
    if (*out.delta == 0.0) {
      throw DegenerateGapError(
          "top-two quality gap is zero; the learning constant is undefined");
    }
    double dp = std::numeric_limits<double>::infinity();
    for (int k = 0; k < k_count; ++k) {
      if (k == quality.best_index) continue;
      dp = std::min(dp, config.sources[k].p - out.p_star);
    }
    out.delta_p = dp;
    // -2/ln(d(1-p*)) degenerates to 0 at p* == 1: ln(0) = -inf.
    const double first = -2.0 / std::log(config.d * (1.0 - out.p_star));
    const double second = 4.0 * k_count / (*out.delta * *out.delta *
                                           (1.0 - config.d) * (1.0 - config.d));
    out.c = std::max(first, second);
  }
  return out;
}

double etc_upper_bound(std::int64_t horizon, double alpha, const InstanceConstants& consts) {
  if (!(alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
  if (horizon < 2) throw std::invalid_argument("horizon must be at least 2");
  if (!consts.c) {
    throw std::invalid_argument("bound needs a multi-source instance with a defined gap");
  }
  const double T = static_cast<double>(horizon);
  const double K = consts.num_sources;
  const double lnT = std::log(T);
  return consts.mu_star *
         (alpha * *consts.c * lnT * (1.0 + K / (T * T * T * T)) + (K / T + 1.0 / (T * T * T)));
}

EgBound eg_upper_bound(std::int64_t horizon, double alpha, const InstanceConstants& consts) {
  if (!(alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
  if (horizon < 2) throw std::invalid_argument("horizon must be at least 2");
  if (!consts.c) {
    throw std::invalid_argument("bound needs a multi-source instance with a defined gap");
  }
  const double T = static_cast<double>(horizon);
  const double K = consts.num_sources;
  const double c = *consts.c;
  const double lnT = std::log(T);

  const double tail = T - c * lnT + 1.0;  // argument of the ln^3 factor
  if (!(tail > 1.0)) {
    std::ostringstream msg;
    msg << "horizon below the bound's domain: T - c*ln(T) + 1 = " << tail
        << " must exceed 1 (c = " << c << ")";
    throw std::domain_error(msg.str());
  }
  const double start = (alpha - 1.0) * c * lnT + 1.0;
  if (!(start > 0.0)) {
    throw std::domain_error("(alpha-1)*c*ln(T) + 1 must be positive");
  }

  EgBound out;
  const double ratio = c / K;
  const double ln_tail = std::log(tail);
  const double ln_start = std::log(start);

  out.terms[0] = alpha * c * lnT;
  out.terms[1] = (K - 1.0) * (ratio / (1.0 - ratio)) *
                 std::pow(1.0 / start, (1.0 - ratio) / ratio);
  out.terms[2] = K * c * lnT * ln_tail * ln_tail * ln_tail;
  out.terms[3] = 1.0 / T;
  out.terms[4] = (c * c * lnT * (K - 1.0) / (T * T)) *
                 std::exp(-(ln_start * ln_start * ln_start) / ratio);

  if (ratio >= 1.0) {
    std::ostringstream msg;
    msg << "second term evaluated outside its closed form: c/K = " << ratio
        << " >= 1 makes the exponent (1-c/K)/(c/K) nonpositive and flips the "
           "prefactor sign";
    out.diagnostics.push_back(msg.str());
  }

  double total = 0.0;
  for (auto& term : out.terms) {
    term *= consts.mu_star;
    total += term;
  }
  out.value = total;
  return out;
}

double bernoulli_kl(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0) || !(b >= 0.0 && b <= 1.0)) {
    throw std::invalid_argument("bernoulli_kl arguments must lie in [0,1]");
  }
  const auto part = [](double x, double y) {
    return x == 0.0 ? 0.0 : x * std::log(x / y);
  };
  return part(a, b) + part(1.0 - a, 1.0 - b);
}

LowerBoundResult lower_bound(std::int64_t horizon, double gamma, double C,
                             const InstanceConstants& consts) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0,1)");
  if (!(C > 0.0)) throw std::invalid_argument("C must be positive");
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");

  LowerBoundResult out;
  const double T = static_cast<double>(horizon);
  const double K = consts.num_sources;

  if (consts.num_sources >= 2) {
    const double kl = bernoulli_kl(consts.mu_min, (consts.mu_star + 1.0) / 2.0);
    const double d_mu = *consts.delta / (K * kl);
    const double log_term = (1.0 - gamma) * std::log(T) - std::log(4.0 * K * C);
    out.learning_term = (K - 1.0) * d_mu * (*consts.delta_p / *consts.delta) *
                        consts.mu_star * consts.d * log_term;
    if (*consts.delta_p < 0.0) {
      out.diagnostics.push_back(
          "delta_p is negative (the optimal source has the largest p); the "
          "log-scaled component flips sign");
    }
    if (log_term < 0.0) {
      out.diagnostics.push_back(
          "(1-gamma)*log(T) <= log(4KC); the log-scaled component is negative "
          "at this horizon");
    }
  }
  out.linear_term = (consts.p_star * consts.q_star - consts.p_min * consts.q_min) * T;
  out.value = out.learning_term + out.linear_term;
  return out;
}

}  // namespace aoib
