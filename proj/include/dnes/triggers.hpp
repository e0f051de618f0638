#pragma once

#include <variant>

#include "dnes/rng.hpp"
#include "dnes/types.hpp"

namespace dnes {

/// Threshold sequence tau_k for the deterministic trigger.
class ThresholdSchedule {
 public:
  enum class Kind { zero, fractional, exponential };

  static ThresholdSchedule zero();
  /// tau_k = a / (k + b)^c for k >= 1. a > 0, b >= 0, c > 0.
  static ThresholdSchedule fractional(double a, double b, double c = 2.0);
  /// tau_k = scale * p^k with scale > 0 and p in (0, 1).
  static ThresholdSchedule exponential(double scale, double p);

  Kind kind() const { return kind_; }
  double value(long k) const;

  double p1() const { return p1_; }
  double p2() const { return p2_; }
  double p3() const { return p3_; }

 private:
  ThresholdSchedule(Kind kind, double p1, double p2, double p3) : kind_(kind), p1_(p1), p2_(p2), p3_(p3) {}

  Kind kind_;
  double p1_, p2_, p3_;
};

inline double schedule_value(const ThresholdSchedule& s, long k) { return s.value(k); }

/// kappa > 1, zeta ~ U(zeta_low, 1) with zeta_low in (0, 1).
struct StochasticTriggerParams {
  double kappa = 1.5;
  double zeta_low = 0.5;

  void validate() const;
  /// ln(kappa) - ln(zeta_low): bounds ||e_i|| / ||x_(i) - h_i|| on silent steps.
  double event_error_gain() const;
  double sample_zeta(RngStream& rng) const;
};

struct TriggerDecision {
  bool fired = false;
  /// ||q_k - q~_{k-1}||
  double innovation_norm = 0.0;
  /// Deterministic: tau_k. Stochastic: ||x - h|| (ln kappa - ln zeta), the
  /// largest innovation that stays silent.
  double threshold_used = 0.0;
  /// Stochastic only.
  double zeta = 0.0;
  double reference_gap = 0.0;
};

/// Fires at k = 0, otherwise iff ||q - q_prev_sent|| >= tau.
TriggerDecision deterministic_trigger(const Vector& q, const Vector& q_prev_sent, double tau, long k);

/// Fires at k = 0, otherwise iff zeta > kappa exp(-||q - q~|| / ||x - h||).
/// A zero reference gap fires exactly when the innovation is nonzero.
TriggerDecision stochastic_trigger(const Vector& q, const Vector& q_prev_sent, const Vector& x, const Vector& h,
                                   const StochasticTriggerParams& params, double zeta, long k);

struct AlwaysTrigger {};
struct DeterministicTrigger {
  ThresholdSchedule schedule;
};
struct StochasticTrigger {
  StochasticTriggerParams params;
};

/// Communication gate selected per run.
using TriggerPolicy = std::variant<AlwaysTrigger, DeterministicTrigger, StochasticTrigger>;

}  // namespace dnes
