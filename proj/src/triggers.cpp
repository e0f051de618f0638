#include "dnes/triggers.hpp"

#include <cmath>
#include <stdexcept>

namespace dnes {

ThresholdSchedule ThresholdSchedule::zero() { return {Kind::zero, 0.0, 0.0, 0.0}; }

ThresholdSchedule ThresholdSchedule::fractional(double a, double b, double c) {
  if (!(a > 0.0)) throw std::invalid_argument("fractional schedule: a must be positive");
  if (!(b >= 0.0)) throw std::invalid_argument("fractional schedule: b must be nonnegative");
  if (!(c > 0.0)) throw std::invalid_argument("fractional schedule: exponent must be positive");
  return {Kind::fractional, a, b, c};
}

ThresholdSchedule ThresholdSchedule::exponential(double scale, double p) {
  if (!(scale > 0.0)) throw std::invalid_argument("exponential schedule: scale must be positive");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("exponential schedule: p must lie in (0, 1)");
  return {Kind::exponential, scale, p, 0.0};
}

double ThresholdSchedule::value(long k) const {
  if (k < 0) throw std::invalid_argument("ThresholdSchedule::value: negative iteration");
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::fractional: {
      const double base = static_cast<double>(k) + p2_;
      // k = 0 with b = 0 is never consulted (every agent fires at k = 0).
      if (base == 0.0) return 0.0;
      return p1_ / std::pow(base, p3_);
    }
    case Kind::exponential:
      return p1_ * std::pow(p2_, static_cast<double>(k));
  }
  return 0.0;
}

void StochasticTriggerParams::validate() const {
  if (!(kappa > 1.0)) throw std::invalid_argument("stochastic trigger: kappa must exceed 1");
  if (!(zeta_low > 0.0 && zeta_low < 1.0)) {
    throw std::invalid_argument("stochastic trigger: zeta lower bound must lie in (0, 1)");
  }
}

double StochasticTriggerParams::event_error_gain() const { return std::log(kappa) - std::log(zeta_low); }

double StochasticTriggerParams::sample_zeta(RngStream& rng) const { return rng.uniform_open(zeta_low, 1.0); }

TriggerDecision deterministic_trigger(const Vector& q, const Vector& q_prev_sent, double tau, long k) {
  if (q.size() != q_prev_sent.size()) throw std::invalid_argument("deterministic_trigger: dimension mismatch");
  TriggerDecision dec;
  dec.innovation_norm = (q - q_prev_sent).norm();
  dec.threshold_used = tau;
  dec.fired = k == 0 || dec.innovation_norm >= tau;
  return dec;
}

TriggerDecision stochastic_trigger(const Vector& q, const Vector& q_prev_sent, const Vector& x, const Vector& h,
                                   const StochasticTriggerParams& params, double zeta, long k) {
  if (q.size() != q_prev_sent.size() || x.size() != h.size()) {
    throw std::invalid_argument("stochastic_trigger: dimension mismatch");
  }
  TriggerDecision dec;
  dec.innovation_norm = (q - q_prev_sent).norm();
  dec.reference_gap = (x - h).norm();
  dec.zeta = zeta;
  // zeta > kappa exp(-I / G)  <=>  I > G (ln kappa - ln zeta). The log form
  // makes the silent-step bound I <= G (ln kappa - ln zeta) hold exactly and
  // covers G = 0 without dividing.
  dec.threshold_used = dec.reference_gap * (std::log(params.kappa) - std::log(zeta));
  dec.fired = k == 0 || dec.innovation_norm > dec.threshold_used;
  return dec;
}

}  // namespace dnes
