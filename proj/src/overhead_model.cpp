#include "ckpt/overhead_model.hpp"

#include <cmath>
#include <numbers>

#include "ckpt/error.hpp"

namespace ckpt {

void JobSpec::validate() const {
  if (n < 1) throw Error(ErrorKind::InvalidConfig, "n must be >= 1");
  if (r < 1) throw Error(ErrorKind::InvalidConfig, "r must be >= 1");
}

double success_prob_all(double p, const JobSpec& spec) {
  spec.validate();
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::ProbabilityOutOfRange, "p must lie in [0, 1]");
  }
  // (1-p)^r via log1p so that 1 - (1-p)^r keeps its digits for small p.
  const double log_all_replicas_fail = spec.r * std::log1p(-p);
  const double process_survives = -std::expm1(log_all_replicas_fail);
  return std::exp(spec.n * std::log(process_survives));
}

namespace {

// ln(1 - e^{-a}) for a >= 0, accurate at both ends.
double log1mexp(double a) {
  return a <= std::numbers::ln2 ? std::log(-std::expm1(-a)) : std::log1p(-std::exp(-a));
}

}  // namespace

double log_success_prob_all(double rate_times_tc, const JobSpec& spec) {
  const double log_replica_fails = log1mexp(rate_times_tc);
  const double log_process_fails = spec.r * log_replica_fails;
  return spec.n * log1mexp(-log_process_fails);
}

namespace {

void check_interval(double tc, double ts) {
  if (!(tc > 0.0)) throw Error(ErrorKind::NonPositiveInterval, "tc must be > 0");
  if (!(ts >= 0.0)) throw Error(ErrorKind::InvalidConfig, "ts must be >= 0");
}

}  // namespace

double expected_overhead(double tc, double ts, const ExponentialFailureModel& model,
                         const JobSpec& spec) {
  check_interval(tc, ts);
  spec.validate();
  return tc * std::exp(-log_success_prob_all(model.rate() * tc, spec)) + ts;
}

double normalized_overhead(double tc, double ts, const ExponentialFailureModel& model,
                           const JobSpec& spec) {
  return expected_overhead(tc, ts, model, spec) / tc;
}

double normalized_overhead_excess(double tc, double ts, const ExponentialFailureModel& model,
                                  const JobSpec& spec) {
  check_interval(tc, ts);
  spec.validate();
  return std::expm1(-log_success_prob_all(model.rate() * tc, spec)) + ts / tc;
}

OverheadPoint evaluate_overhead(double tc, double ts, const ExponentialFailureModel& model,
                                const JobSpec& spec) {
  const double g = expected_overhead(tc, ts, model, spec);
  return {tc, g, g / tc};
}

}  // namespace ckpt
