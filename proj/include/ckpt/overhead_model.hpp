#pragma once

#include "ckpt/failure_model.hpp"

namespace ckpt {

/// n inter-dependent processes, each run as r independent replicas.
struct JobSpec {
  int n = 1;
  int r = 1;

  /// Throws InvalidConfig unless n >= 1 and r >= 1.
  void validate() const;
};

struct OverheadPoint {
  double tc = 0.0;
  double expected_overhead = 0.0;
  double normalized = 0.0;
};

/// Probability that every one of the n processes keeps at least one of its r
/// replicas alive, given single-replica survival probability p:
/// (1 - (1-p)^r)^n. Throws ProbabilityOutOfRange for p outside [0, 1].
double success_prob_all(double p, const JobSpec& spec);

/// ln of success_prob_all(exp(-rate*tc)), evaluated without forming p, so
/// that it stays accurate when p is within rounding of 0 or 1.
double log_success_prob_all(double rate_times_tc, const JobSpec& spec);

/// Expected time to carry all processes across one interval, with failed
/// super-steps retried in full: tc / success_prob_all + ts.
/// Throws NonPositiveInterval for tc <= 0, InvalidConfig for ts < 0.
double expected_overhead(double tc, double ts, const ExponentialFailureModel& model,
                         const JobSpec& spec);

/// expected_overhead / tc.
double normalized_overhead(double tc, double ts, const ExponentialFailureModel& model,
                           const JobSpec& spec);

/// normalized_overhead - 1, without the cancellation. Used by the optimizer
/// and by finite-difference checks.
double normalized_overhead_excess(double tc, double ts,
                                  const ExponentialFailureModel& model,
                                  const JobSpec& spec);

OverheadPoint evaluate_overhead(double tc, double ts, const ExponentialFailureModel& model,
                                const JobSpec& spec);

}  // namespace ckpt
