#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ckpt/random.hpp"

namespace ckpt {

/// Aggregated availability of one node: how long it was operating and how
/// many times it failed while doing so.
struct NodeUptimeRecord {
  std::string node_id;
  double operation_time = 0.0;  // seconds
  std::uint64_t failure_count = 0;
};

/// Exponential (memoryless) node lifetime with a pooled failure rate.
///
/// A rate of zero is accepted and means "never fails"; it exists for the
/// failure-free limits used by the overhead model and the simulator. The
/// optimizer rejects it.
class ExponentialFailureModel {
 public:
  /// Throws NonPositiveMttf unless mttf is finite and > 0.
  static ExponentialFailureModel from_mttf(double mttf_seconds);
  /// Throws InvalidConfig unless rate is finite and >= 0.
  static ExponentialFailureModel from_rate(double per_second);

  double rate() const noexcept { return rate_; }
  /// +inf for the failure-free model.
  double mttf() const noexcept {
    return rate_ > 0.0 ? 1.0 / rate_ : std::numeric_limits<double>::infinity();
  }

  /// P(lifetime > t) = exp(-rate * t). Throws NegativeTime for t < 0.
  double survival(double t) const;

  /// Inverse CDF: -ln(u) / rate for u in (0, 1).
  double time_to_failure_from_uniform(double u) const noexcept {
    if (rate_ == 0.0) return std::numeric_limits<double>::infinity();
    return -std::log(u) / rate_;
  }

  template <class URBG>
  double sample_time_to_failure(URBG& g) const {
    return time_to_failure_from_uniform(uniform_open01(g));
  }

 private:
  explicit ExponentialFailureModel(double rate) : rate_(rate) {}
  double rate_;
};

inline double survival_probability(const ExponentialFailureModel& model, double t) {
  return model.survival(t);
}

/// Pooled MTTF: total operation time over total failures (seconds).
/// Throws EmptyLog for no records and NoFailures when no failure was seen.
double estimate_mttf(std::span<const NodeUptimeRecord> records);

/// Failure-log CSV: header `node_id,operation_hours,failures`. Hours are
/// converted to seconds on read.
std::vector<NodeUptimeRecord> read_failure_log(std::istream& in);
std::vector<NodeUptimeRecord> read_failure_log(const std::filesystem::path& path);

}  // namespace ckpt
