#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ckpt/simulator.hpp"

namespace ckpt {

struct RunOutcome {
  std::uint64_t seed = 0;
  std::optional<double> completion;  // empty when the run failed
  std::string error;                 // ErrorKind name for failed runs

  friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

struct IntervalStats {
  double tc = 0.0;
  std::vector<RunOutcome> runs;
  // Over successful runs; NaN if none succeeded.
  double min = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double max = 0.0;

  friend bool operator==(const IntervalStats&, const IntervalStats&) = default;
};

struct SweepReport {
  SimConfig base;  // tc is ignored
  int runs_per_interval = 0;
  std::uint64_t seed_base = 0;
  std::vector<IntervalStats> intervals;
};

/// Which per-interval statistic represents "the" completion time.
enum class CompletionBasis { median, min };

struct ComparisonMetrics {
  double t_best = 0.0;
  double t_worst = 0.0;
  double tc_best = 0.0;
  double tc_worst = 0.0;
  double tc_predicted = 0.0;
  double t_predict = 0.0;
  double pct_best_vs_predict = 0.0;
  double pct_best_vs_worst = 0.0;
};

/// 12 .. 3200 s, roughly doubling.
std::vector<double> default_interval_grid();

/// Linear interpolation between order statistics (R/NumPy "type 7").
/// `sorted` must be non-empty and ascending; q in [0, 1].
double quantile_type7(std::span<const double> sorted, double q);

/// Seed of run `run` at interval index `interval`.
std::uint64_t sweep_run_seed(std::uint64_t seed_base, std::size_t interval, std::size_t run);

/// Runs `runs_per_interval` simulations at each interval. Simulator errors
/// are recorded per run. The parallel and serial variants produce identical
/// reports.
SweepReport run_sweep(const SimConfig& base, std::span<const double> intervals,
                      int runs_per_interval, std::uint64_t seed_base);
SweepReport run_sweep_serial(const SimConfig& base, std::span<const double> intervals,
                             int runs_per_interval, std::uint64_t seed_base);

/// Fills min/q25/median/q75/max from the successful runs.
void summarize(IntervalStats& stats);

/// Piecewise-linear completion time at tc between tested intervals.
/// Throws OutOfSweepRange outside [first, last] tested interval.
double interpolate_completion(const SweepReport& report, double tc,
                              CompletionBasis basis = CompletionBasis::median);

ComparisonMetrics compare(const SweepReport& report, double tc_predicted,
                          CompletionBasis basis = CompletionBasis::median);

/// The two percentage columns from already-known completion times.
ComparisonMetrics compare_values(double t_best, double t_worst, double t_predict);

void write_raw_csv(std::ostream& out, const SweepReport& report);
void write_summary_csv(std::ostream& out, const SweepReport& report);
void write_comparison_csv(std::ostream& out, const SweepReport& report,
                          const ComparisonMetrics& metrics);

}  // namespace ckpt
