#include "ckpt/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "ckpt/error.hpp"
#include "ckpt/random.hpp"

namespace ckpt {

std::vector<double> default_interval_grid() {
  return {12, 25, 50, 100, 200, 400, 800, 1600, 3200};
}

double quantile_type7(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorKind::InvalidConfig, "quantile of empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::uint64_t sweep_run_seed(std::uint64_t seed_base, std::size_t interval, std::size_t run) {
  return derive_seed(seed_base, interval, run);
}

void summarize(IntervalStats& stats) {
  std::vector<double> done;
  for (const auto& run : stats.runs) {
    if (run.completion) done.push_back(*run.completion);
  }
  if (done.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    stats.min = stats.q25 = stats.median = stats.q75 = stats.max = nan;
    return;
  }
  std::sort(done.begin(), done.end());
  stats.min = done.front();
  stats.q25 = quantile_type7(done, 0.25);
  stats.median = quantile_type7(done, 0.5);
  stats.q75 = quantile_type7(done, 0.75);
  stats.max = done.back();
}

namespace {

void check_sweep_inputs(std::span<const double> intervals, int runs_per_interval) {
  if (intervals.empty()) throw Error(ErrorKind::InvalidConfig, "no intervals to sweep");
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (!(intervals[i] > 0.0)) throw Error(ErrorKind::InvalidConfig, "intervals must be > 0");
    if (i > 0 && !(intervals[i] > intervals[i - 1])) {
      throw Error(ErrorKind::InvalidConfig, "intervals must be strictly increasing");
    }
  }
  if (runs_per_interval < 1) throw Error(ErrorKind::InvalidConfig, "runs must be >= 1");
}

SweepReport empty_report(const SimConfig& base, std::span<const double> intervals,
                         int runs_per_interval, std::uint64_t seed_base) {
  SweepReport report;
  report.base = base;
  report.base.record_trace = false;
  report.runs_per_interval = runs_per_interval;
  report.seed_base = seed_base;
  report.intervals.resize(intervals.size());
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    report.intervals[i].tc = intervals[i];
    report.intervals[i].runs.resize(static_cast<std::size_t>(runs_per_interval));
  }
  return report;
}

RunOutcome one_run(const SweepReport& report, std::size_t interval, std::size_t run) {
  SimConfig config = report.base;
  config.tc = report.intervals[interval].tc;
  RunOutcome outcome;
  outcome.seed = sweep_run_seed(report.seed_base, interval, run);
  try {
    outcome.completion = ckpt::run(config, outcome.seed).completion_time;
  } catch (const Error& e) {
    outcome.error = std::string(to_string(e.kind()));
  }
  return outcome;
}

}  // namespace

SweepReport run_sweep_serial(const SimConfig& base, std::span<const double> intervals,
                             int runs_per_interval, std::uint64_t seed_base) {
  check_sweep_inputs(intervals, runs_per_interval);
  SweepReport report = empty_report(base, intervals, runs_per_interval, seed_base);
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    for (std::size_t j = 0; j < static_cast<std::size_t>(runs_per_interval); ++j) {
      report.intervals[i].runs[j] = one_run(report, i, j);
    }
    summarize(report.intervals[i]);
  }
  return report;
}

SweepReport run_sweep(const SimConfig& base, std::span<const double> intervals,
                      int runs_per_interval, std::uint64_t seed_base) {
  check_sweep_inputs(intervals, runs_per_interval);
  SweepReport report = empty_report(base, intervals, runs_per_interval, seed_base);
  const auto runs = static_cast<std::int64_t>(runs_per_interval);
  const auto tasks = static_cast<std::int64_t>(intervals.size()) * runs;
  // Every (interval, run) writes its own slot, so the report does not depend
  // on scheduling.
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < tasks; ++t) {
    const auto i = static_cast<std::size_t>(t / runs);
    const auto j = static_cast<std::size_t>(t % runs);
    report.intervals[i].runs[j] = one_run(report, i, j);
  }
  for (auto& stats : report.intervals) summarize(stats);
  return report;
}

namespace {

double basis_value(const IntervalStats& s, CompletionBasis basis) {
  return basis == CompletionBasis::median ? s.median : s.min;
}

}  // namespace

double interpolate_completion(const SweepReport& report, double tc, CompletionBasis basis) {
  const auto& iv = report.intervals;
  if (iv.empty() || !(tc >= iv.front().tc && tc <= iv.back().tc)) {
    throw Error(ErrorKind::OutOfSweepRange,
                fmt::format("tc={:.6g} s is outside the swept intervals", tc));
  }
  for (std::size_t i = 0; i < iv.size(); ++i) {
    if (tc == iv[i].tc) return basis_value(iv[i], basis);
    if (tc < iv[i + 1].tc) {
      const double w = (tc - iv[i].tc) / (iv[i + 1].tc - iv[i].tc);
      const double a = basis_value(iv[i], basis);
      const double b = basis_value(iv[i + 1], basis);
      return a + w * (b - a);
    }
  }
  return basis_value(iv.back(), basis);
}

ComparisonMetrics compare_values(double t_best, double t_worst, double t_predict) {
  ComparisonMetrics m;
  m.t_best = t_best;
  m.t_worst = t_worst;
  m.t_predict = t_predict;
  m.pct_best_vs_predict = std::abs(t_predict - t_best) / t_best * 100.0;
  m.pct_best_vs_worst = std::abs(t_worst - t_best) / t_best * 100.0;
  return m;
}

ComparisonMetrics compare(const SweepReport& report, double tc_predicted, CompletionBasis basis) {
  const double t_predict = interpolate_completion(report, tc_predicted, basis);
  const IntervalStats* best = nullptr;
  const IntervalStats* worst = nullptr;
  for (const auto& s : report.intervals) {
    const double v = basis_value(s, basis);
    if (std::isnan(v)) continue;
    if (!best || v < basis_value(*best, basis)) best = &s;
    if (!worst || v > basis_value(*worst, basis)) worst = &s;
  }
  if (!best) throw Error(ErrorKind::OutOfSweepRange, "no successful runs in the sweep");
  ComparisonMetrics m =
      compare_values(basis_value(*best, basis), basis_value(*worst, basis), t_predict);
  m.tc_best = best->tc;
  m.tc_worst = worst->tc;
  m.tc_predicted = tc_predicted;
  return m;
}

void write_raw_csv(std::ostream& out, const SweepReport& report) {
  out << "tc_s,run_index,seed,completion_s\n";
  for (const auto& s : report.intervals) {
    for (std::size_t j = 0; j < s.runs.size(); ++j) {
      const auto& run = s.runs[j];
      if (run.completion) {
        out << fmt::format("{},{},{},{}\n", s.tc, j, run.seed, *run.completion);
      } else {
        out << fmt::format("{},{},{},error:{}\n", s.tc, j, run.seed, run.error);
      }
    }
  }
}

void write_summary_csv(std::ostream& out, const SweepReport& report) {
  out << "tc_s,min,q25,median,q75,max\n";
  for (const auto& s : report.intervals) {
    out << fmt::format("{},{},{},{},{},{}\n", s.tc, s.min, s.q25, s.median, s.q75, s.max);
  }
}

void write_comparison_csv(std::ostream& out, const SweepReport& report,
                          const ComparisonMetrics& m) {
  out << "n,r,t_best_s,t_worst_s,tc_best_s,tc_worst_s,tc_predicted_s,t_predict_s,"
         "pct_best_vs_predict,pct_best_vs_worst\n";
  out << fmt::format("{},{},{},{},{},{},{},{},{:.2f},{:.2f}\n", report.base.spec.n,
                     report.base.spec.r, m.t_best, m.t_worst, m.tc_best, m.tc_worst,
                     m.tc_predicted, m.t_predict, m.pct_best_vs_predict, m.pct_best_vs_worst);
}

}  // namespace ckpt
