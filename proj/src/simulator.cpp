#include <cmath>

#include <fmt/format.h>

#include "ckpt/error.hpp"
#include "ckpt/simulator.hpp"

namespace ckpt {

std::string_view to_string(SimMode mode) {
  return mode == SimMode::model ? "model" : "volpex";
}

std::optional<SimMode> parse_sim_mode(std::string_view name) {
  if (name == "model") return SimMode::model;
  if (name == "volpex") return SimMode::volpex;
  return std::nullopt;
}

std::string_view to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::failure: return "failure";
    case TraceKind::detect: return "detect";
    case TraceKind::save: return "save";
    case TraceKind::ignore: return "ignore";
    case TraceKind::restart: return "restart";
    case TraceKind::spawn: return "spawn";
    case TraceKind::finish: return "finish";
    case TraceKind::interval_ok: return "interval_ok";
    case TraceKind::interval_failed: return "interval_failed";
  }
  return "unknown";
}

void SimConfig::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorKind::InvalidConfig, what); };
  if (spec.n < 1) fail("n must be >= 1");
  if (spec.r < 1) fail("r must be >= 1");
  if (!(tc > 0.0) || !std::isfinite(tc)) fail("tc must be finite and > 0");
  if (!(ts >= 0.0) || !std::isfinite(ts)) fail("ts must be finite and >= 0");
  if (total_work < 1) fail("total_work must be >= 1");
  if (!(quantum_time > 0.0) || !std::isfinite(quantum_time)) fail("quantum_time must be > 0");
  if (!(heartbeat_timeout >= 0.0) || !std::isfinite(heartbeat_timeout)) {
    fail("heartbeat_timeout must be >= 0");
  }
  if (!(speed_spread >= 0.0 && speed_spread < 1.0)) fail("speed_spread must lie in [0, 1)");
  if (!(budget_factor >= 1.0)) fail("budget_factor must be >= 1");
  for (const auto& s : scripted_failures) {
    if (s.process < 0 || s.process >= spec.n || s.replica < 0 || !(s.at >= 0.0)) {
      fail("scripted failure out of range");
    }
  }
}

std::int64_t SimConfig::model_intervals() const {
  const double work_seconds = static_cast<double>(total_work) * quantum_time;
  const double k = work_seconds / tc;
  const double rounded = std::round(k);
  if (rounded < 1.0 || std::abs(k - rounded) > 1e-9 * std::max(1.0, k)) {
    throw Error(ErrorKind::WorkNotDivisible,
                fmt::format("total work {:.6g} s is not a whole number of {:.6g} s intervals",
                            work_seconds, tc));
  }
  return static_cast<std::int64_t>(rounded);
}

double SimConfig::failure_free_time() const {
  const double work_seconds = static_cast<double>(total_work) * quantum_time;
  if (mode == SimMode::model) {
    return static_cast<double>(model_intervals()) * (tc + ts);
  }
  const double slowest = work_seconds / (1.0 - speed_spread);
  return slowest + ts * (std::ceil(slowest / tc) + 1.0);
}

std::int64_t count_server_rule_violations(const std::vector<TraceEvent>& trace, double tc) {
  std::vector<std::optional<SavedCheckpoint>> last;
  std::int64_t violations = 0;
  for (const auto& ev : trace) {
    if (ev.kind != TraceKind::save) continue;
    if (ev.process < 0) continue;
    if (static_cast<std::size_t>(ev.process) >= last.size()) last.resize(ev.process + 1);
    auto& prev = last[static_cast<std::size_t>(ev.process)];
    if (prev) {
      if (ev.detail <= prev->number) ++violations;
      if (ev.time - prev->time < tc) ++violations;
    }
    prev = SavedCheckpoint{ev.detail, ev.time};
  }
  return violations;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceEvent>& trace) {
  out << "time_s,event,process,replica,detail\n";
  for (const auto& ev : trace) {
    out << fmt::format("{},{},{},{},{}\n", ev.time, to_string(ev.kind), ev.process,
                       ev.replica, ev.detail);
  }
}

SimResult run_model_mode(const SimConfig& config, std::uint64_t seed);
SimResult run_volpex_mode(const SimConfig& config, std::uint64_t seed);

SimResult run(const SimConfig& config, std::uint64_t seed) {
  config.validate();
  return config.mode == SimMode::model ? run_model_mode(config, seed)
                                       : run_volpex_mode(config, seed);
}

}  // namespace ckpt
