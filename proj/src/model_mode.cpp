#include <cmath>

#include <fmt/format.h>

#include "ckpt/error.hpp"
#include "ckpt/simulator.hpp"
#include "superstep.hpp"

namespace ckpt {

SimResult run_model_mode(const SimConfig& config, std::uint64_t seed) {
  const std::int64_t intervals = config.model_intervals();
  const double cap = config.budget_factor * config.failure_free_time();
  const auto units_per_interval =
      static_cast<std::int64_t>(std::llround(config.tc / config.quantum_time));
  const JobSpec& spec = config.spec;

  Engine engine(seed);
  SimResult result;
  double elapsed = 0.0;
  std::int64_t completed = 0;
  while (completed < intervals) {
    int dead = 0;
    const bool ok =
        detail::superstep_with_dead_count(spec, config.failure_model, config.tc, engine, dead);
    elapsed += config.tc;
    result.failures += dead;
    if (ok) {
      elapsed += config.ts;
      ++completed;
      result.checkpoints_saved += spec.n;
    } else {
      result.work_lost += spec.n * units_per_interval;
    }
    if (config.record_trace) {
      result.trace.push_back({elapsed, ok ? TraceKind::interval_ok : TraceKind::interval_failed,
                              -1, -1, dead});
    }
    if (elapsed > cap) {
      throw Error(ErrorKind::BudgetExceeded,
                  fmt::format("simulated time passed the {:.6g} s budget", cap));
    }
  }
  result.completion_time = elapsed;
  result.useful_work = spec.n * config.total_work;
  return result;
}

}  // namespace ckpt
