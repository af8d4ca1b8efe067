#pragma once

#include "ckpt/failure_model.hpp"
#include "ckpt/overhead_model.hpp"
#include "ckpt/random.hpp"

namespace ckpt::detail {

/// One synchronised attempt with full accounting: every replica draws a
/// lifetime. Returns true when each process keeps a replica alive for tc.
inline bool superstep_with_dead_count(const JobSpec& spec,
                                      const ExponentialFailureModel& model, double tc,
                                      Engine& engine, int& dead_replicas) {
  bool all_processes_survive = true;
  dead_replicas = 0;
  for (int p = 0; p < spec.n; ++p) {
    bool process_survives = false;
    for (int k = 0; k < spec.r; ++k) {
      if (model.sample_time_to_failure(engine) > tc) {
        process_survives = true;
      } else {
        ++dead_replicas;
      }
    }
    all_processes_survive = all_processes_survive && process_survives;
  }
  return all_processes_survive;
}

/// Same outcome distribution, stopping at the first process that loses all
/// of its replicas.
inline bool superstep_survives(const JobSpec& spec, const ExponentialFailureModel& model,
                               double tc, Engine& engine) {
  for (int p = 0; p < spec.n; ++p) {
    bool process_survives = false;
    for (int k = 0; k < spec.r && !process_survives; ++k) {
      process_survives = model.sample_time_to_failure(engine) > tc;
    }
    if (!process_survives) return false;
  }
  return true;
}

}  // namespace ckpt::detail
