#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "ckpt/failure_model.hpp"
#include "ckpt/overhead_model.hpp"

namespace ckpt {

enum class SimMode {
  /// Synchronised super-steps of length tc; restart only at interval
  /// boundaries; zero detection time.
  model,
  /// Asynchronous request-based checkpointing with replica-aware restart and
  /// heartbeat failure detection.
  volpex,
};

std::string_view to_string(SimMode mode);
std::optional<SimMode> parse_sim_mode(std::string_view name);

/// Forces replica `replica` of `process` to fail at absolute time `at`
/// (volpex mode). Replica ids count up per process: the initial replicas are
/// 0..r-1, later spawns continue from r.
struct ScriptedFailure {
  int process = 0;
  int replica = 0;
  double at = 0.0;
};

struct SimConfig {
  JobSpec spec;
  double tc = 1.0;
  double ts = 0.0;
  ExponentialFailureModel failure_model = ExponentialFailureModel::from_rate(0.0);
  std::int64_t total_work = 1;  // work units (one StoreCheckpoint request each)
  double quantum_time = 1.0;    // seconds of computation per unit at speed 1
  double heartbeat_timeout = 60.0;
  SimMode mode = SimMode::model;
  double speed_spread = 0.0;    // client speed ~ U[1-s, 1+s]
  double budget_factor = 1e4;   // cap = budget_factor * failure_free_time()
  bool record_trace = false;
  std::vector<ScriptedFailure> scripted_failures;

  /// Throws InvalidConfig naming the offending field.
  void validate() const;

  /// Completion time with no failures and unit speed. Exact for model mode;
  /// an upper-bound style estimate for volpex mode.
  double failure_free_time() const;

  /// Number of synchronised intervals in model mode. Throws WorkNotDivisible
  /// unless total_work * quantum_time is an integer multiple of tc.
  std::int64_t model_intervals() const;
};

enum class TraceKind {
  failure,         // replica actually died
  detect,          // server noticed (heartbeat timeout)
  save,            // StoreCheckpoint accepted; detail = checkpoint number
  ignore,          // StoreCheckpoint ignored; detail = requested number
  restart,         // no replica left: new one from last saved; detail = position
  spawn,           // replacement after a survivor's save; detail = position
  finish,          // process reached total_work
  interval_ok,     // model mode super-step succeeded; detail = dead replicas
  interval_failed, // model mode super-step failed; detail = dead replicas
};

std::string_view to_string(TraceKind kind);

struct TraceEvent {
  double time = 0.0;
  TraceKind kind = TraceKind::failure;
  int process = -1;
  int replica = -1;
  std::int64_t detail = 0;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct SimResult {
  double completion_time = 0.0;
  std::int64_t checkpoints_saved = 0;
  std::int64_t requests_ignored = 0;
  std::int64_t failures = 0;
  std::int64_t work_lost = 0;    // work units rolled back
  std::int64_t useful_work = 0;  // units credited at completion (n * total_work)
  std::vector<TraceEvent> trace;

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

/// Runs one simulation. Deterministic in (config, seed).
/// Throws WorkNotDivisible (model mode) and BudgetExceeded.
SimResult run(const SimConfig& config, std::uint64_t seed);

/// Server-side acceptance of StoreCheckpoint requests.
enum class Decision { Save, Ignore };

struct SavedCheckpoint {
  std::int64_t number = 0;
  double time = 0.0;
};

class ServerCheckpointState {
 public:
  explicit ServerCheckpointState(int processes);

  /// Save iff the request is newer than the last saved checkpoint and more
  /// than tc has elapsed since that save. A process with no save yet treats
  /// the elapsed time as infinite.
  Decision accept(int process, std::int64_t requested, double now, double tc);

  std::optional<SavedCheckpoint> last_saved(int process) const;
  /// 0 (the job start) when nothing has been saved.
  std::int64_t last_saved_number(int process) const;
  int processes() const noexcept { return static_cast<int>(saved_.size()); }

 private:
  std::vector<std::optional<SavedCheckpoint>> saved_;
};

inline Decision accept_checkpoint(ServerCheckpointState& server, int process,
                                  std::int64_t requested, double now, double tc) {
  return server.accept(process, requested, now, tc);
}

/// Counts violations of the server rule in a recorded trace: per process,
/// saved numbers must strictly increase and consecutive saves be more than
/// tc apart.
std::int64_t count_server_rule_violations(const std::vector<TraceEvent>& trace, double tc);

/// Writes `time_s,event,process,replica,detail`.
void write_trace_csv(std::ostream& out, const std::vector<TraceEvent>& trace);

struct MonteCarloOptions {
  /// Super-steps whose expected attempt count (1 / success probability)
  /// exceeds this are sampled as a geometric attempt count instead of one
  /// attempt at a time.
  double explicit_attempt_cap = 128.0;
};

/// Mean simulated time per successful super-step (model-mode semantics):
/// each trial retries the interval until every process keeps a replica
/// alive, then pays ts. Both variants are bit-identical for the same seed.
double monte_carlo_overhead(const SimConfig& config, std::uint64_t trials,
                            std::uint64_t seed, const MonteCarloOptions& options = {});
double monte_carlo_overhead_serial(const SimConfig& config, std::uint64_t trials,
                                   std::uint64_t seed,
                                   const MonteCarloOptions& options = {});

}  // namespace ckpt
