// Event-driven simulation of replicated, request-checkpointing processes.
//
// Each replica computes work units; after every unit it asks the server to
// store a checkpoint. Units carry a data dependence: a replica may start unit
// w+1 only once every other process has produced unit w (by any replica,
// living or dead, since exchanged data outlives its producer). Failures are
// noticed after the heartbeat timeout and handled replica-aware:
//   - no other replica left: restart immediately from the last saved
//     checkpoint;
//   - otherwise: queue a replacement that is spawned from the next checkpoint
//     a surviving replica gets accepted.

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include <fmt/format.h>

#include "ckpt/error.hpp"
#include "ckpt/random.hpp"
#include "ckpt/simulator.hpp"

namespace ckpt {

namespace {

// Lower value runs first at equal timestamps.
enum class EventKind : int {
  failure = 0,
  detect = 1,
  work_done = 2,  // completes a unit and issues the StoreCheckpoint request
  resume = 3,     // end of a blocking checkpoint save
};

struct Event {
  double time;
  EventKind kind;
  std::uint64_t seq;
  int replica;  // index into VolpexEngine::replicas_
  std::uint64_t life;

  bool operator>(const Event& other) const {
    if (time != other.time) return time > other.time;
    if (kind != other.kind) return kind > other.kind;
    return seq > other.seq;
  }
};

enum class ReplicaPhase { computing, waiting, saving, dead, finished };

struct Replica {
  int process = 0;
  int id = 0;
  std::int64_t work_done = 0;
  double speed = 1.0;
  double fail_at = 0.0;
  ReplicaPhase phase = ReplicaPhase::waiting;
  bool detected = false;  // server has declared it dead
  std::uint64_t life = 0; // bumps on death; stale events carry the old value
};

struct ProcessState {
  std::vector<int> members;  // replicas the server still counts as alive
  std::int64_t frontier = 0; // highest unit produced by any replica
  int pending_spawns = 0;
  int next_replica_id = 0;
  bool finished = false;
};

class VolpexEngine {
 public:
  VolpexEngine(const SimConfig& config, std::uint64_t seed)
      : config_(config),
        engine_(seed),
        server_(config.spec.n),
        processes_(static_cast<std::size_t>(config.spec.n)),
        cap_(config.budget_factor * config.failure_free_time()) {}

  SimResult run() {
    for (int p = 0; p < config_.spec.n; ++p) {
      for (int k = 0; k < config_.spec.r; ++k) {
        const int idx = create_replica(p, 0, 0.0);
        try_start(idx, 0.0);
      }
    }
    while (finished_processes_ < config_.spec.n) {
      if (queue_.empty()) {
        throw Error(ErrorKind::BudgetExceeded, "event queue drained before completion");
      }
      const Event ev = queue_.top();
      queue_.pop();
      if (ev.time > cap_) {
        throw Error(ErrorKind::BudgetExceeded,
                    fmt::format("simulated time passed the {:.6g} s budget", cap_));
      }
      dispatch(ev);
    }
    result_.useful_work = 0;
    for (const auto& proc : processes_) result_.useful_work += proc.frontier;
    return std::move(result_);
  }

 private:
  void dispatch(const Event& ev) {
    Replica& rep = replicas_[static_cast<std::size_t>(ev.replica)];
    switch (ev.kind) {
      case EventKind::failure:
        if (ev.life == rep.life) on_failure(ev.replica, ev.time);
        break;
      case EventKind::detect:
        on_detect(ev.replica, ev.time);
        break;
      case EventKind::work_done:
        if (ev.life == rep.life) on_work_done(ev.replica, ev.time);
        break;
      case EventKind::resume:
        if (ev.life == rep.life && rep.phase == ReplicaPhase::saving) try_start(ev.replica, ev.time);
        break;
    }
  }

  void push(double time, EventKind kind, int replica) {
    queue_.push({time, kind, seq_++, replica,
                 replicas_[static_cast<std::size_t>(replica)].life});
  }

  void trace(double time, TraceKind kind, int process, int replica, std::int64_t detail) {
    if (config_.record_trace) result_.trace.push_back({time, kind, process, replica, detail});
  }

  double scripted_failure(int process, int replica_id) const {
    for (const auto& s : config_.scripted_failures) {
      if (s.process == process && s.replica == replica_id) return s.at;
    }
    return -1.0;
  }

  int create_replica(int process, std::int64_t position, double now) {
    ProcessState& proc = processes_[static_cast<std::size_t>(process)];
    Replica rep;
    rep.process = process;
    rep.id = proc.next_replica_id++;
    rep.work_done = position;
    if (config_.speed_spread > 0.0) {
      rep.speed = 1.0 - config_.speed_spread + 2.0 * config_.speed_spread * uniform_open01(engine_);
    }
    const double scripted = scripted_failure(process, rep.id);
    rep.fail_at = scripted >= 0.0 ? std::max(scripted, now)
                                  : now + config_.failure_model.sample_time_to_failure(engine_);
    const int idx = static_cast<int>(replicas_.size());
    replicas_.push_back(rep);
    proc.members.push_back(idx);
    if (std::isfinite(rep.fail_at)) push(rep.fail_at, EventKind::failure, idx);
    return idx;
  }

  bool dependencies_met(int process, std::int64_t next_unit) const {
    for (int q = 0; q < config_.spec.n; ++q) {
      if (q == process) continue;
      const ProcessState& other = processes_[static_cast<std::size_t>(q)];
      if (!other.finished && other.frontier < next_unit - 1) return false;
    }
    return true;
  }

  void try_start(int idx, double now) {
    Replica& rep = replicas_[static_cast<std::size_t>(idx)];
    if (rep.phase == ReplicaPhase::dead || rep.phase == ReplicaPhase::finished) return;
    if (processes_[static_cast<std::size_t>(rep.process)].finished) {
      rep.phase = ReplicaPhase::finished;
      return;
    }
    if (!dependencies_met(rep.process, rep.work_done + 1)) {
      rep.phase = ReplicaPhase::waiting;
      waiting_.push_back(idx);
      return;
    }
    rep.phase = ReplicaPhase::computing;
    push(now + config_.quantum_time / rep.speed, EventKind::work_done, idx);
  }

  void wake_waiting(double now) {
    std::vector<int> blocked;
    blocked.swap(waiting_);
    for (int idx : blocked) {
      if (replicas_[static_cast<std::size_t>(idx)].phase == ReplicaPhase::waiting) {
        try_start(idx, now);
      }
    }
  }

  void on_work_done(int idx, double now) {
    Replica& rep = replicas_[static_cast<std::size_t>(idx)];
    ProcessState& proc = processes_[static_cast<std::size_t>(rep.process)];
    if (proc.finished || rep.phase != ReplicaPhase::computing) return;
    ++rep.work_done;
    const bool advanced = rep.work_done > proc.frontier;
    if (advanced) proc.frontier = rep.work_done;

    if (rep.work_done == config_.total_work) {
      proc.finished = true;
      ++finished_processes_;
      trace(now, TraceKind::finish, rep.process, rep.id, rep.work_done);
      for (int m : proc.members) replicas_[static_cast<std::size_t>(m)].phase = ReplicaPhase::finished;
      if (finished_processes_ == config_.spec.n) {
        result_.completion_time = now;
        return;
      }
      wake_waiting(now);
      return;
    }

    const int process = rep.process;
    const std::int64_t number = rep.work_done;
    const int rep_id = rep.id;
    if (server_.accept(process, number, now, config_.tc) == Decision::Save) {
      ++result_.checkpoints_saved;
      trace(now, TraceKind::save, process, rep_id, number);
      rep.phase = ReplicaPhase::saving;
      push(now + config_.ts, EventKind::resume, idx);
      // Replacements for replicas lost while this one survived start from
      // the checkpoint just accepted; fetching it costs them ts as well.
      const int spawns = proc.pending_spawns;
      proc.pending_spawns = 0;
      for (int s = 0; s < spawns; ++s) {
        const int fresh = create_replica(process, number, now);
        Replica& f = replicas_[static_cast<std::size_t>(fresh)];
        f.phase = ReplicaPhase::saving;
        trace(now, TraceKind::spawn, process, f.id, number);
        push(now + config_.ts, EventKind::resume, fresh);
      }
    } else {
      ++result_.requests_ignored;
      trace(now, TraceKind::ignore, process, rep_id, number);
      try_start(idx, now);
    }
    if (advanced) wake_waiting(now);
  }

  void on_failure(int idx, double now) {
    Replica& rep = replicas_[static_cast<std::size_t>(idx)];
    if (rep.phase == ReplicaPhase::dead || rep.phase == ReplicaPhase::finished) return;
    if (processes_[static_cast<std::size_t>(rep.process)].finished) return;
    rep.phase = ReplicaPhase::dead;
    ++rep.life;
    ++result_.failures;
    trace(now, TraceKind::failure, rep.process, rep.id, rep.work_done);
    const double detect_at = now + config_.heartbeat_timeout;
    queue_.push({detect_at, EventKind::detect, seq_++, idx, rep.life});
  }

  void on_detect(int idx, double now) {
    Replica& rep = replicas_[static_cast<std::size_t>(idx)];
    ProcessState& proc = processes_[static_cast<std::size_t>(rep.process)];
    if (proc.finished || rep.detected) return;
    rep.detected = true;
    trace(now, TraceKind::detect, rep.process, rep.id, rep.work_done);
    handle_failure(idx, now);
  }

  void handle_failure(int idx, double now) {
    const Replica& rep = replicas_[static_cast<std::size_t>(idx)];
    const int process = rep.process;
    ProcessState& proc = processes_[static_cast<std::size_t>(process)];
    std::erase(proc.members, idx);
    if (!proc.members.empty()) {
      ++proc.pending_spawns;
      return;
    }
    const std::int64_t from = server_.last_saved_number(process);
    result_.work_lost += proc.frontier - from;
    const int fresh = create_replica(process, from, now);
    trace(now, TraceKind::restart, process, replicas_[static_cast<std::size_t>(fresh)].id, from);
    try_start(fresh, now);
  }

  const SimConfig& config_;
  Engine engine_;
  ServerCheckpointState server_;
  std::vector<ProcessState> processes_;
  std::vector<Replica> replicas_;
  std::vector<int> waiting_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::uint64_t seq_ = 0;
  int finished_processes_ = 0;
  double cap_;
  SimResult result_;
};

}  // namespace

SimResult run_volpex_mode(const SimConfig& config, std::uint64_t seed) {
  VolpexEngine engine(config, seed);
  return engine.run();
}

}  // namespace ckpt
