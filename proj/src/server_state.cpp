#include "ckpt/error.hpp"
#include "ckpt/simulator.hpp"

namespace ckpt {

ServerCheckpointState::ServerCheckpointState(int processes) {
  if (processes < 1) throw Error(ErrorKind::InvalidConfig, "need at least one process");
  saved_.resize(static_cast<std::size_t>(processes));
}

Decision ServerCheckpointState::accept(int process, std::int64_t requested, double now,
                                       double tc) {
  auto& slot = saved_.at(static_cast<std::size_t>(process));
  if (slot) {
    const bool newer = requested > slot->number;
    const bool interval_elapsed = now - slot->time > tc;
    if (!(newer && interval_elapsed)) return Decision::Ignore;
  } else if (requested < 0) {
    return Decision::Ignore;
  }
  slot = SavedCheckpoint{requested, now};
  return Decision::Save;
}

std::optional<SavedCheckpoint> ServerCheckpointState::last_saved(int process) const {
  return saved_.at(static_cast<std::size_t>(process));
}

std::int64_t ServerCheckpointState::last_saved_number(int process) const {
  const auto& slot = saved_.at(static_cast<std::size_t>(process));
  return slot ? slot->number : 0;
}

}  // namespace ckpt
