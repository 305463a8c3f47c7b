#include "mojikit/executor.h"

#include <algorithm>
#include <limits>

namespace mojikit {

std::string_view to_string(EngineStatus status) {
  switch (status) {
    case EngineStatus::kIdle: return "idle";
    case EngineStatus::kPlaying: return "playing";
    case EngineStatus::kStopped: return "stopped";
  }
  return "unknown";
}

Engine::Engine() {
  for (std::size_t i = 0; i < kStructureCount; ++i) {
    state_.queues[i].structure = kAllStructures[i];
  }
  free_at_.fill(std::numeric_limits<Millis>::min());
}

bool Engine::has_work() const {
  return std::any_of(state_.queues.begin(), state_.queues.end(),
                     [](const ExecutionQueue& q) {
                       return q.active.has_value() || !q.pending.empty();
                     });
}

std::size_t Engine::enqueue(const Sequence& seq) {
  if (ValidationReport r = validate_sequence(seq); !r.ok()) {
    throw SequenceValidationError(std::move(r));
  }
  std::size_t accepted = 0;
  for (const Track& track : seq.tracks) {
    const std::size_t ord = structure_ordinal(track.structure);
    for (const MotionBlock& b : track.blocks) {
      state_.queues[ord].pending.push_back({b, state_.clock_ms + b.start_ms});
      pending_order_[ord].push_back(next_order_++);
      ++accepted;
    }
  }
  if (accepted > 0) state_.status = EngineStatus::kPlaying;
  return accepted;
}

const JointState& Engine::tick(Millis dt_ms) {
  if (dt_ms <= 0) throw DomainError("tick: dt_ms must be positive");
  state_.clock_ms += dt_ms;
  for (ExecutionQueue& q : state_.queues) advance_structure(q);
  if (state_.status == EngineStatus::kPlaying && !has_work()) {
    state_.status = EngineStatus::kIdle;
  }
  return state_.pose;
}

void Engine::stop() {
  for (std::size_t i = 0; i < kStructureCount; ++i) {
    state_.queues[i].pending.clear();
    state_.queues[i].active.reset();
    pending_order_[i].clear();
    active_record_[i].reset();
  }
  free_at_.fill(std::numeric_limits<Millis>::min());
  state_.status = EngineStatus::kStopped;
}

EngineState Engine::snapshot() const { return state_; }

AxisPair Engine::structure_pose(StructureId s) const {
  return {state_.pose.angle(joint_index(s, AxisFamily::kF)),
          state_.pose.angle(joint_index(s, AxisFamily::kR))};
}

void Engine::set_structure_pose(StructureId s, const AxisPair& p) {
  state_.pose.set(joint_index(s, AxisFamily::kF), p.f_deg);
  state_.pose.set(joint_index(s, AxisFamily::kR), p.r_deg);
}

void Engine::advance_structure(ExecutionQueue& q) {
  const std::size_t ord = structure_ordinal(q.structure);
  const Millis now = state_.clock_ms;
  while (true) {
    if (q.active) {
      ActiveBlock& a = *q.active;
      ExecutionRecord& rec = records_[*active_record_[ord]];
      if (!a.motion_reported && now >= a.motion.motion_end_ms()) {
        rec.completed_ms = now;
        a.motion_reported = true;
      }
      if (now < a.motion.block_end_ms()) {
        set_structure_pose(q.structure, a.motion.at(now));
        return;
      }
      set_structure_pose(q.structure, a.motion.to());
      rec.ended_ms = now;
      free_at_[ord] = a.motion.block_end_ms();
      q.active.reset();
      active_record_[ord].reset();
      continue;
    }
    if (q.pending.empty() || q.pending.front().not_before_ms > now) return;

    const QueuedBlock next = q.pending.front();
    q.pending.pop_front();
    const std::uint64_t order = pending_order_[ord].front();
    pending_order_[ord].pop_front();

    const Millis start = std::max(next.not_before_ms, free_at_[ord]);
    BlockMotion motion(structure_pose(q.structure), next.block, start);
    records_.push_back({q.structure, next.block, order, start,
                        motion.motion_end_ms(), std::nullopt, std::nullopt});
    active_record_[ord] = records_.size() - 1;
    q.active = ActiveBlock{next.block, motion, false};
  }
}

}  // namespace mojikit
