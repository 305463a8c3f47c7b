// Queue-based execution engine.
//
// One FIFO per structure; every structure advances independently on a shared
// clock. The engine is a plain single-owner state machine: callers serialize
// enqueue/tick/stop themselves (the service does so through its mailbox).
// Under a virtual clock the same calls always produce the same pose trace.

#ifndef MOJIKIT_EXECUTOR_H_
#define MOJIKIT_EXECUTOR_H_

#include <array>
#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <vector>

#include "mojikit/kinematics.h"
#include "mojikit/sequence.h"
#include "mojikit/trajectory.h"
#include "mojikit/units.h"

namespace mojikit {

enum class EngineStatus { kIdle, kPlaying, kStopped };

std::string_view to_string(EngineStatus status);

// A block waiting on its structure's queue. `not_before_ms` is its start on
// the engine clock (enqueue time + start_ms).
struct QueuedBlock {
  MotionBlock block;
  Millis not_before_ms;
};

struct ActiveBlock {
  MotionBlock block;
  BlockMotion motion;
  bool motion_reported = false;
};

struct ExecutionQueue {
  StructureId structure = StructureId::kHead;
  std::deque<QueuedBlock> pending;
  std::optional<ActiveBlock> active;
};

// What happened to one block, in engine-clock times.
struct ExecutionRecord {
  StructureId structure;
  MotionBlock block;
  std::uint64_t enqueue_order;   // global arrival order of the block
  Millis started_ms;             // when the block took over its structure
  Millis motion_end_ms;          // started + delay + effective motion time
  std::optional<Millis> completed_ms;  // first tick at or past motion end
  std::optional<Millis> ended_ms;      // tick at which it left the queue
};

struct EngineState {
  Millis clock_ms = 0;
  std::array<ExecutionQueue, kStructureCount> queues;
  JointState pose;
  EngineStatus status = EngineStatus::kIdle;
};

class Engine {
 public:
  Engine();

  // Schedules every block at (now + start_ms) on its structure's queue and
  // returns the number of blocks accepted. An invalid sequence is rejected
  // whole with SequenceValidationError and leaves the engine untouched.
  std::size_t enqueue(const Sequence& seq);

  // Advances the clock by dt_ms (> 0) and returns the resulting pose.
  const JointState& tick(Millis dt_ms);

  // Drops all queued and active work and freezes the pose where it is.
  void stop();

  EngineState snapshot() const;

  Millis clock_ms() const { return state_.clock_ms; }
  const JointState& pose() const { return state_.pose; }
  EngineStatus status() const { return state_.status; }
  bool has_work() const;

  const std::vector<ExecutionRecord>& records() const { return records_; }

 private:
  void advance_structure(ExecutionQueue& q);
  AxisPair structure_pose(StructureId s) const;
  void set_structure_pose(StructureId s, const AxisPair& p);

  EngineState state_;
  std::vector<ExecutionRecord> records_;
  // Arrival order of each pending block, parallel to the queues.
  std::array<std::deque<std::uint64_t>, kStructureCount> pending_order_;
  std::array<std::optional<std::size_t>, kStructureCount> active_record_;
  // End of the last block each structure finished; later blocks wait for it.
  std::array<Millis, kStructureCount> free_at_{};
  std::uint64_t next_order_ = 0;
};

// Time sources for driving the engine.
class VirtualClock {
 public:
  Millis now_ms() const { return now_; }
  void advance(Millis dt_ms) { now_ += dt_ms; }

 private:
  Millis now_ = 0;
};

class WallClock {
 public:
  WallClock() : origin_(std::chrono::steady_clock::now()) {}
  Millis now_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - origin_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point origin_;
};

}  // namespace mojikit

#endif  // MOJIKIT_EXECUTOR_H_
