// Virtual controller standing in for the servo board, plus a simulated serial
// link with byte pacing and fault injection.

#ifndef MOJIKIT_SIMULATOR_H_
#define MOJIKIT_SIMULATOR_H_

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mojikit/kinematics.h"
#include "mojikit/protocol.h"
#include "mojikit/sequence.h"
#include "mojikit/units.h"

namespace mojikit {

// Consumes protocol lines, eases each joint toward its latest MOVE target
// with the same curve as the engine, and answers every line with ack or nak.
class VirtualController {
 public:
  struct JointMotion {
    double from_deg;
    double to_deg;
    Millis start_ms;
    Millis motion_ms;
  };

  // Handles every complete line in `bytes` at time `now_ms` (the controller
  // first advances to that time). Partial trailing lines are buffered until
  // their newline arrives. Returns the concatenated ack/nak lines.
  std::string feed_frame(std::string_view bytes, Millis now_ms);

  const JointState& advance(Millis dt_ms);
  // No-op when t_ms is not ahead of the controller clock.
  const JointState& advance_to(Millis t_ms);

  const JointState& pose() const { return pose_; }
  Millis now_ms() const { return now_; }
  const std::array<std::optional<JointMotion>, kJointCount>& motions() const {
    return motions_;
  }
  std::optional<std::uint8_t> last_seen_seq() const { return last_seen_seq_; }

  const std::vector<std::string>& rx_log() const { return rx_log_; }
  const std::vector<std::string>& tx_log() const { return tx_log_; }
  std::size_t applied_count() const { return applied_; }

 private:
  std::string handle_line(std::string_view line);
  double joint_angle_at(std::size_t joint, Millis t) const;

  JointState pose_;
  Millis now_ = 0;
  std::array<std::optional<JointMotion>, kJointCount> motions_;
  std::optional<std::uint8_t> last_seen_seq_;
  std::string partial_;
  std::vector<std::string> rx_log_;
  std::vector<std::string> tx_log_;
  std::size_t applied_ = 0;
};

struct FaultProfile {
  double drop_rate = 0.0;      // frame lost on the way to the controller
  double corrupt_rate = 0.0;   // one payload byte flipped on the way in
  double ack_drop_rate = 0.0;  // reply lost on the way back
  std::uint64_t rng_seed = 0;

  // Throws DomainError unless every rate lies in [0, 1].
  void check() const;
};

// Serial link into a VirtualController. Bytes are paced at baud / 10 bytes
// per second (8N1) with a burst allowance of one tick's worth; frames beyond
// the allowance are delivered later instead of immediately. Replies travel
// back with no latency.
class SimulatedTransport : public Transport {
 public:
  SimulatedTransport(VirtualController& controller, FaultProfile faults = {},
                     LinkConfig link = {}, Millis tick_ms = 20);

  bool is_open() const override { return open_; }
  void close() { open_ = false; }

  void write(std::string_view bytes, Millis now_ms) override;
  std::optional<std::string> read_line(Millis now_ms, Millis wait_ms) override;
  std::optional<Millis> next_reply_time() const override;

  // Delivers every frame whose paced arrival time is <= now_ms.
  void pump(Millis now_ms);

  // One entry per transmission: "<t> <fate> <line>" where fate is
  // sent/dropped/corrupted, plus "<t> ack-dropped <line>" entries.
  const std::vector<std::string>& fault_trace() const { return trace_; }
  std::size_t transmissions() const { return transmissions_; }
  std::size_t bytes_per_second() const { return rate_bytes_per_s_; }

 private:
  struct InTransit {
    Millis deliver_ms;
    std::string bytes;
  };
  struct Pending {
    Millis at_ms;
    std::string line;
  };

  double draw();
  Millis reserve(std::size_t n, Millis now_ms);
  void deliver(const InTransit& frame);

  VirtualController& controller_;
  FaultProfile faults_;
  std::mt19937_64 rng_;
  bool open_ = true;
  std::size_t rate_bytes_per_s_;
  double capacity_bytes_;
  double credit_bytes_;
  Millis credit_ms_ = 0;
  std::deque<InTransit> in_transit_;
  std::deque<Pending> replies_;
  std::vector<std::string> trace_;
  std::size_t transmissions_ = 0;
};

struct MirrorOptions {
  Millis tick_ms = 20;
  LinkConfig link;
  FaultProfile faults;
  // Extra time simulated after the sequence's last block ends.
  Millis tail_ms = 200;
};

// Plays `seq` on an Engine directly and, on the same virtual clock, through
// compile -> relay -> simulated link -> VirtualController. Returns the largest
// per-joint difference seen at any tick, in degrees.
double mirror_equivalence_check(const Sequence& seq, const MirrorOptions& options = {});

}  // namespace mojikit

#endif  // MOJIKIT_SIMULATOR_H_
