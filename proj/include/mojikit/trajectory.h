// Eased joint trajectories for motion blocks.
//
// A block moves both of its axes from the structure's pose at block start to
// (f_deg, r_deg) along the cubic Bezier ease whose inner control points sit on
// the endpoints. That curve is exactly 3u^2 - 2u^3: zero velocity at both
// ends, symmetric about (0.5, 0.5).

#ifndef MOJIKIT_TRAJECTORY_H_
#define MOJIKIT_TRAJECTORY_H_

#include <vector>

#include "mojikit/kinematics.h"
#include "mojikit/sequence.h"
#include "mojikit/units.h"

namespace mojikit {

inline constexpr Millis kDefaultTickMs = 20;
inline constexpr Millis kSlowestMotionMs = 2400;

// Eased progress for u in [0, 1]; throws DomainError otherwise.
double ease(double u);

// 2400 / speed: 2400, 1200, 800, 600, 480 ms. Throws DomainError for speeds
// outside [1, 5].
Millis motion_duration(int speed);

// Motion time actually used by a block: the speed's duration, compressed to
// fit the part of the block that follows the delay.
Millis effective_motion_ms(const MotionBlock& block);

// Pose of one structure's two axes.
struct AxisPair {
  double f_deg = 0.0;
  double r_deg = 0.0;
  bool operator==(const AxisPair&) const = default;
};

// Closed-form motion of one block placed at an absolute time.
class BlockMotion {
 public:
  BlockMotion(AxisPair from, const MotionBlock& block, Millis block_start_ms);

  AxisPair at(Millis t_ms) const;

  Millis block_start_ms() const { return block_start_; }
  Millis motion_start_ms() const { return motion_start_; }
  Millis motion_end_ms() const { return motion_start_ + motion_ms_; }
  Millis block_end_ms() const { return block_end_; }
  Millis motion_ms() const { return motion_ms_; }
  const AxisPair& from() const { return from_; }
  const AxisPair& to() const { return to_; }

 private:
  AxisPair from_;
  AxisPair to_;
  Millis block_start_;
  Millis motion_start_;
  Millis motion_ms_;
  Millis block_end_;
};

struct TrajectorySample {
  Millis t_ms;
  double f_deg;
  double r_deg;
  bool operator==(const TrajectorySample&) const = default;
};

struct Trajectory {
  StructureId structure;
  Millis tick_ms;
  std::vector<TrajectorySample> samples;
};

// Samples a block from its motion start (start_ms + delay_ms) to its end at
// every tick, plus the exact motion-end and block-end instants. Times are on
// the sequence timeline. Throws DomainError if tick_ms <= 0.
Trajectory plan_block(AxisPair start_pose, const MotionBlock& block,
                      Millis tick_ms = kDefaultTickMs);

}  // namespace mojikit

#endif  // MOJIKIT_TRAJECTORY_H_
