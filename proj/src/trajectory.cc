#include "mojikit/trajectory.h"

#include <algorithm>
#include <string>

namespace mojikit {

double ease(double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError("ease: progress " + std::to_string(u) + " outside [0, 1]");
  }
  return u * u * (3.0 - 2.0 * u);
}

Millis motion_duration(int speed) {
  if (speed < kMinSpeed || speed > kMaxSpeed) {
    throw DomainError("speed level " + std::to_string(speed) + " outside [1, 5]");
  }
  return kSlowestMotionMs / speed;
}

Millis effective_motion_ms(const MotionBlock& block) {
  return std::min(motion_duration(block.speed), block.duration_ms - block.delay_ms);
}

BlockMotion::BlockMotion(AxisPair from, const MotionBlock& block,
                         Millis block_start_ms)
    : from_(from),
      to_{block.f_deg, block.r_deg},
      block_start_(block_start_ms),
      motion_start_(block_start_ms + block.delay_ms),
      motion_ms_(effective_motion_ms(block)),
      block_end_(block_start_ms + block.duration_ms) {}

AxisPair BlockMotion::at(Millis t_ms) const {
  if (t_ms <= motion_start_) return from_;
  if (t_ms >= motion_start_ + motion_ms_) return to_;
  const double w = ease(static_cast<double>(t_ms - motion_start_) /
                        static_cast<double>(motion_ms_));
  return {from_.f_deg + (to_.f_deg - from_.f_deg) * w,
          from_.r_deg + (to_.r_deg - from_.r_deg) * w};
}

Trajectory plan_block(AxisPair start_pose, const MotionBlock& block,
                      Millis tick_ms) {
  if (tick_ms <= 0) throw DomainError("tick_ms must be positive");
  const BlockMotion motion(start_pose, block, block.start_ms);
  Trajectory out{block.structure, tick_ms, {}};

  auto emit = [&](Millis t) {
    if (!out.samples.empty() && out.samples.back().t_ms >= t) return;
    const AxisPair p = motion.at(t);
    out.samples.push_back({t, p.f_deg, p.r_deg});
  };

  const Millis first = motion.motion_start_ms();
  const Millis motion_end = motion.motion_end_ms();
  for (Millis t = first; t < motion.block_end_ms(); t += tick_ms) {
    if (t > motion_end && out.samples.back().t_ms < motion_end) emit(motion_end);
    emit(t);
  }
  emit(motion_end);
  emit(motion.block_end_ms());
  return out;
}

}  // namespace mojikit
