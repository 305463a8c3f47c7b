#include "mojikit/trajectory.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_support.h"

namespace mojikit {
namespace {

using S = StructureId;

// Independent oracle: the smoothstep polynomial written out directly.
double oracle(double from, double to, double tau) {
  return from + (to - from) * (3 * tau * tau - 2 * tau * tau * tau);
}

TEST(EaseTest, Values) {
  EXPECT_EQ(ease(0.0), 0.0);
  EXPECT_EQ(ease(1.0), 1.0);
  EXPECT_EQ(ease(0.5), 0.5);
  EXPECT_DOUBLE_EQ(ease(0.25), 0.15625);
  EXPECT_DOUBLE_EQ(ease(0.75), 0.84375);
}

TEST(EaseTest, OutsideUnitIntervalThrows) {
  EXPECT_THROW(ease(-1e-12), DomainError);
  EXPECT_THROW(ease(1.0 + 1e-12), DomainError);
  EXPECT_THROW(ease(std::nan("")), DomainError);
}

TEST(EaseTest, MonotoneAndSymmetric) {
  double prev = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double u = i / 1000.0;
    const double w = ease(u);
    EXPECT_GE(w, prev);
    EXPECT_NEAR(w + ease(1.0 - u), 1.0, 1e-15);
    prev = w;
  }
}

TEST(MotionDurationTest, Table) {
  EXPECT_EQ(motion_duration(1), 2400);
  EXPECT_EQ(motion_duration(2), 1200);
  EXPECT_EQ(motion_duration(3), 800);
  EXPECT_EQ(motion_duration(4), 600);
  EXPECT_EQ(motion_duration(5), 480);
  EXPECT_THROW(motion_duration(0), DomainError);
  EXPECT_THROW(motion_duration(6), DomainError);
}

TEST(MotionDurationTest, CompressesToFitBlock) {
  EXPECT_EQ(effective_motion_ms(MotionBlock{S::kHead, 0, 0, 1, 0, 0, 1000}), 1000);
  EXPECT_EQ(effective_motion_ms(MotionBlock{S::kHead, 0, 0, 3, 300, 0, 1000}), 700);
  EXPECT_EQ(effective_motion_ms(MotionBlock{S::kHead, 0, 0, 5, 0, 0, 1000}), 480);
}

TEST(PlanBlockTest, ConstantWhenAlreadyAtTarget) {
  const Trajectory t = plan_block({10, -5}, MotionBlock{S::kHead, 10, -5, 2, 50, 0, 900});
  ASSERT_FALSE(t.samples.empty());
  for (const auto& s : t.samples) {
    EXPECT_EQ(s.f_deg, 10);
    EXPECT_EQ(s.r_deg, -5);
  }
}

TEST(PlanBlockTest, MidpointOfHeadPitch) {
  const Trajectory t = plan_block({0, 0}, MotionBlock{S::kHead, 40, 0, 3, 0, 0, 800});
  bool found = false;
  for (const auto& s : t.samples) {
    if (s.t_ms == 400) {
      EXPECT_DOUBLE_EQ(s.f_deg, 20.0);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(PlanBlockTest, StartsAfterDelayEndsAtTargetHoldsToBlockEnd) {
  const MotionBlock b{S::kTail, -60, 45, 4, 130, 1000, 1500};
  const Trajectory t = plan_block({20, 10}, b, 20);
  ASSERT_GE(t.samples.size(), 2u);
  EXPECT_EQ(t.samples.front().t_ms, 1130);
  EXPECT_EQ(t.samples.front().f_deg, 20);
  EXPECT_EQ(t.samples.front().r_deg, 10);
  EXPECT_EQ(t.samples.back().t_ms, 2500);
  EXPECT_EQ(t.samples.back().f_deg, -60);
  EXPECT_EQ(t.samples.back().r_deg, 45);
  bool has_motion_end = false;
  for (std::size_t i = 1; i < t.samples.size(); ++i) {
    EXPECT_LT(t.samples[i - 1].t_ms, t.samples[i].t_ms);
    if (t.samples[i].t_ms == 1130 + 600) {
      has_motion_end = true;
      EXPECT_EQ(t.samples[i].f_deg, -60);
    }
    if (t.samples[i].t_ms >= 1730) EXPECT_EQ(t.samples[i].f_deg, -60);
  }
  EXPECT_TRUE(has_motion_end);
}

TEST(PlanBlockTest, RejectsBadTick) {
  EXPECT_THROW(plan_block({0, 0}, MotionBlock{}, 0), DomainError);
}

TEST(PlanBlockTest, MatchesOracleAndStaysInRange) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const S s = kAllStructures[rng() % kStructureCount];
    MotionBlock b;
    b.structure = s;
    b.f_deg = testing::random_angle(rng, s, AxisFamily::kF);
    b.r_deg = testing::random_angle(rng, s, AxisFamily::kR);
    b.speed = 1 + static_cast<int>(rng() % 5);
    b.start_ms = static_cast<Millis>(rng() % 3000);
    b.duration_ms = 1 + static_cast<Millis>(rng() % 3000);
    b.delay_ms = static_cast<Millis>(rng() % b.duration_ms);
    const AxisPair from{testing::random_angle(rng, s, AxisFamily::kF),
                        testing::random_angle(rng, s, AxisFamily::kR)};
    const Millis tick = 1 + static_cast<Millis>(rng() % 40);
    const Trajectory t = plan_block(from, b, tick);
    const Millis m0 = b.start_ms + b.delay_ms;
    const Millis m = std::min(motion_duration(b.speed), b.duration_ms - b.delay_ms);
    bool monotone_f = true;
    for (std::size_t k = 0; k < t.samples.size(); ++k) {
      const auto& smp = t.samples[k];
      const double tau = std::min(1.0, static_cast<double>(smp.t_ms - m0) / static_cast<double>(m));
      EXPECT_NEAR(smp.f_deg, oracle(from.f_deg, b.f_deg, tau), 1e-9);
      EXPECT_NEAR(smp.r_deg, oracle(from.r_deg, b.r_deg, tau), 1e-9);
      EXPECT_EQ(clamp_angle(s, axis_for(s, AxisFamily::kF), smp.f_deg), smp.f_deg);
      EXPECT_EQ(clamp_angle(s, axis_for(s, AxisFamily::kR), smp.r_deg), smp.r_deg);
      if (k > 0) {
        const double d = smp.f_deg - t.samples[k - 1].f_deg;
        if (b.f_deg >= from.f_deg ? d < -1e-12 : d > 1e-12) monotone_f = false;
      }
    }
    EXPECT_TRUE(monotone_f);
  }
}

// Largest discrete velocity over the first and last motion ticks.
double boundary_velocity(Millis tick) {
  const MotionBlock b{S::kTail, 90, 0, 2, 0, 0, 1200};
  const Trajectory t = plan_block({-90, 0}, b, tick);
  const auto& s = t.samples;
  const double first = std::abs(s[1].f_deg - s[0].f_deg) / static_cast<double>(s[1].t_ms - s[0].t_ms);
  std::size_t end = 0;
  while (s[end].t_ms < 1200) ++end;
  const double last =
      std::abs(s[end].f_deg - s[end - 1].f_deg) / static_cast<double>(s[end].t_ms - s[end - 1].t_ms);
  return std::max(first, last);
}

TEST(PlanBlockTest, BoundaryVelocityShrinksWithTick) {
  const double v20 = boundary_velocity(20);
  const double v10 = boundary_velocity(10);
  const double v5 = boundary_velocity(5);
  EXPECT_GT(v20, v10);
  EXPECT_GT(v10, v5);
  // Velocity near the ends is linear in the step, so halving the tick
  // roughly halves it.
  EXPECT_NEAR(v20 / v10, 2.0, 0.1);
  EXPECT_NEAR(v10 / v5, 2.0, 0.1);
}

}  // namespace
}  // namespace mojikit
