#include "mojikit/service.h"

#include <chrono>
#include <thread>

#include <gtest/gtest.h>
#include <json.hpp>

#include "reference_engine.h"

namespace mojikit {
namespace {

using S = StructureId;
using nlohmann::json;

std::vector<TelemetryEvent> drain(TelemetrySubscription& sub) {
  std::vector<TelemetryEvent> out;
  while (auto e = sub.next(0)) out.push_back(*e);
  return out;
}

// Plays `preset`, subscribes right away and advances until the session ends.
std::vector<TelemetryEvent> play_to_end(PlaybackService& svc, const std::string& preset,
                                        std::size_t every = 1) {
  const std::string id = svc.play({preset, std::nullopt, false});
  auto sub = svc.subscribe(id, every);
  for (int i = 0; i < 1000 && svc.active_session(); ++i) svc.advance(1);
  EXPECT_FALSE(svc.active_session().has_value());
  EXPECT_TRUE(sub->finished() || sub->next(0).has_value());
  return drain(*sub);
}

// Well formed, but the second tail block starts before the first ends.
std::string overlapping_document() {
  return R"({"name": "overlap", "version": 1, "tracks": [{"structure": "tail", "blocks": [
    {"f_deg": 10.0, "r_deg": 10.0, "speed": 3, "delay_ms": 0, "start_ms": 0, "duration_ms": 1000},
    {"f_deg": 20.0, "r_deg": 10.0, "speed": 3, "delay_ms": 0, "start_ms": 500, "duration_ms": 1000}
  ]}]})";
}

TEST(TelemetryEventTest, JsonEnvelope) {
  JointState p;
  p.set(S::kTail, AxisId::kWag, -12.345);
  const TelemetryEvent e{40, p, "playing", {}};
  const json j = json::parse(e.to_json());
  EXPECT_EQ(j.at("t_ms"), 40);
  EXPECT_EQ(j.at("angles").size(), 16u);
  EXPECT_EQ(j.at("status"), "playing");
  EXPECT_FALSE(j.contains("error"));
  EXPECT_NE(e.to_json().find("-12.3"), std::string::npos);
  const TelemetryEvent err{0, {}, "error", "boom"};
  EXPECT_EQ(json::parse(err.to_json()).at("error"), "boom");
}

TEST(TelemetrySubscriptionTest, DecimationBacklogAndClose) {
  TelemetrySubscription sub(3, 2);
  for (int i = 0; i < 9; ++i) sub.publish({i, {}, "playing", {}});
  // Kept: 0, 3, 6; backlog 2 drops the oldest.
  EXPECT_EQ(sub.dropped(), 1u);
  EXPECT_EQ(sub.next(0)->t_ms, 3);
  sub.publish({100, {}, "stopped", {}}, true);
  sub.close();
  sub.publish({200, {}, "playing", {}}, true);
  EXPECT_FALSE(sub.finished());
  EXPECT_EQ(sub.next(0)->t_ms, 6);
  EXPECT_EQ(sub.next(0)->t_ms, 100);
  EXPECT_FALSE(sub.next(0).has_value());
  EXPECT_TRUE(sub.finished());
}

TEST(ServiceTest, TailWagStreamsRangeValidAngles) {
  PlaybackService svc;
  const auto events = play_to_end(svc, "tail_wag");
  ASSERT_GT(events.size(), 100u);
  double lo = 0;
  double hi = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const double wag = events[i].pose.angle(S::kTail, AxisId::kWag);
    lo = std::min(lo, wag);
    hi = std::max(hi, wag);
    EXPECT_TRUE(events[i].pose.in_range());
    if (i > 0) EXPECT_GE(events[i].t_ms, events[i - 1].t_ms);
    for (S s : kAllStructures) {
      if (s == S::kTail) continue;
      EXPECT_EQ(events[i].pose.angle(joint_index(s, AxisFamily::kF)), 0.0);
    }
  }
  EXPECT_LT(lo, -40.0);
  EXPECT_GT(hi, 40.0);
  EXPECT_EQ(events.front().status, "playing");
  EXPECT_EQ(events.back().status, "idle");
}

TEST(ServiceTest, NodStreamMatchesReference) {
  PlaybackService svc;
  const auto events = play_to_end(svc, "nod");
  testing::ReferenceEngine ref;
  ref.enqueue(*load_presets().find("nod"), 0);
  for (const TelemetryEvent& e : events) {
    EXPECT_LT(testing::max_abs_diff(e.pose, ref.pose_at(e.t_ms)), 1e-9) << e.t_ms;
  }
  EXPECT_EQ(events.back().pose.angle(S::kHead, AxisId::kPitch), 0.0);
  const auto ctrl = svc.controller_pose();
  ASSERT_TRUE(ctrl.has_value());
  EXPECT_LE(testing::max_abs_diff(*ctrl, events.back().pose), 0.1);
}

TEST(ServiceTest, VirtualClockIsDeterministic) {
  auto run = [] {
    PlaybackService svc;
    std::string bytes;
    for (const TelemetryEvent& e : play_to_end(svc, "greet_combo")) bytes += e.to_json() + "\n";
    return bytes;
  };
  const std::string a = run();
  EXPECT_EQ(a, run());
  EXPECT_GT(a.size(), 1000u);
}

TEST(ServiceTest, ConcurrentSubscribersSeeTheSameEvents) {
  PlaybackService svc;
  const std::string id = svc.play({"paw_lift", std::nullopt, false});
  auto a = svc.subscribe(id);
  auto b = svc.subscribe(id);
  svc.advance(500);
  const auto ea = drain(*a);
  const auto eb = drain(*b);
  ASSERT_EQ(ea.size(), eb.size());
  for (std::size_t i = 0; i < ea.size(); ++i) EXPECT_EQ(ea[i].to_json(), eb[i].to_json());
}

TEST(ServiceTest, DecimatedSubscriber) {
  PlaybackService svc;
  const std::string id = svc.play({"nod", std::nullopt, false});
  auto every = svc.subscribe(id, 1);
  auto fifth = svc.subscribe(id, 5);
  svc.advance(50);
  const auto all = drain(*every);
  const auto some = drain(*fifth);
  EXPECT_EQ(all.size(), 51u);
  EXPECT_EQ(some.size(), 11u);
  EXPECT_EQ(some[1].t_ms, all[5].t_ms);
}

TEST(ServiceTest, PlayErrors) {
  PlaybackService svc;
  EXPECT_THROW(svc.play({"fly", std::nullopt, false}), NotFound);
  EXPECT_THROW(svc.play({std::nullopt, std::nullopt, false}), std::invalid_argument);
  EXPECT_THROW(svc.play({"nod", "{}", false}), std::invalid_argument);
  EXPECT_THROW(svc.play({std::nullopt, "not json", false}), SequenceParseError);
  const std::string overlap = overlapping_document();
  EXPECT_NO_THROW(parse_sequence_document(overlap));
  EXPECT_THROW(svc.play({std::nullopt, overlap, false}), SequenceValidationError);
  EXPECT_FALSE(svc.active_session().has_value());
}

TEST(ServiceTest, PlayDocument) {
  PlaybackService svc;
  const std::string doc = export_sequence(*load_presets().find("ear_perk"));
  const std::string id = svc.play({std::nullopt, doc, false});
  EXPECT_EQ(svc.session(id).sequence_name, "ear_perk");
  EXPECT_EQ(svc.session(id).target, "simulator");
}

TEST(ServiceTest, BusyUnlessReplace) {
  PlaybackService svc;
  const std::string first = svc.play({"roll", std::nullopt, false});
  svc.advance(10);
  EXPECT_THROW(svc.play({"nod", std::nullopt, false}), Busy);
  auto sub = svc.subscribe(first);
  const std::string second = svc.play({"nod", std::nullopt, true});
  EXPECT_NE(first, second);
  EXPECT_EQ(svc.session(first).state, SessionState::kStopped);
  EXPECT_EQ(svc.session(second).state, SessionState::kPlaying);
  EXPECT_EQ(svc.active_session(), second);
  const auto events = drain(*sub);
  ASSERT_FALSE(events.empty());
  EXPECT_EQ(events.back().status, "stopped");
  EXPECT_TRUE(sub->finished());
}

TEST(ServiceTest, StopIsIdempotentAndFreezesPose) {
  PlaybackService svc;
  const std::string id = svc.play({"greet_combo", std::nullopt, false});
  auto sub = svc.subscribe(id);
  svc.advance(30);
  const SessionInfo info = svc.stop(id);
  EXPECT_EQ(info.state, SessionState::kStopped);
  const JointState frozen = svc.pose();
  const auto events = drain(*sub);
  ASSERT_FALSE(events.empty());
  EXPECT_EQ(events.back().status, "stopped");
  EXPECT_EQ(events.back().pose, frozen);
  EXPECT_TRUE(sub->finished());

  const JointState ctrl_at_stop = *svc.controller_pose();
  svc.advance(100);
  EXPECT_EQ(svc.pose(), frozen);
  // The controller received STOP with the stop acknowledgment and holds.
  EXPECT_EQ(*svc.controller_pose(), ctrl_at_stop);
  EXPECT_EQ(svc.stop(id).state, SessionState::kStopped);
  EXPECT_THROW(svc.stop("s999"), NotFound);
}

TEST(ServiceTest, LateSubscriberGetsOneSnapshot) {
  PlaybackService svc;
  const std::string id = svc.play({"ear_fold", std::nullopt, false});
  svc.advance(1000);
  EXPECT_EQ(svc.session(id).state, SessionState::kIdle);
  auto sub = svc.subscribe(id);
  const auto events = drain(*sub);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].status, "idle");
  EXPECT_EQ(events[0].pose, svc.pose());
  EXPECT_TRUE(sub->finished());
  EXPECT_THROW(svc.subscribe("nope"), NotFound);
}

TEST(ServiceTest, LinkFailureSurfacesAsErrorEvents) {
  ServiceOptions o;
  o.faults.drop_rate = 1.0;
  PlaybackService svc(o);
  const std::string id = svc.play({"nod", std::nullopt, false});
  auto sub = svc.subscribe(id);
  svc.advance(200);
  const auto events = drain(*sub);
  int errors = 0;
  for (const TelemetryEvent& e : events) {
    if (e.status == "error") {
      ++errors;
      EXPECT_NE(e.error.find("failed after 3 attempts"), std::string::npos) << e.error;
    }
  }
  EXPECT_GT(errors, 0);
  EXPECT_FALSE(svc.session(id).errors.empty());
  // The engine still plays; only the controller misses the commands.
  EXPECT_EQ(*svc.controller_pose(), neutral_pose());
}

TEST(ServiceTest, WallClockRunsOnItsOwn) {
  ServiceOptions o;
  o.clock = ClockMode::kWall;
  o.tick_ms = 5;
  PlaybackService svc(o);
  EXPECT_THROW(svc.advance(1), WrongClockMode);
  svc.start();
  const std::string id = svc.play({"ear_perk", std::nullopt, false});
  auto sub = svc.subscribe(id);
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(20);
  while (!sub->finished() && std::chrono::steady_clock::now() < deadline) sub->next(100);
  EXPECT_TRUE(sub->finished());
  EXPECT_EQ(svc.session(id).state, SessionState::kIdle);
  svc.shutdown();
}

TEST(ServiceTest, ValidateReportsWithoutPlaying) {
  PlaybackService svc;
  EXPECT_TRUE(svc.validate(export_sequence(*load_presets().find("nod"))).ok());
  EXPECT_FALSE(svc.validate(overlapping_document()).ok());
  EXPECT_THROW(svc.validate("[1,2"), SequenceParseError);
  EXPECT_FALSE(svc.active_session().has_value());
}

TEST(ServiceTest, SerialTargetThatCannotOpenThrows) {
  ServiceOptions o;
  o.target.kind = ControllerTarget::Kind::kSerial;
  o.target.port = "/nonexistent/tty";
  EXPECT_ANY_THROW(PlaybackService{o});
  EXPECT_EQ(o.target.describe(), "serial:/nonexistent/tty@115200");
}

}  // namespace
}  // namespace mojikit
