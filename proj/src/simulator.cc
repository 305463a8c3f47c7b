#include "mojikit/simulator.h"

#include <algorithm>
#include <cmath>

#include "mojikit/executor.h"
#include "mojikit/relay.h"
#include "mojikit/trajectory.h"

namespace mojikit {
namespace {

// Longest line the controller buffers while waiting for a newline.
constexpr std::size_t kMaxLineBytes = 64;

}  // namespace

std::string VirtualController::feed_frame(std::string_view bytes, Millis now_ms) {
  advance_to(now_ms);
  partial_.append(bytes);
  std::string out;
  std::size_t nl;
  while ((nl = partial_.find('\n')) != std::string::npos) {
    const std::string line = partial_.substr(0, nl + 1);
    partial_.erase(0, nl + 1);
    out += handle_line(line);
  }
  if (partial_.size() > kMaxLineBytes) {
    // Overrun: the line can never be valid, so answer it now.
    out += handle_line(partial_);
    partial_.clear();
  }
  return out;
}

std::string VirtualController::handle_line(std::string_view line) {
  rx_log_.emplace_back(line);
  const DecodeResult r = decode_frame(line);
  std::string reply;
  if (!r.ok()) {
    reply = encode_reply({false, r.seq_hint.value_or(0)});
  } else if (last_seen_seq_ == r.frame->seq) {
    reply = encode_reply({true, r.frame->seq});
  } else {
    const Frame& f = *r.frame;
    if (const auto* m = std::get_if<MoveCommand>(&f.command)) {
      const double target = m->target_decideg / 10.0;
      if (m->motion_ms == 0) {
        pose_.set(m->joint, target);
        motions_[m->joint].reset();
      } else {
        motions_[m->joint] = JointMotion{pose_.angle(m->joint), target, now_, m->motion_ms};
      }
    } else if (std::holds_alternative<StopCommand>(f.command)) {
      motions_.fill(std::nullopt);
    }
    last_seen_seq_ = f.seq;
    ++applied_;
    reply = encode_reply({true, f.seq});
  }
  tx_log_.push_back(reply);
  return reply;
}

double VirtualController::joint_angle_at(std::size_t joint, Millis t) const {
  const JointMotion& m = *motions_[joint];
  if (t >= m.start_ms + m.motion_ms) return m.to_deg;
  const double u = static_cast<double>(t - m.start_ms) / static_cast<double>(m.motion_ms);
  return m.from_deg + (m.to_deg - m.from_deg) * ease(u);
}

const JointState& VirtualController::advance(Millis dt_ms) {
  if (dt_ms <= 0) throw DomainError("advance: dt_ms must be positive");
  return advance_to(now_ + dt_ms);
}

const JointState& VirtualController::advance_to(Millis t_ms) {
  if (t_ms <= now_) return pose_;
  now_ = t_ms;
  for (std::size_t j = 0; j < kJointCount; ++j) {
    if (!motions_[j]) continue;
    pose_.set(j, joint_angle_at(j, now_));
    if (now_ >= motions_[j]->start_ms + motions_[j]->motion_ms) motions_[j].reset();
  }
  return pose_;
}

void FaultProfile::check() const {
  for (double p : {drop_rate, corrupt_rate, ack_drop_rate}) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("fault rates must lie in [0, 1]");
  }
}

SimulatedTransport::SimulatedTransport(VirtualController& controller,
                                       FaultProfile faults, LinkConfig link,
                                       Millis tick_ms)
    : controller_(controller),
      faults_(faults),
      rng_(faults.rng_seed),
      rate_bytes_per_s_(static_cast<std::size_t>(link.baud / 10)) {
  faults_.check();
  link.check();
  if (tick_ms <= 0) throw DomainError("tick_ms must be positive");
  capacity_bytes_ = static_cast<double>(rate_bytes_per_s_) * static_cast<double>(tick_ms) / 1000.0;
  credit_bytes_ = capacity_bytes_;
}

double SimulatedTransport::draw() {
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

Millis SimulatedTransport::reserve(std::size_t n, Millis now_ms) {
  const double rate_per_ms = static_cast<double>(rate_bytes_per_s_) / 1000.0;
  if (now_ms > credit_ms_) {
    credit_bytes_ = std::min(capacity_bytes_,
                             credit_bytes_ + static_cast<double>(now_ms - credit_ms_) * rate_per_ms);
    credit_ms_ = now_ms;
  }
  credit_bytes_ -= static_cast<double>(n);
  Millis at = now_ms;
  if (credit_bytes_ < 0) {
    at = now_ms + static_cast<Millis>(std::ceil(-credit_bytes_ / rate_per_ms));
  }
  if (!in_transit_.empty()) at = std::max(at, in_transit_.back().deliver_ms);
  return at;
}

void SimulatedTransport::write(std::string_view bytes, Millis now_ms) {
  if (!open_) return;
  ++transmissions_;
  const double drop = draw();
  const double corrupt = draw();
  const std::uint64_t flip = rng_();
  const Millis at = reserve(bytes.size(), now_ms);
  std::string line(bytes);
  if (!line.empty() && line.back() == '\n') line.pop_back();
  const std::string stamp = std::to_string(now_ms) + " ";

  if (drop < faults_.drop_rate) {
    trace_.push_back(stamp + "dropped " + line);
    return;
  }
  std::string payload(bytes);
  if (corrupt < faults_.corrupt_rate && payload.size() > 2) {
    const std::size_t pos = 1 + flip % (payload.size() - 2);
    payload[pos] = static_cast<char>(payload[pos] ^ static_cast<char>(1 + (flip >> 32) % 255));
    trace_.push_back(stamp + "corrupted " + line);
  } else {
    trace_.push_back(stamp + "sent " + line);
  }
  in_transit_.push_back({at, std::move(payload)});
  pump(now_ms);
}

void SimulatedTransport::deliver(const InTransit& frame) {
  const Millis at = std::max(frame.deliver_ms, controller_.now_ms());
  const std::string reply = controller_.feed_frame(frame.bytes, at);
  std::size_t pos = 0;
  while (pos < reply.size()) {
    const std::size_t nl = reply.find('\n', pos);
    std::string line = reply.substr(pos, nl - pos + 1);
    pos = nl + 1;
    if (draw() < faults_.ack_drop_rate) {
      line.pop_back();
      trace_.push_back(std::to_string(at) + " ack-dropped " + line);
      continue;
    }
    replies_.push_back({at, std::move(line)});
  }
}

void SimulatedTransport::pump(Millis now_ms) {
  while (!in_transit_.empty() && in_transit_.front().deliver_ms <= now_ms) {
    const InTransit frame = std::move(in_transit_.front());
    in_transit_.pop_front();
    deliver(frame);
  }
}

std::optional<std::string> SimulatedTransport::read_line(Millis now_ms, Millis) {
  pump(now_ms);
  if (replies_.empty() || replies_.front().at_ms > now_ms) return std::nullopt;
  std::string line = std::move(replies_.front().line);
  replies_.pop_front();
  return line;
}

std::optional<Millis> SimulatedTransport::next_reply_time() const {
  std::optional<Millis> t;
  if (!replies_.empty()) t = replies_.front().at_ms;
  if (!in_transit_.empty()) {
    t = t ? std::min(*t, in_transit_.front().deliver_ms) : in_transit_.front().deliver_ms;
  }
  return t;
}

double mirror_equivalence_check(const Sequence& seq, const MirrorOptions& options) {
  Engine engine;
  VirtualController controller;
  SimulatedTransport link(controller, options.faults, options.link, options.tick_ms);
  Relay relay(link, options.link);

  engine.enqueue(seq);
  for (const TimedCommand& c : compile_sequence_to_commands(seq)) {
    relay.submit(c.at_ms, c.command);
  }

  auto divergence = [&] {
    double worst = 0.0;
    for (std::size_t j = 0; j < kJointCount; ++j) {
      worst = std::max(worst, std::abs(engine.pose().angle(j) - controller.pose().angle(j)));
    }
    return worst;
  };

  double worst = divergence();
  const Millis end = seq.total_duration_ms() + options.tail_ms;
  for (Millis t = options.tick_ms; t <= end; t += options.tick_ms) {
    engine.tick(options.tick_ms);
    relay.run_until(t);
    link.pump(t);
    controller.advance_to(t);
    worst = std::max(worst, divergence());
  }
  return worst;
}

}  // namespace mojikit
