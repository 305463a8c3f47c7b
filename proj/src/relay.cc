#include "mojikit/relay.h"

#include <algorithm>

namespace mojikit {

Relay::Relay(Transport& link, LinkConfig config) : link_(link), config_(config) {
  config_.check();
}

void Relay::submit(Millis due_ms, const Command& command) {
  pending_.push_back({due_ms, command});
}

void Relay::clear_pending() { pending_.clear(); }

void Relay::finish(SendStatus status, Millis now) {
  outcomes_.push_back({in_flight_->sender.frame(), in_flight_->due_ms, now, status,
                       in_flight_->sender.attempts()});
  in_flight_.reset();
  last_event_ms_ = now;
}

void Relay::handle(ReliableSender::Step step, Millis now) {
  switch (step) {
    case ReliableSender::Step::kAwait:
      break;
    case ReliableSender::Step::kRetransmit:
      if (!link_.is_open()) {
        finish(SendStatus::kLinkClosed, now);
        break;
      }
      ++total_attempts_;
      link_.write(in_flight_->sender.wire(), now);
      in_flight_->deadline_ms = now + config_.ack_timeout_ms;
      break;
    case ReliableSender::Step::kDelivered:
      finish(SendStatus::kDelivered, now);
      break;
    case ReliableSender::Step::kFailed:
      finish(SendStatus::kFailed, now);
      break;
  }
}

void Relay::run_until(Millis t_ms) {
  while (true) {
    if (in_flight_) {
      const auto reply_at = link_.next_reply_time();
      const Millis deadline = in_flight_->deadline_ms;
      if (reply_at && *reply_at <= std::min(deadline, t_ms)) {
        const Millis now = std::max(*reply_at, last_event_ms_);
        last_event_ms_ = now;
        if (auto line = link_.read_line(now, 0)) {
          handle(in_flight_->sender.on_reply(*line), now);
          continue;
        }
      }
      if (deadline <= t_ms) {
        // A real link may still hold a reply that arrived before the deadline.
        if (!reply_at) {
          if (auto line = link_.read_line(deadline, 0)) {
            handle(in_flight_->sender.on_reply(*line), deadline);
            continue;
          }
        }
        last_event_ms_ = deadline;
        handle(in_flight_->sender.on_timeout(), deadline);
        continue;
      }
      if (!reply_at) {
        if (auto line = link_.read_line(t_ms, 0)) {
          handle(in_flight_->sender.on_reply(*line), t_ms);
          continue;
        }
      }
      return;
    }

    if (pending_.empty() || pending_.front().due_ms > t_ms) return;
    const Pending next = pending_.front();
    pending_.pop_front();
    const Millis now = std::max(next.due_ms, last_event_ms_);
    last_event_ms_ = now;
    if (!link_.is_open()) {
      Frame frame{next_seq_++, next.command};
      outcomes_.push_back({frame, next.due_ms, now, SendStatus::kLinkClosed, 0});
      continue;
    }
    in_flight_.emplace(InFlight{ReliableSender(config_), next.due_ms,
                                now + config_.ack_timeout_ms});
    const std::string& wire = in_flight_->sender.begin(Frame{next_seq_++, next.command});
    ++total_attempts_;
    link_.write(wire, now);
  }
}

}  // namespace mojikit
