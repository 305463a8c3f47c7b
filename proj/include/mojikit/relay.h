// The relay between studio-side commands and a controller link.
//
// Commands are queued with a due time and sent one at a time with the
// stop-and-wait rules of ReliableSender. Unlike send_reliable, the relay never
// blocks: run_until(t) handles every send, reply and timeout due by t, so it
// can share a virtual clock with the engine and the simulated controller.

#ifndef MOJIKIT_RELAY_H_
#define MOJIKIT_RELAY_H_

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "mojikit/protocol.h"

namespace mojikit {

struct RelayOutcome {
  Frame frame;
  Millis due_ms;
  Millis finished_ms;
  SendStatus status;
  int attempts;
};

class Relay {
 public:
  Relay(Transport& link, LinkConfig config);

  // Queues a command for transmission at or after `due_ms`.
  void submit(Millis due_ms, const Command& command);
  // Drops queued commands; an exchange already in flight still completes.
  void clear_pending();

  void run_until(Millis t_ms);

  bool idle() const { return !in_flight_ && pending_.empty(); }
  const std::vector<RelayOutcome>& outcomes() const { return outcomes_; }
  int total_attempts() const { return total_attempts_; }

 private:
  struct InFlight {
    ReliableSender sender;
    Millis due_ms;
    Millis deadline_ms;
  };
  struct Pending {
    Millis due_ms;
    Command command;
  };

  void handle(ReliableSender::Step step, Millis now);
  void finish(SendStatus status, Millis now);

  Transport& link_;
  LinkConfig config_;
  std::deque<Pending> pending_;
  std::optional<InFlight> in_flight_;
  std::vector<RelayOutcome> outcomes_;
  Millis last_event_ms_ = 0;
  std::uint8_t next_seq_ = 0;
  int total_attempts_ = 0;
};

}  // namespace mojikit

#endif  // MOJIKIT_RELAY_H_
