// Relay-to-controller wire protocol.
//
// Every frame is one ASCII line:
//
//   M <seq> <joint> <decideg> <ms> *<ck>\n    move one joint
//   S <seq> *<ck>\n                           stop all joints
//   P <seq> *<ck>\n                           ping
//
// and the controller answers each line with "A <seq>\n" (ack) or
// "N <seq>\n" (nak). <ck> is the XOR of every byte strictly between the
// leading letter and '*', written as two lowercase hex digits. Integers are
// plain decimal without leading zeros or '+'.

#ifndef MOJIKIT_PROTOCOL_H_
#define MOJIKIT_PROTOCOL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mojikit/kinematics.h"
#include "mojikit/sequence.h"
#include "mojikit/units.h"

namespace mojikit {

inline constexpr Millis kMaxMotionMs = 65535;

struct MoveCommand {
  std::uint8_t joint = 0;         // 0..15
  std::int32_t target_decideg = 0;
  std::int32_t motion_ms = 0;
  bool operator==(const MoveCommand&) const = default;
};
struct StopCommand {
  bool operator==(const StopCommand&) const = default;
};
struct PingCommand {
  bool operator==(const PingCommand&) const = default;
};

using Command = std::variant<MoveCommand, StopCommand, PingCommand>;

struct Frame {
  std::uint8_t seq = 0;
  Command command;
  bool operator==(const Frame&) const = default;
};

// True when every field is in range (joint index, target within 10x the
// joint's limits, motion time within [0, kMaxMotionMs]).
bool frame_valid(const Frame& frame);

std::uint8_t checksum(std::string_view payload);

// Throws DomainError for an invalid frame.
std::string encode_frame(const Frame& frame);

enum class DecodeError { kParseError, kChecksumMismatch, kRangeError };

std::string_view to_string(DecodeError e);

struct DecodeResult {
  std::optional<Frame> frame;
  std::optional<DecodeError> error;
  // Sequence number when one could be read, even from a bad frame.
  std::optional<std::uint8_t> seq_hint;

  bool ok() const { return frame.has_value(); }
};

// Decodes exactly one newline-terminated line. Total over arbitrary bytes.
DecodeResult decode_frame(std::string_view bytes);

struct Reply {
  bool ack = false;  // false for nak
  std::uint8_t seq = 0;
  bool operator==(const Reply&) const = default;
};

std::string encode_reply(const Reply& reply);
// Accepts the line with or without its trailing newline.
std::optional<Reply> decode_reply(std::string_view line);

struct LinkConfig {
  std::int64_t baud = 115200;
  Millis ack_timeout_ms = 200;
  int max_retries = 2;

  int max_attempts() const { return 1 + max_retries; }
  // Throws DomainError unless every field is positive.
  void check() const;
};

// Stop-and-wait state machine for one frame: transmit, wait for the ack
// matching its seq, retransmit on timeout or matching nak, give up after
// 1 + max_retries attempts. Drivers own the clock and the link.
class ReliableSender {
 public:
  enum class Step { kAwait, kRetransmit, kDelivered, kFailed };

  explicit ReliableSender(LinkConfig config);

  // Starts a new exchange; returns the bytes for the first attempt.
  const std::string& begin(const Frame& frame);

  Step on_reply(std::string_view line);
  Step on_timeout();

  const std::string& wire() const { return wire_; }
  const Frame& frame() const { return frame_; }
  int attempts() const { return attempts_; }

 private:
  Step retry_or_fail();

  LinkConfig config_;
  Frame frame_;
  std::string wire_;
  int attempts_ = 0;
  bool done_ = true;
};

// A byte link towards a controller.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual bool is_open() const = 0;
  virtual void write(std::string_view bytes, Millis now_ms) = 0;
  // Next complete reply line available by `now_ms`. Links with real latency
  // may block for up to `wait_ms` waiting for one.
  virtual std::optional<std::string> read_line(Millis now_ms, Millis wait_ms) = 0;
  // Earliest time a reply may become available, when the link can tell.
  virtual std::optional<Millis> next_reply_time() const { return std::nullopt; }
};

enum class SendStatus { kDelivered, kFailed, kLinkClosed };

std::string_view to_string(SendStatus status);

struct SendResult {
  SendStatus status;
  int attempts;
  Millis finished_ms;
};

// Blocking stop-and-wait delivery of one frame starting at `now_ms`.
SendResult send_reliable(Transport& link, const Frame& frame,
                         const LinkConfig& config = {}, Millis now_ms = 0);

// A command tagged with its offset on the sequence timeline.
struct TimedCommand {
  Millis at_ms;
  Command command;
  bool operator==(const TimedCommand&) const = default;
};

// Two MOVEs per block (F axis then R axis) at start_ms + delay_ms with the
// block's effective motion time, sorted by time, then joint index. Throws
// SequenceValidationError for an invalid sequence.
std::vector<TimedCommand> compile_sequence_to_commands(const Sequence& seq);

}  // namespace mojikit

#endif  // MOJIKIT_PROTOCOL_H_
