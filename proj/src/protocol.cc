#include "mojikit/protocol.h"

#include <algorithm>
#include <cstdio>

#include "mojikit/format.h"
#include "mojikit/trajectory.h"

namespace mojikit {
namespace {

constexpr char kHex[] = "0123456789abcdef";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

// Canonical decimal integer: "0", "[1-9][0-9]*", or '-' followed by a
// non-zero canonical magnitude. At most 10 digits.
std::optional<std::int64_t> parse_int(std::string_view tok) {
  bool neg = false;
  if (!tok.empty() && tok.front() == '-') {
    neg = true;
    tok.remove_prefix(1);
  }
  if (tok.empty() || tok.size() > 10) return std::nullopt;
  if (tok.size() > 1 && tok.front() == '0') return std::nullopt;
  std::int64_t v = 0;
  for (char c : tok) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  if (neg && v == 0) return std::nullopt;
  return neg ? -v : v;
}

DecodeResult error(DecodeError e, std::optional<std::uint8_t> seq = std::nullopt) {
  return DecodeResult{std::nullopt, e, seq};
}

std::string frame_body(const Frame& f) {
  std::string body = " " + std::to_string(f.seq) + " ";
  if (const auto* m = std::get_if<MoveCommand>(&f.command)) {
    body += std::to_string(m->joint) + " " + std::to_string(m->target_decideg) +
            " " + std::to_string(m->motion_ms) + " ";
  }
  return body;
}

char frame_letter(const Command& c) {
  if (std::holds_alternative<MoveCommand>(c)) return 'M';
  if (std::holds_alternative<StopCommand>(c)) return 'S';
  return 'P';
}

}  // namespace

bool frame_valid(const Frame& frame) {
  const auto* m = std::get_if<MoveCommand>(&frame.command);
  if (m == nullptr) return true;
  if (m->joint >= kJointCount) return false;
  const JointSpec& spec = joint_spec(m->joint);
  const auto lo = static_cast<std::int64_t>(spec.min_deg * 10);
  const auto hi = static_cast<std::int64_t>(spec.max_deg * 10);
  return m->target_decideg >= lo && m->target_decideg <= hi &&
         m->motion_ms >= 0 && m->motion_ms <= kMaxMotionMs;
}

std::uint8_t checksum(std::string_view payload) {
  std::uint8_t ck = 0;
  for (char c : payload) ck ^= static_cast<std::uint8_t>(c);
  return ck;
}

std::string encode_frame(const Frame& frame) {
  if (!frame_valid(frame)) throw DomainError("encode_frame: frame fields out of range");
  const std::string body = frame_body(frame);
  const std::uint8_t ck = checksum(body);
  std::string out(1, frame_letter(frame.command));
  out += body;
  out += '*';
  out += kHex[ck >> 4];
  out += kHex[ck & 0xf];
  out += '\n';
  return out;
}

std::string_view to_string(DecodeError e) {
  switch (e) {
    case DecodeError::kParseError: return "parse_error";
    case DecodeError::kChecksumMismatch: return "checksum_mismatch";
    case DecodeError::kRangeError: return "range_error";
  }
  return "unknown";
}

DecodeResult decode_frame(std::string_view bytes) {
  if (bytes.size() < 7 || bytes.back() != '\n') return error(DecodeError::kParseError);
  const std::string_view line = bytes.substr(0, bytes.size() - 1);
  const std::size_t star = line.find('*');
  if (star == std::string_view::npos || star + 3 != line.size()) {
    return error(DecodeError::kParseError);
  }
  const char letter = line[0];
  const std::string_view payload = line.substr(1, star - 1);
  if (payload.size() < 3 || payload.front() != ' ' || payload.back() != ' ') {
    return error(DecodeError::kParseError);
  }

  std::vector<std::string_view> tokens;
  std::size_t pos = 1;
  while (pos < payload.size()) {
    const std::size_t space = payload.find(' ', pos);
    if (space == pos) return error(DecodeError::kParseError);
    tokens.push_back(payload.substr(pos, space - pos));
    pos = space + 1;
  }

  std::size_t expected = 0;
  switch (letter) {
    case 'M': expected = 4; break;
    case 'S':
    case 'P': expected = 1; break;
    default: return error(DecodeError::kParseError);
  }
  if (tokens.size() != expected) return error(DecodeError::kParseError);

  std::array<std::int64_t, 4> values{};
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto v = parse_int(tokens[i]);
    if (!v) return error(DecodeError::kParseError);
    values[i] = *v;
  }
  std::optional<std::uint8_t> seq_hint;
  if (values[0] >= 0 && values[0] <= 255) seq_hint = static_cast<std::uint8_t>(values[0]);

  const int hi = hex_value(line[star + 1]);
  const int lo = hex_value(line[star + 2]);
  if (hi < 0 || lo < 0) return error(DecodeError::kParseError, seq_hint);
  if (checksum(payload) != static_cast<std::uint8_t>(hi * 16 + lo)) {
    return error(DecodeError::kChecksumMismatch, seq_hint);
  }

  if (!seq_hint) return error(DecodeError::kRangeError);
  Frame frame{*seq_hint, PingCommand{}};
  if (letter == 'S') frame.command = StopCommand{};
  if (letter == 'M') {
    if (values[1] < 0 || values[1] >= static_cast<std::int64_t>(kJointCount) ||
        values[3] < 0 || values[3] > kMaxMotionMs) {
      return error(DecodeError::kRangeError, seq_hint);
    }
    const auto& spec = joint_spec(static_cast<std::size_t>(values[1]));
    if (values[2] < static_cast<std::int64_t>(spec.min_deg * 10) ||
        values[2] > static_cast<std::int64_t>(spec.max_deg * 10)) {
      return error(DecodeError::kRangeError, seq_hint);
    }
    frame.command = MoveCommand{static_cast<std::uint8_t>(values[1]),
                                static_cast<std::int32_t>(values[2]),
                                static_cast<std::int32_t>(values[3])};
  }
  return DecodeResult{frame, std::nullopt, seq_hint};
}

std::string encode_reply(const Reply& reply) {
  return std::string(reply.ack ? "A " : "N ") + std::to_string(reply.seq) + "\n";
}

std::optional<Reply> decode_reply(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  if (line.size() < 3 || line[1] != ' ' || (line[0] != 'A' && line[0] != 'N')) {
    return std::nullopt;
  }
  const auto v = parse_int(line.substr(2));
  if (!v || *v < 0 || *v > 255) return std::nullopt;
  return Reply{line[0] == 'A', static_cast<std::uint8_t>(*v)};
}

void LinkConfig::check() const {
  if (baud <= 0 || ack_timeout_ms <= 0 || max_retries <= 0) {
    throw DomainError("link configuration values must be positive");
  }
}

ReliableSender::ReliableSender(LinkConfig config) : config_(config) {
  config_.check();
}

const std::string& ReliableSender::begin(const Frame& frame) {
  frame_ = frame;
  wire_ = encode_frame(frame);
  attempts_ = 1;
  done_ = false;
  return wire_;
}

ReliableSender::Step ReliableSender::on_reply(std::string_view line) {
  if (done_) return Step::kAwait;
  const auto reply = decode_reply(line);
  if (!reply || reply->seq != frame_.seq) return Step::kAwait;
  if (reply->ack) {
    done_ = true;
    return Step::kDelivered;
  }
  return retry_or_fail();
}

ReliableSender::Step ReliableSender::on_timeout() {
  if (done_) return Step::kAwait;
  return retry_or_fail();
}

ReliableSender::Step ReliableSender::retry_or_fail() {
  if (attempts_ < config_.max_attempts()) {
    ++attempts_;
    return Step::kRetransmit;
  }
  done_ = true;
  return Step::kFailed;
}

std::string_view to_string(SendStatus status) {
  switch (status) {
    case SendStatus::kDelivered: return "delivered";
    case SendStatus::kFailed: return "failed";
    case SendStatus::kLinkClosed: return "link_closed";
  }
  return "unknown";
}

SendResult send_reliable(Transport& link, const Frame& frame,
                         const LinkConfig& config, Millis now_ms) {
  if (!link.is_open()) return {SendStatus::kLinkClosed, 0, now_ms};
  ReliableSender sender(config);
  Millis now = now_ms;
  link.write(sender.begin(frame), now);
  Millis deadline = now + config.ack_timeout_ms;
  while (true) {
    if (!link.is_open()) return {SendStatus::kLinkClosed, sender.attempts(), now};
    if (const auto t = link.next_reply_time(); t && *t <= deadline) {
      now = std::max(now, *t);
    }
    const auto line = link.read_line(now, deadline - now);
    ReliableSender::Step step;
    if (line) {
      step = sender.on_reply(*line);
    } else {
      now = deadline;
      step = sender.on_timeout();
    }
    switch (step) {
      case ReliableSender::Step::kAwait:
        break;
      case ReliableSender::Step::kRetransmit:
        if (!link.is_open()) return {SendStatus::kLinkClosed, sender.attempts(), now};
        link.write(sender.wire(), now);
        deadline = now + config.ack_timeout_ms;
        break;
      case ReliableSender::Step::kDelivered:
        return {SendStatus::kDelivered, sender.attempts(), now};
      case ReliableSender::Step::kFailed:
        return {SendStatus::kFailed, sender.attempts(), now};
    }
  }
}

std::vector<TimedCommand> compile_sequence_to_commands(const Sequence& seq) {
  if (ValidationReport r = validate_sequence(seq); !r.ok()) {
    throw SequenceValidationError(std::move(r));
  }
  std::vector<TimedCommand> out;
  out.reserve(2 * seq.block_count());
  for (const Track& track : seq.tracks) {
    for (const MotionBlock& b : track.blocks) {
      const Millis at = b.start_ms + b.delay_ms;
      const auto m = static_cast<std::int32_t>(effective_motion_ms(b));
      for (AxisFamily fam : {AxisFamily::kF, AxisFamily::kR}) {
        const double deg = fam == AxisFamily::kF ? b.f_deg : b.r_deg;
        out.push_back({at, MoveCommand{static_cast<std::uint8_t>(joint_index(b.structure, fam)),
                                       static_cast<std::int32_t>(to_tenths(deg)), m}});
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const TimedCommand& a, const TimedCommand& b) {
    if (a.at_ms != b.at_ms) return a.at_ms < b.at_ms;
    return std::get<MoveCommand>(a.command).joint < std::get<MoveCommand>(b.command).joint;
  });
  return out;
}

}  // namespace mojikit
