#include "mojikit/sequence.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "mojikit/format.h"

namespace mojikit {
namespace {

using nlohmann::json;

std::string block_label(StructureId s, std::size_t index) {
  return std::string(to_string(s)) + "[" + std::to_string(index) + "]";
}

void check_angle(const MotionBlock& b, AxisFamily family, double value,
                 std::size_t index, std::vector<Violation>& out) {
  const auto [lo, hi] = joint_range(b.structure, family);
  if (std::isfinite(value) && value >= lo && value <= hi) return;
  const AxisId axis = axis_for(b.structure, family);
  out.push_back({ViolationKind::kAngleRange, b.structure, {index},
                 block_label(b.structure, index) + ": " +
                     (family == AxisFamily::kF ? "f_deg " : "r_deg ") +
                     format_deg(value) + " outside " +
                     std::string(to_string(axis)) + " range [" +
                     format_deg(lo) + ", " + format_deg(hi) + "]"});
}

bool intervals_overlap(const MotionBlock& a, const MotionBlock& b) {
  return a.start_ms < b.end_ms() && b.start_ms < a.end_ms();
}

// --- document writing -----------------------------------------------------

void write_block(std::string& out, const MotionBlock& b) {
  out += "{\"f_deg\": ";
  out += format_deg(b.f_deg);
  out += ", \"r_deg\": ";
  out += format_deg(b.r_deg);
  out += ", \"speed\": ";
  out += std::to_string(b.speed);
  out += ", \"delay_ms\": ";
  out += std::to_string(b.delay_ms);
  out += ", \"start_ms\": ";
  out += std::to_string(b.start_ms);
  out += ", \"duration_ms\": ";
  out += std::to_string(b.duration_ms);
  out += "}";
}

// --- document reading -----------------------------------------------------

[[noreturn]] void fail(const std::string& what) {
  throw SequenceParseError(what);
}

void require_keys(const json& obj, std::initializer_list<std::string_view> keys,
                  const std::string& where) {
  if (!obj.is_object()) fail(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
      fail(where + ": unknown key \"" + it.key() + "\"");
    }
  }
  for (std::string_view k : keys) {
    if (!obj.contains(std::string(k))) {
      fail(where + ": missing key \"" + std::string(k) + "\"");
    }
  }
}

std::int64_t read_integer(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      fail(where + ": integer out of range");
    }
    return static_cast<std::int64_t>(u);
  }
  if (v.is_number_integer()) return v.get<std::int64_t>();
  fail(where + ": expected an integer");
}

double read_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where + ": expected a number");
  return v.get<double>();
}

MotionBlock read_block(const json& j, StructureId s, const std::string& where) {
  require_keys(j,
               {"f_deg", "r_deg", "speed", "delay_ms", "start_ms", "duration_ms"},
               where);
  MotionBlock b;
  b.structure = s;
  b.f_deg = read_number(j["f_deg"], where + ".f_deg");
  b.r_deg = read_number(j["r_deg"], where + ".r_deg");
  const std::int64_t speed = read_integer(j["speed"], where + ".speed");
  if (speed < std::numeric_limits<int>::min() ||
      speed > std::numeric_limits<int>::max()) {
    fail(where + ".speed: integer out of range");
  }
  b.speed = static_cast<int>(speed);
  b.delay_ms = read_integer(j["delay_ms"], where + ".delay_ms");
  b.start_ms = read_integer(j["start_ms"], where + ".start_ms");
  b.duration_ms = read_integer(j["duration_ms"], where + ".duration_ms");
  return b;
}

}  // namespace

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kAngleRange: return "angle_range";
    case ViolationKind::kSpeedRange: return "speed_range";
    case ViolationKind::kDelayNotBelowDuration: return "delay_not_below_duration";
    case ViolationKind::kNegativeTime: return "negative_time";
    case ViolationKind::kNonPositiveDuration: return "non_positive_duration";
    case ViolationKind::kOverlap: return "overlap";
    case ViolationKind::kUnsorted: return "unsorted";
    case ViolationKind::kStructureMismatch: return "structure_mismatch";
    case ViolationKind::kDuplicateTrack: return "duplicate_track";
    case ViolationKind::kTrackOrder: return "track_order";
  }
  return "unknown";
}

Millis Sequence::total_duration_ms() const {
  Millis total = 0;
  for (const Track& t : tracks) {
    for (const MotionBlock& b : t.blocks) total = std::max(total, b.end_ms());
  }
  return total;
}

std::size_t Sequence::block_count() const {
  std::size_t n = 0;
  for (const Track& t : tracks) n += t.blocks.size();
  return n;
}

const Track* Sequence::find_track(StructureId s) const {
  for (const Track& t : tracks) {
    if (t.structure == s) return &t;
  }
  return nullptr;
}

std::vector<Violation> check_block(const MotionBlock& b, std::size_t index) {
  std::vector<Violation> out;
  check_angle(b, AxisFamily::kF, b.f_deg, index, out);
  check_angle(b, AxisFamily::kR, b.r_deg, index, out);
  const std::string label = block_label(b.structure, index);
  if (b.speed < kMinSpeed || b.speed > kMaxSpeed) {
    out.push_back({ViolationKind::kSpeedRange, b.structure, {index},
                   label + ": speed " + std::to_string(b.speed) +
                       " outside [1, 5]"});
  }
  if (b.start_ms < 0 || b.delay_ms < 0) {
    out.push_back({ViolationKind::kNegativeTime, b.structure, {index},
                   label + ": start_ms and delay_ms must be >= 0"});
  }
  if (b.duration_ms <= 0) {
    out.push_back({ViolationKind::kNonPositiveDuration, b.structure, {index},
                   label + ": duration_ms must be > 0"});
  } else if (b.delay_ms >= b.duration_ms) {
    out.push_back({ViolationKind::kDelayNotBelowDuration, b.structure, {index},
                   label + ": delay_ms " + std::to_string(b.delay_ms) +
                       " must be below duration_ms " +
                       std::to_string(b.duration_ms)});
  }
  return out;
}

ValidationReport validate_sequence(const Sequence& seq) {
  ValidationReport report;
  auto& out = report.violations;
  std::array<bool, kStructureCount> seen{};
  std::optional<std::size_t> prev_ordinal;

  for (const Track& track : seq.tracks) {
    const std::size_t ord = structure_ordinal(track.structure);
    if (seen[ord]) {
      out.push_back({ViolationKind::kDuplicateTrack, track.structure, {},
                     "more than one track for " +
                         std::string(to_string(track.structure))});
    } else if (prev_ordinal && ord < *prev_ordinal) {
      out.push_back({ViolationKind::kTrackOrder, track.structure, {},
                     "track " + std::string(to_string(track.structure)) +
                         " is out of structure order"});
    }
    seen[ord] = true;
    prev_ordinal = ord;

    const auto& blocks = track.blocks;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const MotionBlock& b = blocks[i];
      if (b.structure != track.structure) {
        out.push_back({ViolationKind::kStructureMismatch, track.structure, {i},
                       block_label(track.structure, i) + ": block targets " +
                           std::string(to_string(b.structure))});
        continue;
      }
      auto field = check_block(b, i);
      out.insert(out.end(), field.begin(), field.end());
      if (i > 0 && b.start_ms < blocks[i - 1].start_ms) {
        out.push_back({ViolationKind::kUnsorted, track.structure, {i - 1, i},
                       block_label(track.structure, i) +
                           ": starts before the preceding block"});
      }
    }
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      for (std::size_t j = i + 1; j < blocks.size(); ++j) {
        if (intervals_overlap(blocks[i], blocks[j])) {
          out.push_back({ViolationKind::kOverlap, track.structure, {i, j},
                         block_label(track.structure, i) + " overlaps " +
                             block_label(track.structure, j)});
        }
      }
    }
  }
  return report;
}

InsertResult insert_block(const Sequence& seq, const MotionBlock& block) {
  if (auto field = check_block(block); !field.empty()) {
    return InsertRejection{InsertRejection::Reason::kInvalidBlock, std::nullopt,
                           0, std::move(field)};
  }
  Sequence next = seq;
  auto it = std::find_if(next.tracks.begin(), next.tracks.end(),
                         [&](const Track& t) { return t.structure == block.structure; });
  if (it == next.tracks.end()) {
    auto pos = std::find_if(next.tracks.begin(), next.tracks.end(), [&](const Track& t) {
      return structure_ordinal(t.structure) > structure_ordinal(block.structure);
    });
    next.tracks.insert(pos, Track{block.structure, {block}});
    return next;
  }
  auto& blocks = it->blocks;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (intervals_overlap(blocks[i], block)) {
      return InsertRejection{InsertRejection::Reason::kOverlap, blocks[i], i, {}};
    }
  }
  auto pos = std::upper_bound(
      blocks.begin(), blocks.end(), block,
      [](const MotionBlock& a, const MotionBlock& b) { return a.start_ms < b.start_ms; });
  blocks.insert(pos, block);
  return next;
}

SequenceValidationError::SequenceValidationError(ValidationReport report)
    : std::runtime_error("invalid sequence: " + describe(report)),
      report_(std::move(report)) {}

std::string export_sequence(const Sequence& seq) {
  if (ValidationReport r = validate_sequence(seq); !r.ok()) {
    throw SequenceValidationError(std::move(r));
  }
  std::string out = "{\n  \"name\": ";
  out += json(seq.name).dump();
  out += ",\n  \"version\": ";
  out += std::to_string(kDocumentVersion);
  out += ",\n  \"tracks\": [";
  for (std::size_t t = 0; t < seq.tracks.size(); ++t) {
    const Track& track = seq.tracks[t];
    out += t == 0 ? "\n" : ",\n";
    out += "    {\n      \"structure\": \"";
    out += to_string(track.structure);
    out += "\",\n      \"blocks\": [";
    for (std::size_t i = 0; i < track.blocks.size(); ++i) {
      out += i == 0 ? "\n        " : ",\n        ";
      write_block(out, track.blocks[i]);
    }
    out += track.blocks.empty() ? "]\n    }" : "\n      ]\n    }";
  }
  out += seq.tracks.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

Sequence parse_sequence_document(std::string_view doc) {
  json root;
  try {
    root = json::parse(doc.begin(), doc.end());
  } catch (const json::parse_error& e) {
    fail(std::string("malformed document: ") + e.what());
  }
  require_keys(root, {"name", "version", "tracks"}, "document");
  if (!root["name"].is_string()) fail("document.name: expected a string");
  if (read_integer(root["version"], "document.version") != kDocumentVersion) {
    fail("document.version: unsupported version " + root["version"].dump());
  }
  const json& tracks = root["tracks"];
  if (!tracks.is_array()) fail("document.tracks: expected an array");

  Sequence seq;
  seq.name = root["name"].get<std::string>();
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    const std::string where = "tracks[" + std::to_string(t) + "]";
    require_keys(tracks[t], {"structure", "blocks"}, where);
    const json& name = tracks[t]["structure"];
    if (!name.is_string()) fail(where + ".structure: expected a string");
    const auto s = parse_structure(name.get<std::string>());
    if (!s) {
      fail(where + ".structure: unknown structure \"" + name.get<std::string>() + "\"");
    }
    const json& blocks = tracks[t]["blocks"];
    if (!blocks.is_array()) fail(where + ".blocks: expected an array");
    Track track{*s, {}};
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      track.blocks.push_back(
          read_block(blocks[i], *s, where + ".blocks[" + std::to_string(i) + "]"));
    }
    seq.tracks.push_back(std::move(track));
  }
  return seq;
}

Sequence import_sequence(std::string_view doc) {
  Sequence seq = parse_sequence_document(doc);
  if (ValidationReport r = validate_sequence(seq); !r.ok()) {
    throw SequenceValidationError(std::move(r));
  }
  return seq;
}

std::string describe(const ValidationReport& report) {
  if (report.ok()) return "ok";
  std::string out;
  for (const Violation& v : report.violations) {
    if (!out.empty()) out += "\n";
    out += std::string(to_string(v.kind)) + ": " + v.message;
  }
  return out;
}

}  // namespace mojikit
