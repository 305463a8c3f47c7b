// Timeline data model: motion blocks grouped into one track per structure,
// validation, insertion, and the canonical sequence document.

#ifndef MOJIKIT_SEQUENCE_H_
#define MOJIKIT_SEQUENCE_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mojikit/kinematics.h"
#include "mojikit/units.h"

namespace mojikit {

inline constexpr int kMinSpeed = 1;
inline constexpr int kMaxSpeed = 5;
inline constexpr int kDocumentVersion = 1;

// One timed command on a structure. f_deg targets the structure's lift-family
// axis and r_deg its rotate-family axis. Motion starts delay_ms after
// start_ms; the block occupies [start_ms, start_ms + duration_ms).
struct MotionBlock {
  StructureId structure = StructureId::kHead;
  double f_deg = 0.0;
  double r_deg = 0.0;
  int speed = 3;
  Millis delay_ms = 0;
  Millis start_ms = 0;
  Millis duration_ms = 1000;

  Millis end_ms() const { return start_ms + duration_ms; }
  bool operator==(const MotionBlock&) const = default;
};

struct Track {
  StructureId structure = StructureId::kHead;
  std::vector<MotionBlock> blocks;

  bool operator==(const Track&) const = default;
};

struct Sequence {
  std::string name;
  // Ordered by structure enumeration order, at most one per structure.
  std::vector<Track> tracks;

  // max(start_ms + duration_ms) over all blocks, 0 when empty.
  Millis total_duration_ms() const;
  std::size_t block_count() const;
  const Track* find_track(StructureId s) const;

  bool operator==(const Sequence&) const = default;
};

enum class ViolationKind {
  kAngleRange,
  kSpeedRange,
  kDelayNotBelowDuration,
  kNegativeTime,
  kNonPositiveDuration,
  kOverlap,
  kUnsorted,
  kStructureMismatch,
  kDuplicateTrack,
  kTrackOrder,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  StructureId structure;
  // Indices into the offending track's block list; empty for track-level
  // violations.
  std::vector<std::size_t> blocks;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Field-level checks on a single block (ranges, speed, delay, times).
std::vector<Violation> check_block(const MotionBlock& block,
                                   std::size_t index = 0);

ValidationReport validate_sequence(const Sequence& seq);

struct InsertRejection {
  enum class Reason { kInvalidBlock, kOverlap };
  Reason reason;
  // Set for kOverlap: the existing block the new one collides with.
  std::optional<MotionBlock> conflict;
  std::size_t conflict_index = 0;
  std::vector<Violation> block_violations;
};

using InsertResult = std::variant<Sequence, InsertRejection>;

// Returns a copy of `seq` with `block` placed on its structure's track in
// start order, or a rejection if the block is invalid or overlaps.
InsertResult insert_block(const Sequence& seq, const MotionBlock& block);

// Document is not well-formed (syntax, schema, unknown names).
class SequenceParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Document is well-formed but describes an invalid sequence.
class SequenceValidationError : public std::runtime_error {
 public:
  explicit SequenceValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// Canonical, byte-deterministic document text. Throws
// SequenceValidationError if the sequence is not valid.
std::string export_sequence(const Sequence& seq);

// Parses without validating. Throws SequenceParseError.
Sequence parse_sequence_document(std::string_view doc);

// Parses and validates. Throws SequenceParseError or SequenceValidationError.
Sequence import_sequence(std::string_view doc);

// Report rendered as one line per violation.
std::string describe(const ValidationReport& report);

}  // namespace mojikit

#endif  // MOJIKIT_SEQUENCE_H_
