// Joint layout and angle limits of the 16-joint companion robot.
//
// The robot has eight articulated structures with two axes each. Every axis
// belongs to one of two families: the lift family (pitch/lift/wag), driven by
// a motion block's F parameter, and the rotate family (rotate/flex/curl),
// driven by R. Joint indices follow structure enumeration order with the
// lift-family axis first, so index = 2 * structure + (0 for F, 1 for R).

#ifndef MOJIKIT_KINEMATICS_H_
#define MOJIKIT_KINEMATICS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace mojikit {

// Raised when a (structure, axis) pairing or other domain argument is invalid.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class StructureId : std::uint8_t {
  kEarLeft,
  kEarRight,
  kHead,
  kLimbFrontLeft,
  kLimbFrontRight,
  kLimbRearLeft,
  kLimbRearRight,
  kTail,
};

enum class AxisId : std::uint8_t { kPitch, kRotate, kLift, kFlex, kWag, kCurl };

// Which block parameter drives an axis.
enum class AxisFamily : std::uint8_t { kF, kR };

inline constexpr std::size_t kStructureCount = 8;
inline constexpr std::size_t kJointCount = 16;

inline constexpr std::array<StructureId, kStructureCount> kAllStructures = {
    StructureId::kEarLeft,        StructureId::kEarRight,
    StructureId::kHead,           StructureId::kLimbFrontLeft,
    StructureId::kLimbFrontRight, StructureId::kLimbRearLeft,
    StructureId::kLimbRearRight,  StructureId::kTail,
};

struct JointSpec {
  StructureId structure;
  AxisId axis;
  double min_deg;
  double max_deg;
};

constexpr std::size_t structure_ordinal(StructureId s) {
  return static_cast<std::size_t>(s);
}

std::string_view to_string(StructureId s);
std::string_view to_string(AxisId a);
std::optional<StructureId> parse_structure(std::string_view name);
std::optional<AxisId> parse_axis(std::string_view name);

// The axis of `s` driven by F or R.
AxisId axis_for(StructureId s, AxisFamily family);
bool axis_valid(StructureId s, AxisId a);
// Throws DomainError when `a` is not an axis of `s`.
AxisFamily family_of(StructureId s, AxisId a);

// All 16 joints in index order.
std::span<const JointSpec, kJointCount> joint_table();

std::size_t joint_index(StructureId s, AxisId a);
std::size_t joint_index(StructureId s, AxisFamily family);
const JointSpec& joint_spec(std::size_t index);

// (min_deg, max_deg); throws DomainError for an invalid pairing.
std::pair<double, double> joint_range(StructureId s, AxisId a);
std::pair<double, double> joint_range(StructureId s, AxisFamily family);

double clamp_angle(StructureId s, AxisId a, double angle_deg);

// Angles of all 16 joints, indexed by joint index.
class JointState {
 public:
  JointState() = default;
  explicit JointState(const std::array<double, kJointCount>& angles)
      : angles_(angles) {}

  double angle(StructureId s, AxisId a) const {
    return angles_[joint_index(s, a)];
  }
  double angle(std::size_t index) const { return angles_.at(index); }
  void set(StructureId s, AxisId a, double deg) {
    angles_[joint_index(s, a)] = deg;
  }
  void set(std::size_t index, double deg) { angles_.at(index) = deg; }

  const std::array<double, kJointCount>& angles() const { return angles_; }

  // True when every angle lies within its joint's range.
  bool in_range() const;

  bool operator==(const JointState&) const = default;

 private:
  std::array<double, kJointCount> angles_{};
};

JointState neutral_pose();

}  // namespace mojikit

#endif  // MOJIKIT_KINEMATICS_H_
