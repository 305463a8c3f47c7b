#include "mojikit/kinematics.h"

#include <algorithm>
#include <cmath>

namespace mojikit {
namespace {

constexpr std::array<std::string_view, kStructureCount> kStructureNames = {
    "ear_left",        "ear_right",      "head",
    "limb_front_left", "limb_front_right", "limb_rear_left",
    "limb_rear_right", "tail",
};

constexpr std::array<std::string_view, 6> kAxisNames = {
    "pitch", "rotate", "lift", "flex", "wag", "curl",
};

constexpr JointSpec ear_or_head(StructureId s, AxisId a) {
  return {s, a, -40.0, 40.0};
}

constexpr std::array<JointSpec, kJointCount> kJoints = {{
    ear_or_head(StructureId::kEarLeft, AxisId::kPitch),
    ear_or_head(StructureId::kEarLeft, AxisId::kRotate),
    ear_or_head(StructureId::kEarRight, AxisId::kPitch),
    ear_or_head(StructureId::kEarRight, AxisId::kRotate),
    ear_or_head(StructureId::kHead, AxisId::kPitch),
    ear_or_head(StructureId::kHead, AxisId::kRotate),
    {StructureId::kLimbFrontLeft, AxisId::kLift, -90.0, 90.0},
    {StructureId::kLimbFrontLeft, AxisId::kFlex, 0.0, 90.0},
    {StructureId::kLimbFrontRight, AxisId::kLift, -90.0, 90.0},
    {StructureId::kLimbFrontRight, AxisId::kFlex, 0.0, 90.0},
    {StructureId::kLimbRearLeft, AxisId::kLift, -90.0, 90.0},
    {StructureId::kLimbRearLeft, AxisId::kFlex, 0.0, 90.0},
    {StructureId::kLimbRearRight, AxisId::kLift, -90.0, 90.0},
    {StructureId::kLimbRearRight, AxisId::kFlex, 0.0, 90.0},
    {StructureId::kTail, AxisId::kWag, -90.0, 90.0},
    {StructureId::kTail, AxisId::kCurl, 0.0, 90.0},
}};

std::string bad_pair(StructureId s, AxisId a) {
  return "axis '" + std::string(to_string(a)) + "' is not an axis of '" +
         std::string(to_string(s)) + "'";
}

}  // namespace

std::string_view to_string(StructureId s) {
  return kStructureNames.at(structure_ordinal(s));
}

std::string_view to_string(AxisId a) {
  return kAxisNames.at(static_cast<std::size_t>(a));
}

std::optional<StructureId> parse_structure(std::string_view name) {
  for (std::size_t i = 0; i < kStructureNames.size(); ++i) {
    if (kStructureNames[i] == name) return static_cast<StructureId>(i);
  }
  return std::nullopt;
}

std::optional<AxisId> parse_axis(std::string_view name) {
  for (std::size_t i = 0; i < kAxisNames.size(); ++i) {
    if (kAxisNames[i] == name) return static_cast<AxisId>(i);
  }
  return std::nullopt;
}

AxisId axis_for(StructureId s, AxisFamily family) {
  return kJoints[joint_index(s, family)].axis;
}

bool axis_valid(StructureId s, AxisId a) {
  const std::size_t base = 2 * structure_ordinal(s);
  return kJoints[base].axis == a || kJoints[base + 1].axis == a;
}

AxisFamily family_of(StructureId s, AxisId a) {
  const std::size_t base = 2 * structure_ordinal(s);
  if (kJoints[base].axis == a) return AxisFamily::kF;
  if (kJoints[base + 1].axis == a) return AxisFamily::kR;
  throw DomainError(bad_pair(s, a));
}

std::span<const JointSpec, kJointCount> joint_table() { return kJoints; }

std::size_t joint_index(StructureId s, AxisFamily family) {
  if (structure_ordinal(s) >= kStructureCount) {
    throw DomainError("unknown structure");
  }
  return 2 * structure_ordinal(s) + (family == AxisFamily::kF ? 0 : 1);
}

std::size_t joint_index(StructureId s, AxisId a) {
  return joint_index(s, family_of(s, a));
}

const JointSpec& joint_spec(std::size_t index) {
  if (index >= kJointCount) throw DomainError("joint index out of range");
  return kJoints[index];
}

std::pair<double, double> joint_range(StructureId s, AxisId a) {
  const JointSpec& spec = kJoints[joint_index(s, a)];
  return {spec.min_deg, spec.max_deg};
}

std::pair<double, double> joint_range(StructureId s, AxisFamily family) {
  const JointSpec& spec = kJoints[joint_index(s, family)];
  return {spec.min_deg, spec.max_deg};
}

double clamp_angle(StructureId s, AxisId a, double angle_deg) {
  const auto [lo, hi] = joint_range(s, a);
  return std::clamp(angle_deg, lo, hi);
}

bool JointState::in_range() const {
  for (std::size_t i = 0; i < kJointCount; ++i) {
    const double v = angles_[i];
    if (!std::isfinite(v) || v < kJoints[i].min_deg || v > kJoints[i].max_deg) {
      return false;
    }
  }
  return true;
}

JointState neutral_pose() { return JointState{}; }

}  // namespace mojikit
