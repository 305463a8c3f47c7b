// Fixed-point text formatting shared by the document, telemetry and CLI
// outputs. All of them print angles with exactly one decimal place.

#ifndef MOJIKIT_FORMAT_H_
#define MOJIKIT_FORMAT_H_

#include <cstdint>
#include <string>

#include "mojikit/kinematics.h"
#include "mojikit/units.h"

namespace mojikit {

// Nearest tenth, halves away from zero. Never yields a negative zero.
std::int64_t to_tenths(double value);

// "12.3", "-0.5", "0.0".
std::string format_tenths(std::int64_t tenths);
std::string format_deg(double value);

// "<t_ms> <16 space-separated angles>" without a trailing newline.
std::string format_telemetry_line(Millis t_ms, const JointState& pose);

}  // namespace mojikit

#endif  // MOJIKIT_FORMAT_H_
