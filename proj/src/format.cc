#include "mojikit/format.h"

#include <cmath>
#include <cstdlib>

namespace mojikit {

std::int64_t to_tenths(double value) {
  return static_cast<std::int64_t>(std::llround(value * 10.0));
}

std::string format_tenths(std::int64_t tenths) {
  std::string out;
  if (tenths < 0) out.push_back('-');
  const std::uint64_t mag =
      tenths < 0 ? static_cast<std::uint64_t>(-(tenths + 1)) + 1
                 : static_cast<std::uint64_t>(tenths);
  out += std::to_string(mag / 10);
  out.push_back('.');
  out.push_back(static_cast<char>('0' + mag % 10));
  return out;
}

std::string format_deg(double value) { return format_tenths(to_tenths(value)); }

std::string format_telemetry_line(Millis t_ms, const JointState& pose) {
  std::string line = std::to_string(t_ms);
  for (double a : pose.angles()) {
    line.push_back(' ');
    line += format_deg(a);
  }
  return line;
}

}  // namespace mojikit
