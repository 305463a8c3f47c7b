#ifndef MOJIKIT_UNITS_H_
#define MOJIKIT_UNITS_H_

#include <cstdint>

namespace mojikit {

// Milliseconds, both as durations and as virtual-clock instants.
using Millis = std::int64_t;

}  // namespace mojikit

#endif  // MOJIKIT_UNITS_H_
