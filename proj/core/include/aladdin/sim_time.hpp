#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace aladdin {

// Simulated time. Configuration and logs speak milliseconds, but frame
// airtimes are a few microseconds per byte, so the clock ticks in µs.
using SimTime = std::chrono::duration<std::int64_t, std::micro>;

constexpr SimTime sim_ms(std::int64_t ms) { return std::chrono::milliseconds(ms); }

// Rounds a (possibly fractional) millisecond count to the µs grid.
SimTime sim_ms_from_double(double ms);

// "1234.567": milliseconds with exactly three decimals. Byte-stable.
std::string format_ms(SimTime t);

}  // namespace aladdin
