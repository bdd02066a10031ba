#pragma once

namespace mafia {

inline constexpr const char* kVersion = "0.1.0";

// Default master seed for every CLI command. Fixed so that published numbers
// are reproducible; never derived from the clock.
inline constexpr unsigned long long kDefaultSeed = 0x5EEDBA5Eull;

} // namespace mafia
