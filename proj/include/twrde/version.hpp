#pragma once

#include <cstdint>

namespace twrde {

inline constexpr const char* kVersion = "0.1.0";

// Default seed for every tool and engine; override with --seed.
inline constexpr std::uint64_t kDefaultSeed = 8675309;

// Message magnitudes are kept within [-kClipBound, kClipBound] nats.
inline constexpr double kClipBound = 50.0;

// atanh argument guard: |p| is pulled inside 1 - kAtanhGuard before inversion.
inline constexpr double kAtanhGuard = 1e-15;

}  // namespace twrde
