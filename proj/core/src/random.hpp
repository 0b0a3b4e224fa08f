#pragma once

#include <cstdint>
#include <random>

namespace contamix::detail {

using Engine = std::mt19937_64;

// Uniform draw on the open interval (0, 1) from the top 53 bits.
inline double open_unit(Engine& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace contamix::detail
