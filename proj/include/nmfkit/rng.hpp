#pragma once

#include <cstdint>
#include <random>

namespace nmfkit {

/// Uniform double in [0,1) with a fixed bit mapping, so streams are identical
/// across standard library implementations.
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace nmfkit
