#pragma once

#include <cstdint>

#include "chsh/density.hpp"
#include "chsh/rng.hpp"
#include "chsh/states.hpp"

namespace chsh_test {

// Random physical state covering a spread of mixture sizes (ranks 1..4).
inline chsh::DensityMatrix random_state(uint64_t seed) {
    return chsh::random_mixed(seed, 2 + static_cast<int>(seed % 7));
}

inline chsh::Vec3 random_unit(uint64_t seed) {
    chsh::CounterRng rng(seed, 0xD1A);
    return rng.unit_vector();
}

}  // namespace chsh_test
