#pragma once

#include <cstddef>

#include "spiral/signal.hpp"

namespace spiral {

struct Phantom {
  Signal emission;
  Signal attenuation;
};

// Left-right symmetric emission phantom: a uniform body ellipse on a zero
// background with a hot pair, a warm region and a cold lesion. The attenuation
// map is smooth and lies in [0, 0.02].
Phantom make_phantom(std::size_t side);

}  // namespace spiral
