#pragma once

#include "hypflow/sampling.hpp"

namespace hypflow {

// generic frame with moderate coordinates, for property tests
inline GroupElement haarLikeFrame(Rng& rng, double spread = 1.0) {
    double x = rng.uniform(-spread, spread);
    double y = std::exp(rng.uniform(-spread, spread));
    double theta = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    return frameFromCoordinates(x, y, theta);
}

}  // namespace hypflow
