#pragma once

#include <cmath>

namespace relhartree {

/// Radial bump rho(|xi|): 1 on [0,1], 0 on [2,inf), smooth transition
/// exp(1 - 1/(1-q^2)) with q = |xi|-1 in between. Shared by the
/// Littlewood-Paley projections and the B-cutoff so the two stay consistent.
inline double bump(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double q = r - 1.0;
    const double d = 1.0 - q * q;
    return std::exp(1.0 - 1.0 / d);
}

}  // namespace relhartree
