#pragma once

#include <cmath>

#include "relhartree/multiplier.hpp"

namespace relhartree {

/// F(|x|^-gamma) = c_gamma |eta|^{gamma-2} in 2D under the convention
/// g_hat(eta) = int e^{-ix.eta} g dx; gamma=1 gives exactly 2pi/|eta|.
inline double riesz_constant(double gamma) {
    if (!(gamma > 0.0 && gamma < 2.0))
        throw ConfigError("riesz_constant: gamma must lie in (0,2), got " + std::to_string(gamma));
    return std::pow(2.0, 2.0 - gamma) * kPi * std::tgamma(1.0 - 0.5 * gamma) /
           std::tgamma(0.5 * gamma);
}

/// Kernel symbol c_gamma |eta|^{gamma-2} with the zero mode set to 0.
/// Zeroing the eta=0 mode subtracts a spatially constant, time-dependent
/// potential; the solution changes only by a spatially uniform phase (gauge
/// recorded in output metadata).
inline MultiplierSymbol riesz_kernel_symbol(const SpectralGrid& g, double gamma) {
    const double c = riesz_constant(gamma);
    const double e = gamma - 2.0;
    return make_symbol(g, "riesz gamma=" + std::to_string(gamma), [c, e](double x1, double x2) {
        const double r2 = x1 * x1 + x2 * x2;
        if (r2 == 0.0) return complexd(0.0, 0.0);
        return complexd(c * std::pow(r2, 0.5 * e), 0.0);
    });
}

}  // namespace relhartree
