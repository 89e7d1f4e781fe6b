#pragma once

#include <cmath>
#include <vector>

#include "relhartree/bump.hpp"
#include "relhartree/multiplier.hpp"

namespace relhartree {

inline bool is_dyadic(double N) {
    if (!(N > 0)) return false;
    const double j = std::log2(N);
    return std::abs(j - std::round(j)) < 1e-12;
}

/// rho_N(xi) = rho(xi/N) - rho(2 xi/N), supported in {N/2 <= |xi| <= 2N}.
inline MultiplierSymbol lp_projection_symbol(const SpectralGrid& g, double N) {
    if (!is_dyadic(N))
        throw ConfigError("lp_projection_symbol: N must be a dyadic 2^j, got " + std::to_string(N));
    return make_symbol(g, "lp N=" + std::to_string(N), [N](double x1, double x2) {
        const double r = std::hypot(x1, x2);
        return complexd(bump(r / N) - bump(2.0 * r / N), 0.0);
    });
}

/// rho_{<=N0}(xi) = 1 - sum_{N>N0} rho_N = rho(xi/N0).
inline MultiplierSymbol lp_low_symbol(const SpectralGrid& g, double N0) {
    if (!is_dyadic(N0))
        throw ConfigError("lp_low_symbol: N0 must be a dyadic 2^j, got " + std::to_string(N0));
    return make_symbol(g, "lp<= N0=" + std::to_string(N0), [N0](double x1, double x2) {
        return complexd(bump(std::hypot(x1, x2) / N0), 0.0);
    });
}

/// Dyads N = 2^j whose annulus {N/2 <= |xi| <= 2N} meets the lattice
/// resolution window [dxi, sqrt(2) xi_max].
inline std::vector<double> lattice_dyads(const SpectralGrid& g) {
    const double lo = g.dxi;
    const double hi = std::sqrt(2.0) * g.xi_max();
    std::vector<double> out;
    for (int j = int(std::floor(std::log2(lo))) - 1; std::ldexp(1.0, j) <= 2.0 * hi; ++j)
        out.push_back(std::ldexp(1.0, j));
    return out;
}

}  // namespace relhartree
