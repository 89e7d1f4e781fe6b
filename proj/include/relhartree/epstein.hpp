#pragma once

#include <array>
#include <cmath>

#include "relhartree/grid.hpp"

namespace relhartree {

/// Symmetric positive definite 2x2 form Q(j) = a j1^2 + 2 b j1 j2 + c j2^2.
struct Quadratic2 {
    double a = 1, b = 0, c = 1;
    double eval(double j1, double j2) const { return a * j1 * j1 + 2.0 * b * j1 * j2 + c * j2 * j2; }
    double det() const { return a * c - b * b; }
    Quadratic2 inverse() const {
        const double d = det();
        return {c / d, -b / d, a / d};
    }
    double min_eigen() const {
        const double t = 0.5 * (a + c);
        const double s = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
        return t - s;
    }
};

namespace detail {
// One half of the Ewald split: sum over Z^2\{0} of erfc(sqrt(pi alpha Q(j)))/sqrt(Q(j)).
inline double ewald_half_sum(const Quadratic2& Q, double alpha) {
    // erfc(x) < 1e-19 for x > 6.6, i.e. alpha*Q > 13.9.
    const double qcut = 13.9 / alpha;
    const int jmax = int(std::ceil(std::sqrt(qcut / Q.min_eigen()))) + 1;
    double sum = 0.0;
    for (int j1 = -jmax; j1 <= jmax; ++j1) {
        for (int j2 = -jmax; j2 <= jmax; ++j2) {
            if (j1 == 0 && j2 == 0) continue;
            const double q = Q.eval(j1, j2);
            if (q > qcut) continue;
            sum += std::erfc(std::sqrt(kPi * alpha * q)) / std::sqrt(q);
        }
    }
    return sum;
}
}  // namespace detail

/// Analytic continuation Z_Q(1/2) = sum'_{j in Z^2} Q(j)^{-1/2}.
/// This is the constant by which the punctured-lattice midpoint sum of
/// |J v|^{-1} (Q = v^T J^T J v on the unit lattice) deviates from its
/// integral; Q = identity gives 4 zeta(1/2) beta(1/2) ~ -3.9003.
/// Ewald representation with split parameter alpha (balanced at 1/sqrt(det)):
///   Z_Q(1/2) = S(Q, alpha) + D^{-1/2} S(Q^{ -1}, 1/alpha) - 2/sqrt(D alpha) - 2 sqrt(alpha),
/// where S is the erfc half-sum and D = det Q. Both sums have Gaussian tails.
inline double epstein_zeta_half(const Quadratic2& Q) {
    const double D = Q.det();
    if (!(D > 0) || !(Q.a > 0))
        throw ConfigError("epstein_zeta_half: form must be positive definite");
    const double alpha = 1.0 / std::sqrt(D);
    const double direct = detail::ewald_half_sum(Q, alpha);
    const double dual = detail::ewald_half_sum(Q.inverse(), 1.0 / alpha);
    return direct + dual / std::sqrt(D) - 2.0 / std::sqrt(D * alpha) - 2.0 * std::sqrt(alpha);
}

/// Jacobian of the direction map g(v) = v/<v> at v = xi, as the quadratic
/// form Q(j) = |J j|^2. Eigenvalues of J are <xi>^-3 (radial) and <xi>^-1
/// (tangential); det J = <xi>^-4.
inline Quadratic2 direction_map_form(double xi1, double xi2) {
    const double b2 = 1.0 + xi1 * xi1 + xi2 * xi2;
    const double br = std::sqrt(b2);
    const double br3 = b2 * br;
    // J = (I <xi>^2 - xi xi^T)/<xi>^3
    const double j11 = (b2 - xi1 * xi1) / br3;
    const double j12 = (-xi1 * xi2) / br3;
    const double j22 = (b2 - xi2 * xi2) / br3;
    // Q = J^T J (J symmetric)
    return {j11 * j11 + j12 * j12, j12 * (j11 + j22), j22 * j22 + j12 * j12};
}

inline double direction_map_det(double xi1, double xi2) {
    const double b2 = 1.0 + xi1 * xi1 + xi2 * xi2;
    return 1.0 / (b2 * b2);  // det J = <xi>^-4
}

}  // namespace relhartree
