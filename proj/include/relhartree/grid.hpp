#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "relhartree/detail/aligned.hpp"
#include "relhartree/errors.hpp"

namespace relhartree {

inline constexpr double kPi = std::numbers::pi;

/// Discretization of the periodic box [-L,L)^2 together with its dual
/// frequency lattice. Physical nodes x_m = -L + m h, frequency nodes
/// xi_j = (j - n/2) pi/L in math order (negative to positive), so the
/// single unpaired mode is -(n/2) pi/L. Immutable after construction.
struct SpectralGrid {
    int n = 0;         // points per dimension, even
    double L = 0;      // half-width of the box
    double h = 0;      // 2L/n
    double dxi = 0;    // pi/L, frequency cell width
    std::vector<double> xs;   // physical coordinates, one dimension
    std::vector<double> xis;  // frequency coordinates, one dimension

    std::size_t size() const { return std::size_t(n) * std::size_t(n); }
    std::size_t index(int j1, int j2) const {
        return std::size_t(j1) * std::size_t(n) + std::size_t(j2);
    }
    double x(int m) const { return xs[std::size_t(m)]; }
    double xi(int j) const { return xis[std::size_t(j)]; }
    double xi_max() const { return -xis[0]; }  // |unpaired mode| = (n/2) dxi

    bool same_as(const SpectralGrid& o) const { return n == o.n && L == o.L; }
};

inline SpectralGrid make_grid(int n, double L) {
    if (n < 16 || n % 2 != 0)
        throw ConfigError("make_grid: n must be even and >= 16, got n=" + std::to_string(n));
    if (!(L > 0))
        throw ConfigError("make_grid: L must be positive, got L=" + std::to_string(L));
    SpectralGrid g;
    g.n = n;
    g.L = L;
    g.h = 2.0 * L / n;
    g.dxi = kPi / L;
    g.xs.resize(std::size_t(n));
    g.xis.resize(std::size_t(n));
    for (int m = 0; m < n; ++m) g.xs[std::size_t(m)] = -L + m * g.h;
    for (int j = 0; j < n; ++j) g.xis[std::size_t(j)] = (j - n / 2) * g.dxi;
    return g;
}

enum class Space { Physical, Frequency };

/// Complex scalar samples on the grid, tagged with the space they live in.
struct ComplexField {
    Space space = Space::Physical;
    const SpectralGrid* grid = nullptr;
    cvector values;

    ComplexField() = default;
    ComplexField(const SpectralGrid& g, Space s)
        : space(s), grid(&g), values(g.size(), complexd(0.0, 0.0)) {}

    complexd& operator[](std::size_t i) { return values[i]; }
    const complexd& operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
};

inline void require_space(const ComplexField& f, Space s, const char* who) {
    if (f.space != s)
        throw ConfigError(std::string(who) + ": field has the wrong space tag");
}

inline void require_same_grid(const SpectralGrid& a, const SpectralGrid& b, const char* who) {
    if (!a.same_as(b))
        throw ConfigError(std::string(who) + ": grid mismatch");
}

}  // namespace relhartree
