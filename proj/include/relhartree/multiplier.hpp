#pragma once

#include <cmath>
#include <string>

#include "relhartree/fft.hpp"
#include "relhartree/grid.hpp"

namespace relhartree {

/// Symbol m(xi) sampled on the (math-order) frequency lattice.
/// m(D)f = F^-1(m(xi) f_hat(xi)).
struct MultiplierSymbol {
    std::string descriptor;
    const SpectralGrid* grid = nullptr;
    cvector values;

    MultiplierSymbol() = default;
    MultiplierSymbol(const SpectralGrid& g, std::string name)
        : descriptor(std::move(name)), grid(&g), values(g.size(), complexd(0.0)) {}
};

template <class F>
inline MultiplierSymbol make_symbol(const SpectralGrid& g, std::string name, F&& f) {
    MultiplierSymbol m(g, std::move(name));
    for (int j1 = 0; j1 < g.n; ++j1) {
        const double xi1 = g.xi(j1);
        for (int j2 = 0; j2 < g.n; ++j2) {
            m.values[g.index(j1, j2)] = f(xi1, g.xi(j2));
        }
    }
    return m;
}

inline double bracket(double x) { return std::sqrt(1.0 + x * x); }
inline double bracket2(double x1, double x2) { return std::sqrt(1.0 + x1 * x1 + x2 * x2); }

/// <xi>^s = (1+|xi|^2)^{s/2}
inline MultiplierSymbol bessel_symbol(const SpectralGrid& g, double s) {
    return make_symbol(g, "bessel^" + std::to_string(s), [s](double x1, double x2) {
        return complexd(std::pow(1.0 + x1 * x1 + x2 * x2, 0.5 * s), 0.0);
    });
}

/// e^{-it<xi>}, the half-wave propagator over time t.
inline MultiplierSymbol half_wave_symbol(const SpectralGrid& g, double t) {
    return make_symbol(g, "halfwave t=" + std::to_string(t), [t](double x1, double x2) {
        const double phase = -t * bracket2(x1, x2);
        return complexd(std::cos(phase), std::sin(phase));
    });
}

/// (i xi_1)^{a1} (i xi_2)^{a2}, spectral derivative of order (a1,a2).
inline MultiplierSymbol derivative_symbol(const SpectralGrid& g, int a1, int a2) {
    const complexd I(0.0, 1.0);
    return make_symbol(g, "d^(" + std::to_string(a1) + "," + std::to_string(a2) + ")",
                       [a1, a2, I](double x1, double x2) {
                           complexd v(1.0, 0.0);
                           for (int k = 0; k < a1; ++k) v *= I * x1;
                           for (int k = 0; k < a2; ++k) v *= I * x2;
                           return v;
                       });
}

inline void multiply_in_place(ComplexField& v, const MultiplierSymbol& m) {
    require_space(v, Space::Frequency, "apply_multiplier");
    require_same_grid(*v.grid, *m.grid, "apply_multiplier");
    const std::size_t sz = v.size();
    for (std::size_t i = 0; i < sz; ++i) v.values[i] *= m.values[i];
}

inline ComplexField apply_multiplier(FftEngine& eng, const ComplexField& u,
                                     const MultiplierSymbol& m) {
    require_same_grid(*u.grid, *m.grid, "apply_multiplier");
    ComplexField v = eng.forward(u);
    multiply_in_place(v, m);
    return eng.inverse(v);
}

}  // namespace relhartree
