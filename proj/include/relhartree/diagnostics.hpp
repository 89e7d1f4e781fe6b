#pragma once

#include <cmath>
#include <vector>

#include "relhartree/fitting.hpp"
#include "relhartree/hartree.hpp"
#include "relhartree/multiplier.hpp"

namespace relhartree {

enum class EnergySign { PaperPlus, ConservedMinus };

struct IndexBundle {
    double n_index = 1000.0;  // cutoff exponent 2/n in rho(s^{-2/n} xi)
    double k_index = 10.0;    // weight in the S-norm / Cauchy metrics
    double delta0 = 0.01;
    int sobolev_order = 8;    // n_d: discrete Sobolev order for diagnostics

    void validate() const {
        if (!(n_index >= 1.0)) throw ConfigError("IndexBundle: n_index must be >= 1");
        if (!(k_index >= 0.0)) throw ConfigError("IndexBundle: k_index must be >= 0");
        if (!(delta0 > 0.0)) throw ConfigError("IndexBundle: delta0 must be positive");
        if (sobolev_order < 0) throw ConfigError("IndexBundle: sobolev_order must be >= 0");
    }
};

/// One time-sample of every tracked norm and conserved quantity.
struct DiagnosticsRecord {
    double t = 0;
    double mass = 0;
    double energy_paper = 0;  // +lambda/4 on the quartic term
    double energy_cons = 0;   // -lambda/4 (the Hamiltonian of the flow)
    double sup_norm = 0;
    std::vector<double> wk;  // W^{l,inf} for l = 0..l_max
    double hn = 0;           // H^{n_d}
    double e1 = 0, e2 = 0;
    double s_norm = 0;
    double ratio_e1 = 0, ratio_e2 = 0;  // <t>^-d0 E1, <t>^-2d0 E2
    bool boundary_warn = false;         // weight-window validity flag
    std::vector<double> b_probes;       // B at the configured probes
};

inline double mass_norm(const ComplexField& u) {
    require_space(u, Space::Physical, "mass");
    double s = 0;
    for (const auto& v : u.values) s += std::norm(v);
    return u.grid->h * std::sqrt(s);
}

namespace detail {
// ||g||_{H^s}^2 = (2pi)^-2 sum <xi>^{2s} |g_hat|^2 dxi^2 (equals the h-weighted
// physical L2 sum at s=0 by the transform convention).
inline double hs_norm_from_hat(const ComplexField& v, double s) {
    const SpectralGrid& g = *v.grid;
    double acc = 0;
    for (int j1 = 0; j1 < g.n; ++j1) {
        const double x1 = g.xi(j1);
        for (int j2 = 0; j2 < g.n; ++j2) {
            const double w = 1.0 + x1 * x1 + g.xi(j2) * g.xi(j2);
            acc += std::pow(w, s) * std::norm(v.values[g.index(j1, j2)]);
        }
    }
    return g.dxi / (2.0 * kPi) * std::sqrt(acc);
}

inline double sup_abs(const ComplexField& u) {
    double s = 0;
    for (const auto& v : u.values) s = std::max(s, std::abs(v));
    return s;
}
}  // namespace detail

/// ||<xi>^k u_hat||_{L^inf} over the lattice.
inline double scattering_norm_from_hat(const ComplexField& u_hat, double k) {
    require_space(u_hat, Space::Frequency, "scattering_norm");
    const SpectralGrid& g = *u_hat.grid;
    double sup = 0;
    for (int j1 = 0; j1 < g.n; ++j1) {
        const double x1 = g.xi(j1);
        for (int j2 = 0; j2 < g.n; ++j2) {
            const double w = std::pow(1.0 + x1 * x1 + g.xi(j2) * g.xi(j2), 0.5 * k);
            sup = std::max(sup, w * std::abs(u_hat.values[g.index(j1, j2)]));
        }
    }
    return sup;
}

inline double scattering_norm(FftEngine& eng, const ComplexField& u, double k) {
    ComplexField v = eng.forward(u);
    return scattering_norm_from_hat(v, k);
}

inline double energy(FftEngine& eng, const ComplexField& u, const NonlinearityParams& p,
                     EnergySign sign) {
    require_space(u, Space::Physical, "energy");
    ComplexField v = eng.forward(u);
    const SpectralGrid& g = *u.grid;
    double kin = 0;
    for (int j1 = 0; j1 < g.n; ++j1) {
        const double x1 = g.xi(j1);
        for (int j2 = 0; j2 < g.n; ++j2)
            kin += bracket2(x1, g.xi(j2)) * std::norm(v.values[g.index(j1, j2)]);
    }
    kin *= 0.5 * g.dxi * g.dxi / ((2.0 * kPi) * (2.0 * kPi));
    double quart = 0;
    if (p.lambda != 0.0) {
        HartreeWorkspace ws(eng, p);
        ComplexField W = ws.potential(u);
        double acc = 0;
        for (std::size_t i = 0; i < u.size(); ++i)
            acc += W.values[i].real() * std::norm(u.values[i]);
        quart = 0.25 * p.lambda * g.h * g.h * acc;
    }
    return kin + (sign == EnergySign::PaperPlus ? quart : -quart);
}

struct WeightedNorms {
    double e1 = 0, e2 = 0;
    double hn = 0;
    double x_moment_l2 = 0;  // ||x f||_{L^2}, for the Gaussian-moment oracle
    bool boundary_warn = false;
};

/// E1 = ||u||_{H^n_d} + ||x f||_{H^2}, E2 = ||x (x) x f||_{H^2} with
/// f = e^{it<D>} u. Weights use the box coordinate; validity is guarded by a
/// boundary-mass warning (mass of |x f| within 2 cells of the boundary above
/// 1e-8 of the total).
inline WeightedNorms weighted_norms(FftEngine& eng, const ComplexField& u, double t,
                                    const IndexBundle& idx) {
    require_space(u, Space::Physical, "weighted_norms");
    const SpectralGrid& g = *u.grid;
    ComplexField fhat = eng.forward(u);
    // f = e^{+it<xi>} u_hat, back to physical space
    for (int j1 = 0; j1 < g.n; ++j1) {
        const double x1 = g.xi(j1);
        for (int j2 = 0; j2 < g.n; ++j2) {
            const double ph = t * bracket2(x1, g.xi(j2));
            fhat.values[g.index(j1, j2)] *= complexd(std::cos(ph), std::sin(ph));
        }
    }
    WeightedNorms out;
    {
        ComplexField uh = eng.forward(u);
        out.hn = detail::hs_norm_from_hat(uh, double(idx.sobolev_order));
    }
    ComplexField f = eng.inverse(fhat);

    auto weighted = [&](int p1, int p2) {
        ComplexField w(g, Space::Physical);
        for (int i1 = 0; i1 < g.n; ++i1) {
            const double a = (p1 == 0) ? 1.0 : std::pow(g.x(i1), p1);
            for (int i2 = 0; i2 < g.n; ++i2) {
                const double b = (p2 == 0) ? 1.0 : std::pow(g.x(i2), p2);
                const std::size_t q = g.index(i1, i2);
                w.values[q] = a * b * f.values[q];
            }
        }
        return w;
    };
    auto h2_of = [&](const ComplexField& w) {
        ComplexField v = eng.forward(w);
        return detail::hs_norm_from_hat(v, 2.0);
    };

    ComplexField x1f = weighted(1, 0), x2f = weighted(0, 1);
    const double n1 = h2_of(x1f), n2 = h2_of(x2f);
    out.e1 = out.hn + std::hypot(n1, n2);
    {
        double acc = 0;
        for (std::size_t i = 0; i < x1f.size(); ++i)
            acc += std::norm(x1f.values[i]) + std::norm(x2f.values[i]);
        out.x_moment_l2 = g.h * std::sqrt(acc);
    }
    const double n11 = h2_of(weighted(2, 0));
    const double n12 = h2_of(weighted(1, 1));
    const double n22 = h2_of(weighted(0, 2));
    out.e2 = std::sqrt(n11 * n11 + 2.0 * n12 * n12 + n22 * n22);

    // Boundary-mass check on |x f|.
    double total = 0, edge = 0;
    for (int i1 = 0; i1 < g.n; ++i1) {
        const bool e1edge = (i1 < 2 || i1 >= g.n - 2);
        for (int i2 = 0; i2 < g.n; ++i2) {
            const std::size_t q = g.index(i1, i2);
            const double m =
                (g.x(i1) * g.x(i1) + g.x(i2) * g.x(i2)) * std::norm(f.values[q]);
            total += m;
            if (e1edge || i2 < 2 || i2 >= g.n - 2) edge += m;
        }
    }
    out.boundary_warn = (total > 0.0) && (edge > 1e-8 * total);
    return out;
}

/// ||u||_{W^{l,inf}} = max over |alpha| <= l of ||d^alpha u||_inf, spectral
/// derivatives. Returns levels 0..l_max at once (the sups nest).
inline std::vector<double> wk_inf_norms(FftEngine& eng, const ComplexField& u, int l_max) {
    require_space(u, Space::Physical, "wk_inf_norm");
    ComplexField uh = eng.forward(u);
    std::vector<double> by_level(std::size_t(l_max) + 1, 0.0);
    ComplexField work(*u.grid, Space::Frequency);
    for (int a1 = 0; a1 <= l_max; ++a1) {
        for (int a2 = 0; a1 + a2 <= l_max; ++a2) {
            double sup;
            if (a1 == 0 && a2 == 0) {
                sup = detail::sup_abs(u);
            } else {
                MultiplierSymbol d = derivative_symbol(*u.grid, a1, a2);
                work.values = uh.values;
                multiply_in_place(work, d);
                sup = detail::sup_abs(eng.inverse(work));
            }
            for (int l = a1 + a2; l <= l_max; ++l)
                by_level[std::size_t(l)] = std::max(by_level[std::size_t(l)], sup);
        }
    }
    return by_level;
}

inline double wk_inf_norm(FftEngine& eng, const ComplexField& u, int l) {
    return wk_inf_norms(eng, u, l).back();
}

/// Full record for one snapshot. l_max picks how far the W^{l,inf} ladder is
/// evaluated (the CSV always carries l = 1..4; the linear report wants l up
/// to k_index).
inline DiagnosticsRecord diagnostics_record(FftEngine& eng, const ComplexField& u, double t,
                                            const NonlinearityParams& p, const IndexBundle& idx,
                                            int l_max = 4) {
    DiagnosticsRecord r;
    r.t = t;
    r.mass = mass_norm(u);
    r.energy_paper = energy(eng, u, p, EnergySign::PaperPlus);
    r.energy_cons = energy(eng, u, p, EnergySign::ConservedMinus);
    r.wk = wk_inf_norms(eng, u, l_max);
    r.sup_norm = r.wk[0];
    WeightedNorms wn = weighted_norms(eng, u, t, idx);
    r.hn = wn.hn;
    r.e1 = wn.e1;
    r.e2 = wn.e2;
    r.boundary_warn = wn.boundary_warn;
    r.s_norm = scattering_norm(eng, u, idx.k_index);
    const double bt = bracket(t);
    r.ratio_e1 = std::pow(bt, -idx.delta0) * r.e1;
    r.ratio_e2 = std::pow(bt, -2.0 * idx.delta0) * r.e2;
    return r;
}

}  // namespace relhartree
