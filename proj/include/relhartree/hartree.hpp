#pragma once

#include <cmath>

#include "relhartree/fft.hpp"
#include "relhartree/riesz.hpp"

namespace relhartree {

struct NonlinearityParams {
    double lambda = 0.1;
    double gamma = 1.0;
    bool dealias = true;  // 2/3-rule truncation of F(|u|^2)

    void validate() const {
        if (!std::isfinite(lambda))
            throw ConfigError("NonlinearityParams: lambda must be finite");
        if (!(gamma > 0.0 && gamma < 2.0))
            throw ConfigError("NonlinearityParams: gamma must lie in (0,2)");
    }
};

/// Workspace for W = |x|^-gamma * |u|^2 evaluated spectrally on the torus:
/// W = F^-1( K_gamma(eta) . F(|u|^2) ), K the lattice Riesz symbol with the
/// zero mode gauged to 0. |u|^2 doubles the bandwidth, so the 2/3-rule mask
/// is applied to F(|u|^2) before the kernel multiply (toggleable).
class HartreeWorkspace {
  public:
    HartreeWorkspace(FftEngine& eng, const NonlinearityParams& p)
        : eng_(&eng), params_(p), kernel_(riesz_kernel_symbol(eng.grid(), p.gamma)),
          density_(eng.grid().size()), wbuf_(eng.grid().size()) {
        p.validate();
        const SpectralGrid& g = eng.grid();
        mask_.assign(g.size(), 1.0);
        const int cut = g.n / 3;  // keep centered indices |j - n/2| <= n/3
        for (int j1 = 0; j1 < g.n; ++j1)
            for (int j2 = 0; j2 < g.n; ++j2)
                if (std::abs(j1 - g.n / 2) > cut || std::abs(j2 - g.n / 2) > cut)
                    mask_[g.index(j1, j2)] = 0.0;
    }

    const NonlinearityParams& params() const { return params_; }

    /// W as a complex physical field (imaginary part is roundoff residue).
    ComplexField potential(const ComplexField& u) {
        require_space(u, Space::Physical, "hartree_potential");
        require_same_grid(*u.grid, eng_->grid(), "hartree_potential");
        const std::size_t sz = u.size();
        for (std::size_t i = 0; i < sz; ++i) {
            density_[i] = complexd(std::norm(u.values[i]), 0.0);
        }
        eng_->forward_raw(density_.data(), wbuf_.data());
        if (params_.dealias) {
            for (std::size_t i = 0; i < sz; ++i) wbuf_[i] *= mask_[i];
        }
        for (std::size_t i = 0; i < sz; ++i) wbuf_[i] *= kernel_.values[i];
        ComplexField W(eng_->grid(), Space::Physical);
        eng_->inverse_raw(wbuf_.data(), W.values.data());
        return W;
    }

    /// Real part of W straight into `out` (the substep only uses Re W).
    void potential_real(const ComplexField& u, dvector& out) {
        ComplexField W = potential(u);
        out.resize(W.size());
        for (std::size_t i = 0; i < W.size(); ++i) out[i] = W.values[i].real();
    }

    /// du/dt = -i <D> u + i lambda W u. Reference integrator only.
    ComplexField rhs(const ComplexField& u) {
        require_space(u, Space::Physical, "rhs");
        ComplexField v = eng_->forward(u);
        const SpectralGrid& g = eng_->grid();
        for (int j1 = 0; j1 < g.n; ++j1) {
            const double x1 = g.xi(j1);
            for (int j2 = 0; j2 < g.n; ++j2) {
                v.values[g.index(j1, j2)] *= bracket2(x1, g.xi(j2));
            }
        }
        ComplexField du = eng_->inverse(v);  // <D> u
        const complexd I(0.0, 1.0);
        if (params_.lambda != 0.0) {
            ComplexField W = potential(u);
            for (std::size_t i = 0; i < u.size(); ++i)
                du.values[i] = -I * du.values[i] + I * params_.lambda * W.values[i].real() * u.values[i];
        } else {
            for (std::size_t i = 0; i < u.size(); ++i) du.values[i] = -I * du.values[i];
        }
        return du;
    }

    /// Exact frozen-potential substep u <- e^{i lambda W dt} u. |u| is
    /// conserved pointwise (W constant during the substep), so mass is exact.
    void nonlinear_phase_step(ComplexField& u, double dt) {
        require_space(u, Space::Physical, "nonlinear_phase_step");
        if (dt == 0.0 || params_.lambda == 0.0) return;
        potential_real(u, wreal_);
        const double a = params_.lambda * dt;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double ph = a * wreal_[i];
            u.values[i] *= complexd(std::cos(ph), std::sin(ph));
        }
    }

  private:
    FftEngine* eng_;
    NonlinearityParams params_;
    MultiplierSymbol kernel_;
    cvector density_, wbuf_;
    dvector mask_, wreal_;
};

// Spec-surface wrappers (construct a workspace per call; fine for tests).
inline ComplexField hartree_potential(FftEngine& eng, const ComplexField& u,
                                      const NonlinearityParams& p) {
    return HartreeWorkspace(eng, p).potential(u);
}
inline ComplexField rhs(FftEngine& eng, const ComplexField& u, const NonlinearityParams& p) {
    return HartreeWorkspace(eng, p).rhs(u);
}
inline ComplexField nonlinear_phase_step(FftEngine& eng, const ComplexField& u,
                                         const NonlinearityParams& p, double dt) {
    ComplexField out = u;
    HartreeWorkspace(eng, p).nonlinear_phase_step(out, dt);
    return out;
}

}  // namespace relhartree
