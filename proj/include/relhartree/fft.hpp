#pragma once

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <thread>

#include "relhartree/grid.hpp"

namespace relhartree {

namespace detail {
inline void fftw_threads_init_once(int nthreads) {
    static std::once_flag flag;
    std::call_once(flag, [] { fftw_init_threads(); });
    fftw_plan_with_nthreads(nthreads);
}
}  // namespace detail

/// Scaled 2D transforms matching the continuum convention
///   u_hat(xi) = int e^{-i x.xi} u(x) dx,   u(x) = (2pi)^-2 int e^{+i x.xi} u_hat dxi,
/// approximated as u_hat(xi_j) = h^2 sum_m e^{-i x_m.xi_j} u(x_m) on the
/// math-order lattice. The shift to FFT index order is folded into (-1)^{m1+m2}
/// pre/post modulations, which keeps every symbol definition on the math-order
/// lattice and avoids Nyquist bookkeeping.
///
/// Not thread-safe: each engine owns one scratch buffer. Plans use
/// FFTW_ESTIMATE so the algorithm choice is reproducible across runs.
class FftEngine {
  public:
    explicit FftEngine(const SpectralGrid& g, int nthreads = 1)
        : grid_(&g), buf_(g.size()) {
        nthreads = std::max(1, nthreads);
        detail::fftw_threads_init_once(nthreads);
        auto* b = reinterpret_cast<fftw_complex*>(buf_.data());
        fwd_ = fftw_plan_dft_2d(g.n, g.n, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(g.n, g.n, b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftEngine() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    FftEngine(const FftEngine&) = delete;
    FftEngine& operator=(const FftEngine&) = delete;

    const SpectralGrid& grid() const { return *grid_; }

    ComplexField forward(const ComplexField& u) {
        require_space(u, Space::Physical, "forward_ft");
        require_same_grid(*u.grid, *grid_, "forward_ft");
        ComplexField out(*grid_, Space::Frequency);
        forward_raw(u.values.data(), out.values.data());
        return out;
    }

    ComplexField inverse(const ComplexField& v) {
        require_space(v, Space::Frequency, "inverse_ft");
        require_same_grid(*v.grid, *grid_, "inverse_ft");
        ComplexField out(*grid_, Space::Physical);
        inverse_raw(v.values.data(), out.values.data());
        return out;
    }

    // Unchecked buffer-to-buffer variants for hot loops. in == out is allowed.
    void forward_raw(const complexd* in, complexd* out) {
        const int n = grid_->n;
        const double scale = grid_->h * grid_->h;
        modulate_into_buf(in, n);
        fftw_execute(fwd_);
        modulate_out_of_buf(out, n, scale);
    }

    void inverse_raw(const complexd* in, complexd* out) {
        const int n = grid_->n;
        const double s = grid_->dxi / (2.0 * kPi);
        const double scale = s * s;
        modulate_into_buf(in, n);
        fftw_execute(bwd_);
        modulate_out_of_buf(out, n, scale);
    }

  private:
    void modulate_into_buf(const complexd* in, int n) {
        for (int i = 0; i < n; ++i) {
            const double ri = (i & 1) ? -1.0 : 1.0;
            const std::size_t row = std::size_t(i) * n;
            for (int j = 0; j < n; ++j) {
                const double s = (j & 1) ? -ri : ri;
                buf_[row + j] = s * in[row + j];
            }
        }
    }
    void modulate_out_of_buf(complexd* out, int n, double scale) {
        for (int i = 0; i < n; ++i) {
            const double ri = (i & 1) ? -scale : scale;
            const std::size_t row = std::size_t(i) * n;
            for (int j = 0; j < n; ++j) {
                const double s = (j & 1) ? -ri : ri;
                out[row + j] = s * buf_[row + j];
            }
        }
    }

    const SpectralGrid* grid_;
    cvector buf_;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

inline ComplexField forward_ft(FftEngine& eng, const ComplexField& u) { return eng.forward(u); }
inline ComplexField inverse_ft(FftEngine& eng, const ComplexField& v) { return eng.inverse(v); }

}  // namespace relhartree
