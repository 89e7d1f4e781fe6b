#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "relhartree/bump.hpp"
#include "relhartree/epstein.hpp"
#include "relhartree/fft.hpp"
#include "relhartree/fitting.hpp"
#include "relhartree/multiplier.hpp"

namespace relhartree {

/// |xi/<xi> - sigma/<sigma>|^{-1}. Positive, symmetric; the diagonal is
/// rejected here, the quadrature owns the singular cell.
inline double z_kernel(std::array<double, 2> xi, std::array<double, 2> sigma) {
    const double bx = bracket2(xi[0], xi[1]);
    const double bs = bracket2(sigma[0], sigma[1]);
    const double z1 = xi[0] / bx - sigma[0] / bs;
    const double z2 = xi[1] / bx - sigma[1] / bs;
    const double z = std::hypot(z1, z2);
    if (z == 0.0)
        throw ConfigError("z_kernel: diagonal input xi == sigma");
    return 1.0 / z;
}

enum class SingularCellMode { Omit, Disc, Lattice };

inline const char* to_string(SingularCellMode m) {
    switch (m) {
        case SingularCellMode::Omit: return "omit";
        case SingularCellMode::Disc: return "disc";
        default: return "lattice";
    }
}

/// Coefficient C such that the cell containing sigma = xi contributes
/// C * dxi * phi(xi) to the sigma-integral (phi = |u_hat|^2).
///   Omit:    0.
///   Disc:    (2 pi r_eff)/|det J| with pi r_eff^2 = dxi^2, i.e. 2 sqrt(pi)/|det J|.
///   Lattice: -Z_Q(1/2), the Epstein-zeta regularization of the local form
///            Q = |J j|^2. This cancels the O(dxi) defect of the punctured
///            midpoint sum exactly, not just the omitted cell (the disc model
///            restores ~91% of the constant at xi=0; see the oracle report).
inline double singular_cell_coefficient(SingularCellMode mode, double xi1, double xi2) {
    switch (mode) {
        case SingularCellMode::Omit:
            return 0.0;
        case SingularCellMode::Disc:
            return 2.0 * std::sqrt(kPi) / direction_map_det(xi1, xi2);
        case SingularCellMode::Lattice:
        default:
            return -epstein_zeta_half(direction_map_form(xi1, xi2));
    }
}

struct TrackedPoint {
    int j1 = 0, j2 = 0;          // lattice indices (math order)
    double xi1 = 0, xi2 = 0;     // frequency coordinates
    std::size_t flat = 0;
    bool metric = false;         // participates in Cauchy sup-metrics
    double cell_coeff = 0;       // singular-cell coefficient for this xi
};

struct ScatteringParams {
    std::vector<std::array<double, 2>> probe_xis;  // snapped to the lattice
    bool full_lattice = false;
    int coarsen = 16;            // sublattice stride (centered indices)
    double metric_xi_cap = 4.0;  // sup-metrics restricted to |xi| <= cap
    SingularCellMode cell_mode = SingularCellMode::Lattice;
    double sigma_rel_floor = 1e-16;  // drop sigma rows below floor*max|u_hat|^2
};

/// Accumulates the phase correction
///   B(t,xi) = (lambda/(2pi)^2) int_0^t [ int |xi/<xi>-sigma/<sigma>|^{-1}
///             |u_hat(s,sigma)|^2 dsigma ] rho(s^{-2/n} xi) / <s> ds
/// on a tracked set of lattice points (probes + coarsened sublattice, or the
/// full lattice). The sigma-integral is a lattice quadrature with a
/// singular-cell replacement; the time integral is a per-step trapezoid.
class BTracker {
  public:
    BTracker() = default;
    BTracker(const SpectralGrid& g, double lambda, double n_index, const ScatteringParams& sp)
        : grid_(&g), lambda_(lambda), n_index_(n_index), params_(sp) {
        build_points();
        build_tables();
        B_.assign(pts_.size(), 0.0);
        last_rate_.assign(pts_.size(), 0.0);
    }

    const SpectralGrid& grid() const { return *grid_; }
    const std::vector<TrackedPoint>& points() const { return pts_; }
    const std::vector<double>& values() const { return B_; }
    double lambda() const { return lambda_; }
    std::size_t probe_count() const { return n_probes_; }
    const ScatteringParams& params() const { return params_; }

    /// sigma-integral int |z|^{-1} phi dsigma at tracked point p, phi = |u_hat|^2 on
    /// the lattice. Spans of sigma with phi below the relative floor are skipped.
    double sigma_integral(const dvector& phi, const TrackedPoint& p,
                          SingularCellMode mode_override) const {
        const SpectralGrid& g = *grid_;
        const int n = g.n;
        double maxphi = 0.0;
        for (std::size_t i = 0; i < phi.size(); ++i) maxphi = std::max(maxphi, phi[i]);
        const double floor = params_.sigma_rel_floor * maxphi;

        const double gx = gx_[p.flat], gy = gy_[p.flat];
        double sum = 0.0;
        for (int j1 = 0; j1 < n; ++j1) {
            const std::size_t row = std::size_t(j1) * n;
            int lo = 0, hi = n;
            while (lo < n && phi[row + lo] < floor) ++lo;
            if (lo == n) continue;
            while (hi > lo && phi[row + hi - 1] < floor) --hi;
            double rowsum = 0.0;
            for (int j2 = lo; j2 < hi; ++j2) {
                const std::size_t q = row + j2;
                const double z1 = gx - gx_[q];
                const double z2 = gy - gy_[q];
                const double r2 = z1 * z1 + z2 * z2;
                if (r2 == 0.0) continue;  // singular cell handled below
                rowsum += phi[q] / std::sqrt(r2);
            }
            sum += rowsum;
        }
        const double cell = (mode_override == params_.cell_mode)
                                ? p.cell_coeff
                                : singular_cell_coefficient(mode_override, p.xi1, p.xi2);
        return g.dxi * g.dxi * sum + g.dxi * cell * phi[p.flat];
    }

    /// dB/ds at every tracked point: (lambda/(2pi)^2) I(xi) rho(s^{-2/n} xi)/<s>.
    void rate(const dvector& phi, double s, std::vector<double>& out) const {
        out.assign(pts_.size(), 0.0);
        if (lambda_ == 0.0) return;
        const double pref = lambda_ / ((2.0 * kPi) * (2.0 * kPi)) / bracket(s);
        const double scale = (s > 0.0) ? std::pow(s, -2.0 / n_index_) : -1.0;
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t ip = 0; ip < std::ptrdiff_t(pts_.size()); ++ip) {
            const TrackedPoint& p = pts_[std::size_t(ip)];
            const double r = std::hypot(p.xi1, p.xi2);
            double cutoff;
            if (s > 0.0) cutoff = bump(scale * r);
            else cutoff = (r == 0.0) ? 1.0 : 0.0;  // s->0+ limit of rho(s^{-2/n} xi)
            if (cutoff == 0.0) continue;
            out[std::size_t(ip)] =
                pref * cutoff * sigma_integral(phi, p, params_.cell_mode);
        }
    }

    /// Install the rate at the initial time (B(0) = 0).
    void prime(const dvector& phi0, double s0) {
        rate(phi0, s0, last_rate_);
        primed_ = true;
    }

    /// One accepted step [s, s+dt]: B += trapezoid(rate(s), rate(s+dt)) dt.
    void accumulate_step(const dvector& phi_new, double s_new, double dt) {
        if (!primed_)
            throw NumericalError("BTracker: accumulate_step before prime");
        rate(phi_new, s_new, rate_buf_);
        for (std::size_t i = 0; i < B_.size(); ++i)
            B_[i] += 0.5 * (last_rate_[i] + rate_buf_[i]) * dt;
        last_rate_.swap(rate_buf_);
    }

    void reset() {
        std::fill(B_.begin(), B_.end(), 0.0);
        primed_ = false;
    }

    std::optional<std::size_t> find_point(int j1, int j2) const {
        for (std::size_t i = 0; i < pts_.size(); ++i)
            if (pts_[i].j1 == j1 && pts_[i].j2 == j2) return i;
        return std::nullopt;
    }

  private:
    void add_point(int j1, int j2, bool metric) {
        const SpectralGrid& g = *grid_;
        for (auto& p : pts_) {
            if (p.j1 == j1 && p.j2 == j2) {
                p.metric = p.metric || metric;
                return;
            }
        }
        TrackedPoint p;
        p.j1 = j1;
        p.j2 = j2;
        p.xi1 = g.xi(j1);
        p.xi2 = g.xi(j2);
        p.flat = g.index(j1, j2);
        p.metric = metric;
        p.cell_coeff = singular_cell_coefficient(params_.cell_mode, p.xi1, p.xi2);
        pts_.push_back(p);
    }

    void build_points() {
        const SpectralGrid& g = *grid_;
        const int n = g.n;
        // Probes first (snapped to the nearest lattice point).
        for (auto& q : params_.probe_xis) {
            int j1 = std::clamp(int(std::lround(q[0] / g.dxi)) + n / 2, 0, n - 1);
            int j2 = std::clamp(int(std::lround(q[1] / g.dxi)) + n / 2, 0, n - 1);
            q = {g.xi(j1), g.xi(j2)};
            add_point(j1, j2, std::hypot(q[0], q[1]) <= params_.metric_xi_cap);
        }
        n_probes_ = pts_.size();
        if (params_.full_lattice) {
            for (int j1 = 0; j1 < n; ++j1)
                for (int j2 = 0; j2 < n; ++j2) add_point(j1, j2, true);
            return;
        }
        const int c = std::max(1, params_.coarsen);
        for (int j1 = n / 2 % c; j1 < n; j1 += c) {
            for (int j2 = n / 2 % c; j2 < n; j2 += c) {
                if (std::hypot(g.xi(j1), g.xi(j2)) <= params_.metric_xi_cap)
                    add_point(j1, j2, true);
            }
        }
    }

    void build_tables() {
        const SpectralGrid& g = *grid_;
        gx_.resize(g.size());
        gy_.resize(g.size());
        for (int j1 = 0; j1 < g.n; ++j1) {
            const double x1 = g.xi(j1);
            for (int j2 = 0; j2 < g.n; ++j2) {
                const double x2 = g.xi(j2);
                const double b = bracket2(x1, x2);
                gx_[g.index(j1, j2)] = x1 / b;
                gy_[g.index(j1, j2)] = x2 / b;
            }
        }
    }

    const SpectralGrid* grid_ = nullptr;
    double lambda_ = 0.0;
    double n_index_ = 1000.0;
    ScatteringParams params_;
    std::vector<TrackedPoint> pts_;
    std::size_t n_probes_ = 0;
    std::vector<double> B_, last_rate_, rate_buf_;
    dvector gx_, gy_;
    bool primed_ = false;
};

/// (t, f_hat, v) triple: f_hat = e^{it<xi>} u_hat on the full lattice,
/// v = e^{-iB} f_hat on the tracked set.
struct ProfileSnapshot {
    double t = 0;
    ComplexField f_hat;          // full lattice
    std::vector<complexd> v;     // aligned with tracker points
    std::vector<double> B;       // ditto
    const BTracker* tracker = nullptr;
};

inline ProfileSnapshot make_profile(double t, const ComplexField& u_hat, const BTracker& tr) {
    require_space(u_hat, Space::Frequency, "make_profile");
    ProfileSnapshot p;
    p.t = t;
    p.tracker = &tr;
    p.f_hat = u_hat;
    const SpectralGrid& g = *u_hat.grid;
    for (int j1 = 0; j1 < g.n; ++j1) {
        const double x1 = g.xi(j1);
        for (int j2 = 0; j2 < g.n; ++j2) {
            const double ph = t * bracket2(x1, g.xi(j2));
            p.f_hat.values[g.index(j1, j2)] *= complexd(std::cos(ph), std::sin(ph));
        }
    }
    p.B = tr.values();
    p.v.resize(tr.points().size());
    for (std::size_t i = 0; i < p.v.size(); ++i) {
        const double b = p.B[i];
        p.v[i] = p.f_hat.values[tr.points()[i].flat] * complexd(std::cos(b), -std::sin(b));
    }
    return p;
}

struct CauchyMetric {
    double t1 = 0, t2 = 0;
    double d_modified = 0;    // sup <xi>^k |v(t2)-v(t1)|
    double d_unmodified = 0;  // sup <xi>^k |f_hat(t2)-f_hat(t1)|
    double d_modified_gauge = 0;  // min_theta sup <xi>^k |v(t2)-e^{i theta} v(t1)|
};

namespace detail {
inline double weighted_sup_diff(const ProfileSnapshot& p1, const ProfileSnapshot& p2,
                                double k, complexd gauge, bool use_v) {
    const auto& pts = p1.tracker->points();
    double sup = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!pts[i].metric) continue;
        const double w = std::pow(1.0 + pts[i].xi1 * pts[i].xi1 + pts[i].xi2 * pts[i].xi2, 0.5 * k);
        const complexd d = use_v ? (p2.v[i] - gauge * p1.v[i])
                                 : (p2.f_hat.values[pts[i].flat] - gauge * p1.f_hat.values[pts[i].flat]);
        sup = std::max(sup, w * std::abs(d));
    }
    return sup;
}
}  // namespace detail

inline CauchyMetric cauchy_metric(const ProfileSnapshot& p1, const ProfileSnapshot& p2,
                                  double k_index) {
    if (p1.tracker != p2.tracker)
        throw ConfigError("cauchy_metric: snapshots from different trackers");
    require_same_grid(*p1.f_hat.grid, *p2.f_hat.grid, "cauchy_metric");
    if (p1.t > p2.t) throw ConfigError("cauchy_metric: requires t1 <= t2");
    CauchyMetric m;
    m.t1 = p1.t;
    m.t2 = p2.t;
    m.d_modified = detail::weighted_sup_diff(p1, p2, k_index, complexd(1.0), true);
    m.d_unmodified = detail::weighted_sup_diff(p1, p2, k_index, complexd(1.0), false);
    // Gauge quotient: coarse scan then golden-section refinement in theta.
    auto f = [&](double th) {
        return detail::weighted_sup_diff(p1, p2, k_index, std::polar(1.0, th), true);
    };
    const int nscan = 360;
    double best_th = 0.0, best = f(0.0);
    for (int i = 1; i < nscan; ++i) {
        const double th = 2.0 * kPi * i / nscan;
        const double v = f(th);
        if (v < best) { best = v; best_th = th; }
    }
    double a = best_th - 2.0 * kPi / nscan, b = best_th + 2.0 * kPi / nscan;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) { b = x2; x2 = x1; f2 = f1; x1 = b - gr * (b - a); f1 = f(x1); }
        else { a = x1; x1 = x2; f1 = f2; x2 = a + gr * (b - a); f2 = f(x2); }
    }
    m.d_modified_gauge = std::min(best, std::min(f1, f2));
    return m;
}

struct ScatteringReport {
    std::vector<CauchyMetric> rows;  // consecutive snapshot pairs
    bool free_flow = false;          // all differences at roundoff (lambda = 0)
    bool delta_defined = false;
    double delta_hat = 0, delta_stderr = 0;  // from d_modified ~ t1^{-delta}
};

inline ScatteringReport scattering_report(const std::vector<ProfileSnapshot>& snaps,
                                          double k_index) {
    if (snaps.size() < 3)
        throw ConfigError("scattering_report: needs at least 3 snapshots");
    ScatteringReport rep;
    double scale = 0.0;
    {
        const auto& p0 = snaps.front();
        for (std::size_t i = 0; i < p0.v.size(); ++i) {
            const auto& pt = p0.tracker->points()[i];
            if (!pt.metric) continue;
            const double w = std::pow(1.0 + pt.xi1 * pt.xi1 + pt.xi2 * pt.xi2, 0.5 * k_index);
            scale = std::max(scale, w * std::abs(p0.v[i]));
        }
    }
    for (std::size_t i = 0; i + 1 < snaps.size(); ++i)
        rep.rows.push_back(cauchy_metric(snaps[i], snaps[i + 1], k_index));
    double dmax = 0.0;
    for (const auto& r : rep.rows) dmax = std::max(dmax, std::max(r.d_modified, r.d_unmodified));
    if (dmax <= 1e-13 * std::max(scale, 1e-300)) {
        rep.free_flow = true;
        return rep;
    }
    std::vector<std::pair<double, double>> series;
    for (const auto& r : rep.rows)
        if (r.d_modified > 0.0 && r.t1 > 0.0) series.push_back({r.t1, r.d_modified});
    if (series.size() >= 3) {
        const auto fit = fit_log_slope(series, 0.0, 3);
        rep.delta_defined = true;
        rep.delta_hat = -fit.slope;
        rep.delta_stderr = fit.stderr_slope;
    }
    return rep;
}

}  // namespace relhartree
