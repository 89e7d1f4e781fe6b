#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "relhartree/diagnostics.hpp"
#include "relhartree/hartree.hpp"
#include "relhartree/scattering.hpp"

namespace relhartree {

enum class Integrator { Strang, RK4Ref };

struct RunPlan {
    double dt = 0.01;
    double t_end = 1.0;
    std::vector<double> output_times;  // increasing, multiples of dt
    Integrator integrator = Integrator::Strang;
    double guard_margin = 4.0;
    bool enforce_guard = true;
};

/// Time t, physical-space solution, accumulated phase correction B on the
/// tracked frequency set, and run parameters.
struct SimState {
    double t = 0;
    ComplexField u;
    BTracker B;
    NonlinearityParams nl;
    IndexBundle idx;

    SimState(const SpectralGrid& g, const NonlinearityParams& p, const IndexBundle& ib,
             const ScatteringParams& sp)
        : u(g, Space::Physical), B(g, p.lambda, ib.n_index, sp), nl(p), idx(ib) {}
};

/// Radius containing all but 1e-8 of the initial mass; enters the wrap-around
/// guard t_end + r0 + margin < L (group speed |xi|/<xi> < 1 bounds signal travel).
inline double effective_radius(const ComplexField& u) {
    require_space(u, Space::Physical, "effective_radius");
    const SpectralGrid& g = *u.grid;
    std::vector<std::pair<double, double>> rm;
    rm.reserve(u.size());
    double total = 0;
    for (int i1 = 0; i1 < g.n; ++i1) {
        for (int i2 = 0; i2 < g.n; ++i2) {
            const double m = std::norm(u.values[g.index(i1, i2)]);
            if (m > 0.0) rm.push_back({std::hypot(g.x(i1), g.x(i2)), m});
            total += m;
        }
    }
    if (total == 0.0) return 0.0;
    std::sort(rm.begin(), rm.end());
    double acc = 0;
    const double cut = (1.0 - 1e-8) * total;
    for (const auto& [r, m] : rm) {
        acc += m;
        if (acc >= cut) return r;
    }
    return rm.back().first;
}

struct GuardInfo {
    double r0 = 0, margin = 0, t_max = 0;
    bool enforced = true;
    bool satisfied(double t) const { return !enforced || t <= t_max; }
};

inline GuardInfo make_guard(const ComplexField& u0, const RunPlan& plan) {
    GuardInfo gi;
    gi.r0 = effective_radius(u0);
    gi.margin = plan.guard_margin;
    gi.t_max = u0.grid->L - gi.r0 - gi.margin;
    gi.enforced = plan.enforce_guard;
    return gi;
}

using Observer = std::function<void(const SimState&)>;

/// Drives the run. Keeps the spectral state at step boundaries so each Strang
/// step costs four transforms and |u_hat(s)|^2 is available to the B
/// quadrature for free.
class Evolver {
  public:
    Evolver(FftEngine& eng, const NonlinearityParams& p)
        : eng_(&eng), hart_(eng, p), nl_(p),
          spec_(eng.grid(), Space::Frequency), phi_(eng.grid().size()) {}

    FftEngine& engine() { return *eng_; }
    HartreeWorkspace& hartree() { return hart_; }

    /// One Strang step u <- e^{-i(dt/2)<D>} K_dt e^{-i(dt/2)<D>} u with the
    /// exact frozen-potential kick K_dt. Pure function of (state.u, dt).
    void strang_step(SimState& s, double dt) {
        half_kinetic(s.u, dt);
        hart_.nonlinear_phase_step(s.u, dt);
        half_kinetic(s.u, dt);
        s.t += dt;
    }

    /// Classical RK4 on du/dt = rhs(u); cross-validation oracle, not mass-exact.
    void rk4_reference_step(SimState& s, double dt) {
        if (dt == 0.0) return;
        const std::size_t n = s.u.size();
        ComplexField k1 = hart_.rhs(s.u);
        ComplexField u2 = s.u;
        for (std::size_t i = 0; i < n; ++i) u2.values[i] += 0.5 * dt * k1.values[i];
        ComplexField k2 = hart_.rhs(u2);
        ComplexField u3 = s.u;
        for (std::size_t i = 0; i < n; ++i) u3.values[i] += 0.5 * dt * k2.values[i];
        ComplexField k3 = hart_.rhs(u3);
        ComplexField u4 = s.u;
        for (std::size_t i = 0; i < n; ++i) u4.values[i] += dt * k3.values[i];
        ComplexField k4 = hart_.rhs(u4);
        for (std::size_t i = 0; i < n; ++i)
            s.u.values[i] += dt / 6.0 * (k1.values[i] + 2.0 * k2.values[i] +
                                         2.0 * k3.values[i] + k4.values[i]);
        s.t += dt;
    }

    /// Advance to plan.t_end, invoking observers at each output time with a
    /// consistent physical-space snapshot and accumulating B once per step.
    /// NaN: halt with the state rolled back to the last finite snapshot.
    void run(SimState& s, const RunPlan& plan, const std::vector<Observer>& observers) {
        if (!(plan.dt > 0)) throw ConfigError("evolve: dt must be positive");
        if (plan.t_end < s.t) throw ConfigError("evolve: t_end before current time");
        GuardInfo gi = make_guard(s.u, plan);
        if (!gi.satisfied(plan.t_end))
            throw NumericalError(
                "wrap guard violated: t_end + r0 + margin = " +
                std::to_string(plan.t_end + gi.r0 + gi.margin) +
                " >= L = " + std::to_string(s.u.grid->L));

        const long nsteps = std::lround((plan.t_end - s.t) / plan.dt);
        if (std::abs(s.t + nsteps * plan.dt - plan.t_end) > 1e-9 * std::max(1.0, plan.t_end))
            throw ConfigError("evolve: t_end must be an integer number of dt steps");
        std::vector<long> out_steps;
        for (double to : plan.output_times) {
            const long k = std::lround((to - s.t) / plan.dt);
            if (k < 0 || k > nsteps || std::abs(s.t + k * plan.dt - to) > 1e-9 * std::max(1.0, to))
                throw ConfigError("evolve: output time " + std::to_string(to) +
                                  " is not on the step grid");
            out_steps.push_back(k);
        }

        if (plan.integrator == Integrator::RK4Ref) {
            run_rk4(s, plan, observers, nsteps, out_steps);
            return;
        }

        // Spectral state at step boundaries.
        eng_->forward_raw(s.u.values.data(), spec_.values.data());
        const bool track_b = (nl_.lambda != 0.0) && !s.B.points().empty();
        if (track_b) {
            fill_phi();
            s.B.prime(phi_, s.t);
        }
        emit(s, observers, out_steps, 0);

        ComplexField last_good = s.u;
        double last_good_t = s.t;
        const MultiplierSymbol half = half_wave_symbol(eng_->grid(), 0.5 * plan.dt);
        const double t0 = s.t;
        for (long k = 1; k <= nsteps; ++k) {
            const double t_next = t0 + k * plan.dt;
            if (!gi.satisfied(t_next))
                throw NumericalError("wrap guard violated at t = " + std::to_string(t_next));
            multiply_in_place(spec_, half);
            eng_->inverse_raw(spec_.values.data(), s.u.values.data());
            hart_.nonlinear_phase_step(s.u, plan.dt);
            eng_->forward_raw(s.u.values.data(), spec_.values.data());
            multiply_in_place(spec_, half);
            s.t = t_next;

            double m2 = 0;
            for (const auto& v : spec_.values) m2 += std::norm(v);
            if (!std::isfinite(m2)) {
                s.u = last_good;
                s.t = last_good_t;
                throw NumericalError("NaN detected at t = " + std::to_string(t_next) +
                                     "; state rolled back to t = " + std::to_string(last_good_t));
            }
            if (track_b) {
                fill_phi();
                s.B.accumulate_step(phi_, s.t, plan.dt);
            }
            if (emit(s, observers, out_steps, k)) {
                last_good = s.u;
                last_good_t = s.t;
            }
        }
        eng_->inverse_raw(spec_.values.data(), s.u.values.data());
    }

    /// Spectral state of the running solution (valid during observer calls).
    const ComplexField& spectral_state() const { return spec_; }

  private:
    void half_kinetic(ComplexField& u, double dt) {
        ComplexField v = eng_->forward(u);
        const SpectralGrid& g = eng_->grid();
        const double a = -0.5 * dt;
        for (int j1 = 0; j1 < g.n; ++j1) {
            const double x1 = g.xi(j1);
            for (int j2 = 0; j2 < g.n; ++j2) {
                const double ph = a * bracket2(x1, g.xi(j2));
                v.values[g.index(j1, j2)] *= complexd(std::cos(ph), std::sin(ph));
            }
        }
        u = eng_->inverse(v);
    }

    void fill_phi() {
        for (std::size_t i = 0; i < spec_.size(); ++i) phi_[i] = std::norm(spec_.values[i]);
    }

    bool emit(SimState& s, const std::vector<Observer>& obs, const std::vector<long>& out_steps,
              long k) {
        bool is_output = false;
        for (long os : out_steps) is_output = is_output || (os == k);
        if (is_output) {
            eng_->inverse_raw(spec_.values.data(), s.u.values.data());
            for (const auto& o : obs) o(s);
        }
        return is_output;
    }

    void run_rk4(SimState& s, const RunPlan& plan, const std::vector<Observer>& observers,
                 long nsteps, const std::vector<long>& out_steps) {
        // Reference path: physical-space state throughout.
        auto emit_rk = [&](long k) {
            for (long os : out_steps)
                if (os == k)
                    for (const auto& o : observers) o(s);
        };
        const bool track_b = (nl_.lambda != 0.0) && !s.B.points().empty();
        auto update_phi = [&] {
            eng_->forward_raw(s.u.values.data(), spec_.values.data());
            fill_phi();
        };
        if (track_b) {
            update_phi();
            s.B.prime(phi_, s.t);
        }
        emit_rk(0);
        for (long k = 1; k <= nsteps; ++k) {
            rk4_reference_step(s, plan.dt);
            if (track_b) {
                update_phi();
                s.B.accumulate_step(phi_, s.t, plan.dt);
            }
            emit_rk(k);
        }
    }

    FftEngine* eng_;
    HartreeWorkspace hart_;
    NonlinearityParams nl_;
    ComplexField spec_;
    dvector phi_;
};

// Spec-surface wrappers.
inline void strang_step(Evolver& ev, SimState& s, double dt) { ev.strang_step(s, dt); }
inline void rk4_reference_step(Evolver& ev, SimState& s, double dt) { ev.rk4_reference_step(s, dt); }
inline void evolve(Evolver& ev, SimState& s, const RunPlan& plan,
                   const std::vector<Observer>& observers) {
    ev.run(s, plan, observers);
}

}  // namespace relhartree
