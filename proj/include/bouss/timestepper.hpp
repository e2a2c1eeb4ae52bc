#pragma once
// Integrating-factor Heun (RK2) time stepper.
//
// With Λ = e^{−Δt|ξ|²} and N(û, θ̂) the projected quadratic + buoyancy terms,
//   k₁ = N(û_n),   (û*, θ̂*) = Λ (û_n + Δt k₁),
//   û_{n+1} = Λ û_n + (Δt/2)(Λ k₁ + k₂),   k₂ = N(û*).
// The heat factor is exact, so with the quadratic terms off the scheme
// reproduces the linear mild identity  û(t) = e^{tΔ}û₀ + t e^{tΔ}P(θ̂₀e₃)
// to rounding at every step.
//
// A blow-up guard scans coefficients periodically; on NaN/overflow the
// stepper aborts with the last finite stored state attached.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "state.hpp"

namespace bouss::solver {

struct TimestepConfig {
    double dt = 1e-2;
    double t_max = 1.0;
    bool nonlinear = true; // quadratic terms in both equations
    bool buoyancy = true;  // P(θ e₃) forcing in the velocity equation
    std::vector<double> store_times; // states kept in the returned trajectory
                                     // (t = 0 and t_max are always kept)
    std::function<void(const State&)> observer; // called at every stored state
    int check_interval = 16;                    // steps between finiteness scans

    std::string canonical() const {
        std::string s = "timestep;dt=" + std::to_string(dt) + ";t_max=" + std::to_string(t_max) +
                        ";nonlinear=" + (nonlinear ? "1" : "0") +
                        ";buoyancy=" + (buoyancy ? "1" : "0") + ";store=";
        for (double t : store_times) s += std::to_string(t) + ",";
        return s;
    }
};

class SolverBlowup : public std::runtime_error {
  public:
    SolverBlowup(std::string msg, Trajectory last_good)
        : std::runtime_error(std::move(msg)), partial(std::move(last_good)) {}
    Trajectory partial; // trajectory up to the last finite stored state
};

namespace detail {

/// Projected forcing N_u = P(f̂·[nonlinear] + θ̂e₃·[buoyancy]), N_θ = ĝ·[nonlinear].
inline std::pair<SpectralVector, SpectralScalar> timestep_rhs(const SpectralVector& u,
                                                              const SpectralScalar& th,
                                                              bool nonlinear, bool buoyancy) {
    GridPtr gp = u.grid();
    SpectralVector fu(gp);
    SpectralScalar fth(gp);
    if (nonlinear) {
        auto [f, g] = spectral::nonlinear_terms(u, th);
        fu = std::move(f);
        fth = std::move(g);
    }
    if (buoyancy)
        for (std::size_t i = 0; i < fu[2].size(); ++i) fu[2][i] += th[i];
    spectral::leray_project(fu);
    return {std::move(fu), std::move(fth)};
}

} // namespace detail

/// March the system from (u₀, θ₀) to t_max, storing the requested times.
/// Store times must coincide with step multiples (tolerance dt·1e-6).
inline Trajectory timestep_solve(const SpectralVector& u0_in, const SpectralScalar& th0,
                                 const TimestepConfig& cfg) {
    if (cfg.dt <= 0.0 || cfg.t_max <= 0.0)
        throw std::invalid_argument("timestep_solve: dt and t_max must be positive");
    GridPtr gp = u0_in.grid();
    const Grid& g = *gp;

    const long nsteps = std::lround(cfg.t_max / cfg.dt);
    if (nsteps < 1 || std::abs(nsteps * cfg.dt - cfg.t_max) > 1e-9 * cfg.t_max)
        throw std::invalid_argument("timestep_solve: t_max must be a multiple of dt");
    std::vector<long> store_steps;
    for (double t : cfg.store_times) {
        const long k = std::lround(t / cfg.dt);
        if (k < 0 || k > nsteps || std::abs(k * cfg.dt - t) > 1e-6 * cfg.dt)
            throw std::invalid_argument("timestep_solve: store time " + std::to_string(t) +
                                        " is not a step multiple");
        store_steps.push_back(k);
    }
    store_steps.push_back(0);
    store_steps.push_back(nsteps);
    std::sort(store_steps.begin(), store_steps.end());
    store_steps.erase(std::unique(store_steps.begin(), store_steps.end()), store_steps.end());

    SpectralVector u = u0_in;
    spectral::dealias(u);
    spectral::leray_project(u);
    SpectralScalar th = th0;
    spectral::dealias(th);

    // Per-mode heat factor for one step.
    std::vector<double> lambda(g.spec_size());
    g.for_each_mode([&](std::size_t idx, int ikx, int ky, int kz) {
        const double xx = g.xi(ikx), xy = g.xi(ky), xz = g.xi(kz);
        lambda[idx] = std::exp(-cfg.dt * (xx * xx + xy * xy + xz * xz));
    });

    Trajectory traj("timestep", fnv64_hex(cfg.canonical()));
    auto store = [&](long step) {
        State s(gp, step * cfg.dt);
        s.u = u;
        s.theta = th;
        if (cfg.observer) cfg.observer(s);
        traj.add(std::move(s));
    };

    std::size_t next_store = 0;
    if (store_steps[next_store] == 0) {
        store(0);
        ++next_store;
    }

    for (long step = 0; step < nsteps; ++step) {
        auto [k1u, k1t] = detail::timestep_rhs(u, th, cfg.nonlinear, cfg.buoyancy);

        SpectralVector us = u;
        us.axpy(cfg.dt, k1u);
        SpectralScalar ths = th;
        ths.axpy(cfg.dt, k1t);
        for (std::size_t i = 0; i < lambda.size(); ++i) {
            for (int c = 0; c < 3; ++c) us[c][i] *= lambda[i];
            ths[i] *= lambda[i];
        }

        auto [k2u, k2t] = detail::timestep_rhs(us, ths, cfg.nonlinear, cfg.buoyancy);

        const double hd = 0.5 * cfg.dt;
        for (std::size_t i = 0; i < lambda.size(); ++i) {
            for (int c = 0; c < 3; ++c)
                u[c][i] = lambda[i] * (u[c][i] + hd * k1u[c][i]) + hd * k2u[c][i];
            th[i] = lambda[i] * (th[i] + hd * k1t[i]) + hd * k2t[i];
        }

        const long done = step + 1;
        const bool storing =
            next_store < store_steps.size() && store_steps[next_store] == done;
        if (storing || done % cfg.check_interval == 0 || done == nsteps) {
            if (!u.finite() || !th.finite())
                throw SolverBlowup("timestep_solve: non-finite state at t = " +
                                       std::to_string(done * cfg.dt) +
                                       "; returning trajectory up to the last finite state",
                                   std::move(traj));
        }
        if (storing) {
            store(done);
            ++next_store;
        }
    }
    return traj;
}

} // namespace bouss::solver
