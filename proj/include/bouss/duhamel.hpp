#pragma once
// Duhamel integrals of the mild formulations.
//
// Each operator is an integral ∫₀ᵗ w(t−s) e^{(t−s)Δ} [quadratic or linear
// term](s) ds with weight w ≡ 1 or w(τ) = τ.  The integrand is smooth in s
// but steepens toward s = t (the heat factor's decay rate vanishes there),
// so panels are graded with ratio 2 toward the upper endpoint: the finest
// panel of width Δ_min sits at s = t and widths double moving toward s = 0.
// Each graded panel is subdivided into `splits` equal parts carrying a
// Gauss–Legendre rule; doubling `splits` halves every panel width, which is
// the refinement axis used by convergence checks.
//
// Integrand states between trajectory nodes come from the trajectory's
// integrating-factor reconstruction (see state.hpp).

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "quadrature.hpp"
#include "state.hpp"

namespace bouss::solver {

struct QuadratureSpec {
    double min_panel = 0.0; // finest panel width at s = t; 0 → t/32 at call time
    int gl_order = 3;       // Gauss–Legendre nodes per subpanel
    int splits = 1;         // equal subdivisions of each graded panel

    std::string canonical() const {
        return "min_panel=" + std::to_string(min_panel) + ";gl_order=" + std::to_string(gl_order) +
               ";splits=" + std::to_string(splits);
    }
};

/// Quadrature samples (s_i, w_i) for ∫₀ᵗ · ds with ratio-2 grading toward
/// s = t.  `breakpoints` lists times where the integrand is only C⁰ (the
/// trajectory node times: reconstruction kinks); panels are additionally cut
/// there so every Gauss–Legendre panel sees a smooth integrand and the rule
/// keeps its full convergence order under `splits` refinement.
inline std::vector<std::pair<double, double>> duhamel_samples(
    double t, const QuadratureSpec& q, const std::vector<double>& breakpoints = {}) {
    if (t < 0.0) throw std::invalid_argument("duhamel_samples: t must be nonnegative");
    std::vector<std::pair<double, double>> out;
    if (t == 0.0) return out;
    if (q.gl_order < 1 || q.splits < 1)
        throw std::invalid_argument("duhamel_samples: gl_order and splits must be >= 1");
    const double dmin = (q.min_panel > 0.0) ? std::min(q.min_panel, t) : t / 32.0;

    // Graded panel edges, built from s = t downward: widths dmin, 2·dmin, ...
    std::vector<double> edges{t};
    double hi = t, w = dmin;
    while (hi > 0.0) {
        const double lo = (hi - w > 0.25 * w) ? hi - w : 0.0; // absorb tiny last sliver
        edges.push_back(lo);
        hi = lo;
        w *= 2.0;
    }
    for (double b : breakpoints)
        if (b > 1e-14 * t && b < t * (1.0 - 1e-14)) edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [t](double a, double b) { return std::abs(a - b) < 1e-13 * t; }),
                edges.end());

    const QuadRule& rule = gauss_legendre(q.gl_order);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p], b = edges[p + 1];
        const double sub = (b - a) / q.splits;
        for (int m = 0; m < q.splits; ++m) {
            const double lo = a + m * sub, mid = lo + 0.5 * sub, half = 0.5 * sub;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i)
                out.emplace_back(mid + half * rule.nodes[i], half * rule.weights[i]);
        }
    }
    return out;
}

namespace detail {

/// Breakpoint list for integrands built from one or two trajectories.
inline std::vector<double> node_breakpoints(const Trajectory& a, const Trajectory* b = nullptr) {
    std::vector<double> bp = a.times();
    if (b) {
        const auto tb = b->times();
        bp.insert(bp.end(), tb.begin(), tb.end());
    }
    std::sort(bp.begin(), bp.end());
    return bp;
}

} // namespace detail

namespace detail {

enum class HeatWeight { Plain, TimeWeighted }; // e^{−τ|ξ|²} vs τ e^{−τ|ξ|²}

/// Per-mode weights w_quad · e^{−(t−s)|ξ|²} (one exp sweep per sample; shared
/// by every accumulator of that sample).
inline std::vector<double> heat_weights(const Grid& g, double t, double s, double w_quad) {
    std::vector<double> w(g.spec_size());
    g.for_each_mode([&](std::size_t idx, int ikx, int ky, int kz) {
        const double xx = g.xi(ikx), xy = g.xi(ky), xz = g.xi(kz);
        w[idx] = w_quad * std::exp(-(t - s) * (xx * xx + xy * xy + xz * xz));
    });
    return w;
}

inline void accumulate_weighted(SpectralScalar& acc, const SpectralScalar& field,
                                const std::vector<double>& w, double factor = 1.0) {
    const std::size_t n = acc.size();
    for (std::size_t i = 0; i < n; ++i) acc[i] += factor * w[i] * field[i];
}

inline void accumulate_weighted(SpectralVector& acc, const SpectralVector& field,
                                const std::vector<double>& w, double factor = 1.0) {
    for (int c = 0; c < 3; ++c) accumulate_weighted(acc[c], field[c], w, factor);
}

/// acc += w_quad · w(t−s) e^{−(t−s)|ξ|²} · field, one mode sweep.
inline void accumulate_heat(SpectralScalar& acc, const SpectralScalar& field, double t, double s,
                            double w_quad, HeatWeight hw) {
    const auto w = heat_weights(*acc.grid(), t, s, w_quad);
    accumulate_weighted(acc, field, w, hw == HeatWeight::TimeWeighted ? t - s : 1.0);
}

inline void accumulate_heat(SpectralVector& acc, const SpectralVector& field, double t, double s,
                            double w_quad, HeatWeight hw) {
    const auto w = heat_weights(*acc.grid(), t, s, w_quad);
    accumulate_weighted(acc, field, w, hw == HeatWeight::TimeWeighted ? t - s : 1.0);
}

/// Symmetric case: f̂ = −iξ_a (û_a u_b) via the 6 distinct products only.
inline SpectralVector symmetric_tensor_divergence(const SpectralVector& u) {
    GridPtr gp = u.grid();
    const Grid& g = *gp;
    std::array<std::vector<double>, 3> up{u[0].to_physical(), u[1].to_physical(),
                                          u[2].to_physical()};
    std::vector<double> prod(g.real_size());
    std::array<SpectralScalar, 6> T{SpectralScalar(gp), SpectralScalar(gp), SpectralScalar(gp),
                                    SpectralScalar(gp), SpectralScalar(gp), SpectralScalar(gp)};
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) {
            for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = up[a][i] * up[b][i];
            SpectralScalar& dst = T[spectral::QuadraticProducts::sym_index(a, b)];
            g.forward(prod.data(), dst.data());
            spectral::dealias(dst);
        }
    SpectralVector f(gp);
    const std::complex<double> I(0.0, 1.0);
    g.for_each_mode([&](std::size_t idx, int ikx, int ky, int kz) {
        const double xi[3] = {g.xi(ikx), g.xi(ky), g.xi(kz)};
        for (int b = 0; b < 3; ++b) {
            std::complex<double> s(0.0, 0.0);
            for (int a = 0; a < 3; ++a)
                s += xi[a] * T[spectral::QuadraticProducts::sym_index(a, b)][idx];
            f[b][idx] = -I * s;
        }
    });
    return f;
}

/// Dealiased tensor product T_ab = u_a v_b and its divergence −iξ_a T_ab.
inline SpectralVector pair_tensor_divergence(const SpectralVector& u, const SpectralVector& v) {
    GridPtr gp = u.grid();
    const Grid& g = *gp;
    std::array<std::vector<double>, 3> up{u[0].to_physical(), u[1].to_physical(),
                                          u[2].to_physical()};
    std::array<std::vector<double>, 3> vp{v[0].to_physical(), v[1].to_physical(),
                                          v[2].to_physical()};
    std::vector<double> prod(g.real_size());
    std::array<std::array<SpectralScalar, 3>, 3> T{
        {{SpectralScalar(gp), SpectralScalar(gp), SpectralScalar(gp)},
         {SpectralScalar(gp), SpectralScalar(gp), SpectralScalar(gp)},
         {SpectralScalar(gp), SpectralScalar(gp), SpectralScalar(gp)}}};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = up[a][i] * vp[b][i];
            g.forward(prod.data(), T[a][b].data());
            spectral::dealias(T[a][b]);
        }
    SpectralVector f(gp);
    const std::complex<double> I(0.0, 1.0);
    g.for_each_mode([&](std::size_t idx, int ikx, int ky, int kz) {
        const double xi[3] = {g.xi(ikx), g.xi(ky), g.xi(kz)};
        for (int b = 0; b < 3; ++b) {
            std::complex<double> s(0.0, 0.0);
            for (int a = 0; a < 3; ++a) s += xi[a] * T[a][b][idx];
            f[b][idx] = -I * s;
        }
    });
    return f;
}

/// ĝ = −iξ·(θ̂u) from dealiased physical products.
inline SpectralScalar flux_divergence(const SpectralScalar& th, const SpectralVector& u) {
    GridPtr gp = u.grid();
    const Grid& g = *gp;
    const auto thp = th.to_physical();
    std::vector<double> prod(g.real_size());
    std::array<SpectralScalar, 3> Q{SpectralScalar(gp), SpectralScalar(gp), SpectralScalar(gp)};
    for (int a = 0; a < 3; ++a) {
        const auto ua = u[a].to_physical();
        for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = thp[i] * ua[i];
        g.forward(prod.data(), Q[a].data());
        spectral::dealias(Q[a]);
    }
    SpectralScalar gg(gp);
    const std::complex<double> I(0.0, 1.0);
    g.for_each_mode([&](std::size_t idx, int ikx, int ky, int kz) {
        gg[idx] = -I * (g.xi(ikx) * Q[0][idx] + g.xi(ky) * Q[1][idx] + g.xi(kz) * Q[2][idx]);
    });
    return gg;
}

inline void check_coverage(const Trajectory& tr, double t, const char* op) {
    if (tr.empty() || tr.front().t > 1e-12 || tr.back().t + 1e-9 * (1.0 + t) < t)
        throw std::out_of_range(std::string(op) +
                                ": trajectory does not cover the integration range [0, " +
                                std::to_string(t) + "]");
}

} // namespace detail

/// B(u, v)(t) = −∫₀ᵗ e^{(t−s)Δ} P ∇·(u ⊗ v)(s) ds.
inline SpectralVector duhamel_B(const Trajectory& u, const Trajectory& v, double t,
                                const QuadratureSpec& q = {}) {
    detail::check_coverage(u, t, "duhamel_B");
    detail::check_coverage(v, t, "duhamel_B");
    const bool same = (&u == &v);
    SpectralVector acc(u.front().grid());
    const auto bp = detail::node_breakpoints(u, same ? nullptr : &v);
    for (const auto& [s, w] : duhamel_samples(t, q, bp)) {
        const State us = u.state_at(s);
        const SpectralVector f = same
                                     ? detail::symmetric_tensor_divergence(us.u)
                                     : detail::pair_tensor_divergence(us.u, v.state_at(s).u);
        detail::accumulate_heat(acc, f, t, s, w, detail::HeatWeight::Plain);
    }
    spectral::leray_project(acc);
    return acc;
}

/// L(θ)(t) = ∫₀ᵗ e^{(t−s)Δ} P (θ(s) e₃) ds  (classical buoyancy term).
inline SpectralVector duhamel_L(const Trajectory& th, double t, const QuadratureSpec& q = {}) {
    detail::check_coverage(th, t, "duhamel_L");
    SpectralScalar acc(th.front().grid());
    for (const auto& [s, w] : duhamel_samples(t, q, detail::node_breakpoints(th)))
        detail::accumulate_heat(acc, th.state_at(s).theta, t, s, w, detail::HeatWeight::Plain);
    SpectralVector out(th.front().grid());
    out[2] = acc;
    spectral::leray_project(out);
    return out;
}

/// E(u, θ)(t) = −∫₀ᵗ (t−s) e^{(t−s)Δ} P [(∇·(θu))(s) e₃] ds, the correction
/// term of the buoyancy-integrated formulation.
inline SpectralVector duhamel_E(const Trajectory& u, const Trajectory& th, double t,
                                const QuadratureSpec& q = {}) {
    detail::check_coverage(u, t, "duhamel_E");
    detail::check_coverage(th, t, "duhamel_E");
    SpectralScalar acc(u.front().grid());
    const auto bp = detail::node_breakpoints(u, &th);
    for (const auto& [s, w] : duhamel_samples(t, q, bp)) {
        const State us = u.state_at(s);
        const State ts = th.state_at(s);
        // flux_divergence returns ĝ = −∇·(θu)^, so the operator's −∫(∇·(θu))e₃
        // becomes +∫ ĝ e₃.
        const SpectralScalar gg = detail::flux_divergence(ts.theta, us.u);
        detail::accumulate_heat(acc, gg, t, s, w, detail::HeatWeight::TimeWeighted);
    }
    SpectralVector out(u.front().grid());
    out[2] = acc;
    spectral::leray_project(out);
    return out;
}

/// B̃(θ, u)(t) = −∫₀ᵗ e^{(t−s)Δ} ∇·(θ u)(s) ds.
inline SpectralScalar duhamel_Btilde(const Trajectory& th, const Trajectory& u, double t,
                                     const QuadratureSpec& q = {}) {
    detail::check_coverage(th, t, "duhamel_Btilde");
    detail::check_coverage(u, t, "duhamel_Btilde");
    SpectralScalar acc(th.front().grid());
    const auto bp = detail::node_breakpoints(th, &u);
    for (const auto& [s, w] : duhamel_samples(t, q, bp)) {
        const State us = u.state_at(s);
        const State ts = th.state_at(s);
        const SpectralScalar gg = detail::flux_divergence(ts.theta, us.u);
        detail::accumulate_heat(acc, gg, t, s, w, detail::HeatWeight::Plain);
    }
    return acc;
}

} // namespace bouss::solver
