#pragma once
// Parabolic interpolation-inequality check for fractional heat flows.
//
// For u solving ∂_t u + (−Δ)^α u = f with α > 1/2, the gradient obeys
//
//   sup_{t/2≤τ≤t} ‖∇u(τ)‖_p ≤ C·A^{1/(2α)}·B^{1−1/(2α)} + C·t^{−1/(2α)}·A,
//
// where A = sup_{t/4≤τ≤t} ‖u(τ)‖_p and B = sup_{t/4≤τ≤t} τ‖f(τ)‖_p.  The
// check evaluates the LHS/RHS ratio (with C = 1) on a sampled flow family and
// reports its stability: a bounded, stable ratio is the observable form of
// "such a constant C exists".

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "norms.hpp"
#include "operators.hpp"

namespace bouss::diag {

/// One sampled state of the flow: time, field, and ‖f(τ)‖_p of the forcing
/// (zero for the free flow).
struct FlowSample {
    double t;
    SpectralScalar u;
    double forcing_lp = 0.0;

    FlowSample(double time, SpectralScalar field, double flp = 0.0)
        : t(time), u(std::move(field)), forcing_lp(flp) {}
};

struct InterpolationEntry {
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

struct InterpolationReport {
    double alpha = 1.0;
    double p = 2.0;
    std::vector<InterpolationEntry> entries;
    double max_ratio = 0.0;
    double median_ratio = 0.0;
    bool inconsistent = false; ///< RHS = 0 with LHS ≠ 0 somewhere
    bool pass = false;
};

namespace detail {

/// Unrestricted Lᵖ norm over the full box of a pointwise magnitude array.
inline double plain_lp(const Grid& g, const std::vector<double>& mag, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : mag) m = std::max(m, v);
        return m;
    }
    const double dv = g.spacing() * g.spacing() * g.spacing();
    double s = 0.0;
    for (double v : mag) s += std::pow(v, p);
    return std::pow(s * dv, 1.0 / p);
}

} // namespace detail

/// Evaluate the interpolation inequality on a time-sorted family of flow
/// samples.  A time t is checkable when sampling reaches back to t/4; the
/// discrete sups run over the stored samples inside each window.
inline InterpolationReport interpolation_check(double alpha, double p,
                                               const std::vector<FlowSample>& family) {
    if (!(alpha > 0.5))
        throw std::invalid_argument("interpolation_check: requires alpha > 1/2");
    if (!(p >= 1.0)) throw std::invalid_argument("interpolation_check: requires p >= 1");
    if (family.size() < 2)
        throw std::invalid_argument("interpolation_check: needs at least two samples");
    for (std::size_t i = 1; i < family.size(); ++i)
        if (!(family[i].t > family[i - 1].t))
            throw std::invalid_argument("interpolation_check: sample times must increase");
    if (!(family.front().t > 0.0))
        throw std::invalid_argument("interpolation_check: sample times must be positive");

    // Per-sample norms, computed once.
    std::vector<double> ulp, glp;
    ulp.reserve(family.size());
    glp.reserve(family.size());
    for (const auto& s : family) {
        const auto& g = *s.u.grid();
        ulp.push_back(detail::plain_lp(g, detail::magnitude({s.u.to_physical()}), p));
        const SpectralVector grad = spectral::gradient(s.u);
        glp.push_back(detail::plain_lp(
            g, detail::magnitude({grad[0].to_physical(), grad[1].to_physical(),
                                  grad[2].to_physical()}),
            p));
    }

    InterpolationReport rep;
    rep.alpha = alpha;
    rep.p = p;
    const double inv2a = 1.0 / (2.0 * alpha);

    std::vector<double> ratios;
    for (std::size_t e = 0; e < family.size(); ++e) {
        const double t = family[e].t;
        if (family.front().t > t / 4.0) continue; // window [t/4, t] not covered
        double lhs = 0.0, a_sup = 0.0, b_sup = 0.0;
        for (std::size_t i = 0; i <= e; ++i) {
            const double tau = family[i].t;
            if (tau < t / 4.0) continue;
            a_sup = std::max(a_sup, ulp[i]);
            b_sup = std::max(b_sup, tau * family[i].forcing_lp);
            if (tau >= t / 2.0) lhs = std::max(lhs, glp[i]);
        }
        InterpolationEntry entry;
        entry.t = t;
        entry.lhs = lhs;
        entry.rhs = std::pow(a_sup, inv2a) * std::pow(b_sup, 1.0 - inv2a) +
                    std::pow(t, -inv2a) * a_sup;
        if (entry.rhs > 0.0) {
            entry.ratio = lhs / entry.rhs;
        } else if (lhs > 0.0) {
            rep.inconsistent = true;
            entry.ratio = kInfinity;
        }
        ratios.push_back(entry.ratio);
        rep.entries.push_back(entry);
    }

    if (!ratios.empty()) {
        rep.max_ratio = *std::max_element(ratios.begin(), ratios.end());
        rep.median_ratio = detail::median(ratios);
    }
    rep.pass = !rep.inconsistent && !rep.entries.empty() && std::isfinite(rep.max_ratio) &&
               (rep.median_ratio > 0.0 ? rep.max_ratio / rep.median_ratio <= 10.0
                                       : rep.max_ratio == 0.0);
    return rep;
}

} // namespace bouss::diag
