#pragma once
// Weighted space-time norms of solution states, scaling-invariant sup norms,
// and per-time Lᵖ bound checks against the decay rates the solution spaces
// imply.
//
// All spatial measurements are restricted to the ball |x| ≤ L/4 (minimal-image
// radius) so that box periodicity cannot contaminate weighted integrals; a
// wrap guard flags any result whose integrand carries ≥ 1% of its mass in the
// outer shell L/8 < |x| ≤ L/4, where wrap-around would first show up.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "field.hpp"
#include "operators.hpp"
#include "state.hpp"

namespace bouss::diag {

using spectral::Grid;
using spectral::SpectralScalar;
using spectral::SpectralVector;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Which field of a solution state a norm measures.
enum class Quantity { U, Theta, Omega };

inline const char* to_string(Quantity q) {
    switch (q) {
        case Quantity::U: return "u";
        case Quantity::Theta: return "theta";
        case Quantity::Omega: return "omega";
    }
    return "?";
}

inline Quantity quantity_from_string(const std::string& s) {
    if (s == "u") return Quantity::U;
    if (s == "theta") return Quantity::Theta;
    if (s == "omega") return Quantity::Omega;
    throw std::invalid_argument("unknown quantity: " + s);
}

/// Specification of a weighted norm ‖|x|^a ∇^b (·)‖_p.
struct NormSpec {
    Quantity quantity = Quantity::U;
    double a = 0.0; ///< spatial weight exponent, ≥ 0
    int b = 0;      ///< derivative order, ≥ 0
    double p = 2.0; ///< Lebesgue exponent in [2, ∞]

    void validate() const {
        if (!(a >= 0.0) || !std::isfinite(a))
            throw std::invalid_argument("NormSpec: weight exponent a must satisfy a >= 0");
        if (b < 0) throw std::invalid_argument("NormSpec: derivative order b must satisfy b >= 0");
        if (!(p >= 2.0))
            throw std::invalid_argument("NormSpec: integrability p must satisfy 2 <= p <= inf");
    }
};

/// A measured norm value plus the wrap-guard verdict.
struct WeightedValue {
    double value = 0.0;
    double outer_fraction = 0.0; ///< share of integrand mass in L/8 < |x| ≤ L/4
    bool wrap_flagged = false;   ///< true when outer_fraction ≥ 1%
};

namespace detail {

/// Pointwise Euclidean magnitude of a list of physical-space components.
inline std::vector<double> magnitude(const std::vector<std::vector<double>>& comps) {
    if (comps.empty()) return {};
    std::vector<double> m(comps.front().size(), 0.0);
    for (const auto& c : comps) {
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += c[i] * c[i];
    }
    for (auto& v : m) v = std::sqrt(v);
    return m;
}

/// Expand a set of spectral scalars by b gradient levels and return the
/// physical-space components of the full derivative tensor.
inline std::vector<std::vector<double>> derivative_components(std::vector<SpectralScalar> comps,
                                                              int b) {
    for (int level = 0; level < b; ++level) {
        std::vector<SpectralScalar> next;
        next.reserve(comps.size() * 3);
        for (const auto& c : comps) {
            SpectralVector g = spectral::gradient(c);
            for (int j = 0; j < 3; ++j) next.push_back(std::move(g[j]));
        }
        comps = std::move(next);
    }
    std::vector<std::vector<double>> phys;
    phys.reserve(comps.size());
    for (const auto& c : comps) phys.push_back(c.to_physical());
    return phys;
}

/// Restricted Lᵖ norm of weight(r)·mag(x) over the ball r ≤ L/4, with the
/// outer-shell mass fraction for the wrap guard.  For p = ∞ the value is the
/// grid maximum and the mass fraction uses the L¹ mass of the weighted field.
template <class WeightFn>
WeightedValue restricted_lp(const Grid& g, const std::vector<double>& mag, double p,
                            WeightFn&& weight) {
    const int n = g.n();
    const double cutoff = g.box() / 4.0;
    const double inner = g.box() / 8.0;
    const double dv = g.spacing() * g.spacing() * g.spacing();
    const bool sup = std::isinf(p);

    double total = 0.0, outer = 0.0, peak = 0.0;
    for (int iz = 0; iz < n; ++iz) {
        const double z = g.coord(iz);
        for (int iy = 0; iy < n; ++iy) {
            const double y = g.coord(iy);
            std::size_t idx = (std::size_t(iz) * n + iy) * n;
            for (int ix = 0; ix < n; ++ix, ++idx) {
                const double x = g.coord(ix);
                const double r = std::sqrt(x * x + y * y + z * z);
                if (r > cutoff) continue;
                const double v = weight(r) * mag[idx];
                if (sup) {
                    peak = std::max(peak, v);
                    total += v;
                    if (r > inner) outer += v;
                } else {
                    const double vp = std::pow(v, p);
                    total += vp;
                    if (r > inner) outer += vp;
                }
            }
        }
    }
    WeightedValue out;
    if (total > 0.0) {
        out.outer_fraction = outer / total;
        out.wrap_flagged = out.outer_fraction >= 0.01;
    }
    out.value = sup ? peak : std::pow(total * dv, 1.0 / p);
    return out;
}

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace detail

/// ‖|x|^a ∇^b f‖_p over |x| ≤ L/4 for an explicit list of field components.
inline WeightedValue weighted_norm_of(std::vector<SpectralScalar> comps, double a, int b,
                                      double p) {
    if (comps.empty()) throw std::invalid_argument("weighted_norm: no components");
    const auto grid = comps.front().grid();
    const auto mag = detail::magnitude(detail::derivative_components(std::move(comps), b));
    return detail::restricted_lp(*grid, mag, p,
                                 [a](double r) { return a == 0.0 ? 1.0 : std::pow(r, a); });
}

inline WeightedValue weighted_norm(const SpectralScalar& f, double a, int b, double p) {
    return weighted_norm_of({f}, a, b, p);
}

inline WeightedValue weighted_norm(const SpectralVector& v, double a, int b, double p) {
    return weighted_norm_of({v[0], v[1], v[2]}, a, b, p);
}

/// ‖|x|^a ∇^b q(state)‖_p with q selected by spec.quantity (ω = curl u).
inline WeightedValue weighted_norm(const solver::State& st, const NormSpec& spec) {
    spec.validate();
    switch (spec.quantity) {
        case Quantity::U: return weighted_norm(st.u, spec.a, spec.b, spec.p);
        case Quantity::Theta: return weighted_norm(st.theta, spec.a, spec.b, spec.p);
        case Quantity::Omega: return weighted_norm(spectral::curl(st.u), spec.a, spec.b, spec.p);
    }
    throw std::logic_error("weighted_norm: unreachable");
}

/// The scaling-invariant sup norms of one state:
///   x_norm = sup (√t+|x|)·|u|,   y_norm = sup (√t+|x|)³·|θ|,
/// both over |x| ≤ L/4.  Trajectory norms are the maxima over states.
struct ScalingNorms {
    WeightedValue x_norm;
    WeightedValue y_norm;
};

inline ScalingNorms scaling_invariant_norms(const solver::State& st) {
    const auto& g = *st.grid();
    const double rt = std::sqrt(std::max(st.t, 0.0));
    const auto umag = detail::magnitude(
        {st.u[0].to_physical(), st.u[1].to_physical(), st.u[2].to_physical()});
    const auto tmag = detail::magnitude({st.theta.to_physical()});
    ScalingNorms out;
    out.x_norm = detail::restricted_lp(g, umag, kInfinity, [rt](double r) { return rt + r; });
    out.y_norm = detail::restricted_lp(g, tmag, kInfinity, [rt](double r) {
        const double w = rt + r;
        return w * w * w;
    });
    return out;
}

/// Solution spaces whose membership implies per-time Lᵖ decay bounds.
/// X-type spaces constrain u, Y-type spaces constrain θ:
///   X:       |u| ≤ C (√t+|x|)⁻¹                      → ‖u(s)‖_q ≲ s^{−1/2+3/(2q)},   q > 3
///   Y:       |θ| ≤ C (√t+|x|)⁻³                      → ‖θ(s)‖_q ≲ s^{−3/2+3/(2q)},   q > 1
///   Xa:      |u| ≤ C inf_{0≤η≤a} |x|^{−η}(1+t)^{(η−1)/2} → (1+s)^{−1/2+3/(2q)},      q > 3/a
///   Yb:      |θ| ≤ C inf_{0≤η≤b} |x|^{−η}(1+t)^{(η−3)/2} → (1+s)^{−3/2+3/(2q)},      q > 3/b
///   XaTilde: |u| ≤ C inf_{0≤η≤a} |x|^{−η}(1+t)^{(η−2)/2} → (1+s)^{−1+3/(2q)},        q > 3/a
///   YbTilde: |θ| ≤ C inf_{0≤η≤b} |x|^{−η}(1+t)^{(η−4)/2} → (1+s)^{−2+3/(2q)},        q > 3/b
enum class SpaceKind { X, Y, Xa, Yb, XaTilde, YbTilde };

inline const char* to_string(SpaceKind k) {
    switch (k) {
        case SpaceKind::X: return "X";
        case SpaceKind::Y: return "Y";
        case SpaceKind::Xa: return "X_a";
        case SpaceKind::Yb: return "Y_b";
        case SpaceKind::XaTilde: return "X~_a";
        case SpaceKind::YbTilde: return "Y~_b";
    }
    return "?";
}

struct SpaceSpec {
    SpaceKind kind = SpaceKind::X;
    double param = 0.0; ///< the decay exponent a (X-type) or b (Y-type); unused for X, Y

    void validate() const {
        switch (kind) {
            case SpaceKind::X:
            case SpaceKind::Y: return;
            case SpaceKind::Xa:
            case SpaceKind::XaTilde:
                if (!(param >= 1.0))
                    throw std::invalid_argument("SpaceSpec: X_a spaces require a >= 1");
                return;
            case SpaceKind::Yb:
                if (!(param >= 3.0))
                    throw std::invalid_argument("SpaceSpec: Y_b requires b >= 3");
                return;
            case SpaceKind::YbTilde:
                if (!(param >= 4.0))
                    throw std::invalid_argument("SpaceSpec: Y~_b requires b >= 4");
                return;
        }
    }

    bool velocity_space() const {
        return kind == SpaceKind::X || kind == SpaceKind::Xa || kind == SpaceKind::XaTilde;
    }

    /// True when the decay rate is a power of (1+s) rather than s.
    bool shifted_time() const { return kind != SpaceKind::X && kind != SpaceKind::Y; }

    /// Smallest admissible Lᵖ order (exclusive bound).
    double q_lower_bound() const {
        switch (kind) {
            case SpaceKind::X: return 3.0;
            case SpaceKind::Y: return 1.0;
            default: return 3.0 / param;
        }
    }

    /// Exponent of the decay rate s^rate (or (1+s)^rate) the space implies
    /// for ‖·(s)‖_q.
    double rate_exponent(double q) const {
        const double tail = std::isinf(q) ? 0.0 : 3.0 / (2.0 * q);
        switch (kind) {
            case SpaceKind::X:
            case SpaceKind::Xa: return -0.5 + tail;
            case SpaceKind::Y:
            case SpaceKind::Yb: return -1.5 + tail;
            case SpaceKind::XaTilde: return -1.0 + tail;
            case SpaceKind::YbTilde: return -2.0 + tail;
        }
        return 0.0;
    }

    /// Pointwise membership weight at time t and radius r: the reciprocal of
    /// the pointwise bound with C = 1, so the membership norm is the
    /// restricted sup of weight·|field|.
    double membership_weight(double t, double r) const {
        const double rt1 = std::sqrt(1.0 + t);
        const double z = r / rt1;
        switch (kind) {
            case SpaceKind::X: return std::sqrt(std::max(t, 0.0)) + r;
            case SpaceKind::Y: {
                const double w = std::sqrt(std::max(t, 0.0)) + r;
                return w * w * w;
            }
            case SpaceKind::Xa: return rt1 * std::max(1.0, std::pow(z, param));
            case SpaceKind::Yb: return rt1 * rt1 * rt1 * std::max(1.0, std::pow(z, param));
            case SpaceKind::XaTilde: return (1.0 + t) * std::max(1.0, std::pow(z, param));
            case SpaceKind::YbTilde: {
                const double s1 = 1.0 + t;
                return s1 * s1 * std::max(1.0, std::pow(z, param));
            }
        }
        return 0.0;
    }
};

/// Membership norm of one state in the given space (restricted sup).
inline WeightedValue membership_norm(const solver::State& st, const SpaceSpec& space) {
    space.validate();
    const auto& g = *st.grid();
    const double t = st.t;
    std::vector<double> mag =
        space.velocity_space()
            ? detail::magnitude(
                  {st.u[0].to_physical(), st.u[1].to_physical(), st.u[2].to_physical()})
            : detail::magnitude({st.theta.to_physical()});
    return detail::restricted_lp(g, mag, kInfinity, [&space, t](double r) {
        return space.membership_weight(t, r);
    });
}

/// Result of checking ‖·(s)‖_q against the decay rate the space implies.
struct LpBoundReport {
    SpaceSpec space;
    double q = 2.0;
    double rate = 0.0;     ///< exponent of the predicted decay rate
    bool shifted_time = false;
    double membership = 0.0;
    std::vector<std::pair<double, double>> ratios; ///< (s, ‖·(s)‖_q / (membership·rate(s)))
    double max_ratio = 0.0;
    double median_ratio = 0.0;
    bool wrap_flagged = false;
    bool pass = false;
};

/// For every sampled state, compare the restricted Lᵠ norm with
/// membership·s^rate.  Passes when all ratios are finite and the max/median
/// spread stays within 10× over the window (existence-of-constant check).
inline LpBoundReport lp_bound_check(const solver::Trajectory& traj, const SpaceSpec& space,
                                    double q) {
    space.validate();
    if (traj.empty()) throw std::invalid_argument("lp_bound_check: empty trajectory");
    const double qmin = space.q_lower_bound();
    if (!(q > qmin))
        throw std::invalid_argument(std::string("lp_bound_check: q outside admissible range for ") +
                                    to_string(space.kind) + " (requires q > " +
                                    std::to_string(qmin) + ")");

    LpBoundReport rep;
    rep.space = space;
    rep.q = q;
    rep.rate = space.rate_exponent(q);
    rep.shifted_time = space.shifted_time();

    double membership = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto m = membership_norm(traj.node(i), space);
        membership = std::max(membership, m.value);
        rep.wrap_flagged = rep.wrap_flagged || m.wrap_flagged;
    }
    rep.membership = membership;
    if (!(membership > 0.0) || !std::isfinite(membership)) {
        rep.pass = false;
        return rep;
    }

    std::vector<double> vals;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& st = traj.node(i);
        const double s = st.t;
        if (!rep.shifted_time && s <= 0.0) continue; // s^rate undefined at s = 0
        const double base = rep.shifted_time ? 1.0 + s : s;
        const double predicted = membership * std::pow(base, rep.rate);
        std::vector<double> mag =
            space.velocity_space()
                ? detail::magnitude(
                      {st.u[0].to_physical(), st.u[1].to_physical(), st.u[2].to_physical()})
                : detail::magnitude({st.theta.to_physical()});
        const auto lq = detail::restricted_lp(*st.grid(), mag, q, [](double) { return 1.0; });
        rep.wrap_flagged = rep.wrap_flagged || lq.wrap_flagged;
        const double ratio = lq.value / predicted;
        rep.ratios.emplace_back(s, ratio);
        vals.push_back(ratio);
    }
    if (vals.empty()) {
        rep.pass = false;
        return rep;
    }
    rep.max_ratio = *std::max_element(vals.begin(), vals.end());
    rep.median_ratio = detail::median(vals);
    rep.pass = std::isfinite(rep.max_ratio) &&
               (rep.median_ratio == 0.0 ? rep.max_ratio == 0.0
                                        : rep.max_ratio / rep.median_ratio <= 10.0);
    return rep;
}

} // namespace bouss::diag
