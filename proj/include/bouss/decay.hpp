#pragma once
// Predicted decay exponents for weighted norms of small-data solutions, and
// log-log least-squares fitting of measured decay series.
//
// The predictions take the form t^e with exact rational
//   e(u) = −γ + a/2 − b/2 − (3/4)(1 − 2/p),
//   e(θ) = −μ + a/2 − b/2 − (3/4)(1 − 2/p),
//   e(ω) = −γ − 1/2 + a/2 − b/2 − (3/4)(1 − 2/p),
// valid for b ∈ ℕ₀, 2 ≤ p ≤ ∞, and a ≥ 0, with the extra velocity
// constraint a < b + 5/2.  The canonical small-data values are γ = 1/4,
// μ = 5/4 (μ = γ + 1).

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "norms.hpp"
#include "rational.hpp"

namespace bouss::diag {

/// Recover a small rational from a double that is expected to be one
/// (continued-fraction expansion, denominators ≤ 9600).  Exponent inputs
/// (a, p, γ, μ) are quarter-integers or similar in every use the library
/// supports; anything unrepresentable is rejected rather than rounded.
inline Rational rational_from_double(double x, const char* what) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": not finite");
    constexpr std::int64_t kMaxDen = 9600;
    double v = x;
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int it = 0; it < 64; ++it) {
        const double fl = std::floor(v);
        const auto ai = static_cast<std::int64_t>(fl);
        const std::int64_t p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > kMaxDen) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        const double frac = v - fl;
        if (frac < 1e-12) break;
        v = 1.0 / frac;
    }
    Rational r(p1, q1);
    if (std::abs(r.value() - x) > 1e-9 * std::max(1.0, std::abs(x)))
        throw std::invalid_argument(std::string(what) + ": not a small rational: " +
                                    std::to_string(x));
    return r;
}

/// Decay exponents assumed for the L² norms of the solution:
/// ‖u(t)‖_{L²} = O(t^{−γ}), ‖θ(t)‖_{L²} = O(t^{−μ}).
struct DecayAssumptions {
    Rational gamma{1, 4};
    Rational mu{5, 4};
    bool mu_linked = true; ///< enforce μ = γ + 1

    void validate() const {
        if (mu_linked && !(mu == gamma + Rational(1)))
            throw std::invalid_argument("DecayAssumptions: mu = gamma + 1 required when linked");
    }
};

/// Exact predicted exponent for ‖|x|^a ∇^b q(t)‖_p on a small-data solution.
/// Throws with the violated constraint named when (a, b, p) is outside the
/// admissible range.
inline Rational predicted_exponent(const NormSpec& spec, const DecayAssumptions& assume = {}) {
    assume.validate();
    if (spec.b < 0) throw std::invalid_argument("predicted_exponent: requires b >= 0");
    if (!(spec.a >= 0.0)) throw std::invalid_argument("predicted_exponent: requires a >= 0");
    if (!(spec.p >= 2.0))
        throw std::invalid_argument("predicted_exponent: requires 2 <= p <= inf");
    if (spec.quantity == Quantity::U && !(spec.a < spec.b + 2.5))
        throw std::invalid_argument("predicted_exponent: velocity weight requires 0 <= a < b + 5/2");

    const Rational a = rational_from_double(spec.a, "predicted_exponent: a");
    const Rational half_a = a / Rational(2);
    const Rational half_b = Rational(spec.b, 2);
    // (3/4)(1 − 2/p); p = ∞ contributes the full 3/4.
    Rational lebesgue{3, 4};
    if (!std::isinf(spec.p)) {
        const Rational p = rational_from_double(spec.p, "predicted_exponent: p");
        lebesgue = Rational(3, 4) * (Rational(1) - Rational(2) / p);
    }

    Rational lead = -assume.gamma;
    if (spec.quantity == Quantity::Theta) lead = -assume.mu;
    if (spec.quantity == Quantity::Omega) lead = -assume.gamma - Rational(1, 2);
    return lead + half_a - half_b - lebesgue;
}

/// An ordered series of (t, value) measurements of one norm.
struct DecaySeries {
    std::vector<std::pair<double, double>> samples;

    void add(double t, double value) { samples.emplace_back(t, value); }
};

/// Fit window [t1, t2]; must span at least half a decade (t2/t1 ≥ √10).
struct FitWindow {
    double t1 = 1.0;
    double t2 = 10.0;
};

/// Default window: [1, min(20, L²/64)] — skips the early transient and stays
/// inside the box horizon.
inline FitWindow default_fit_window(double box) {
    return {1.0, std::min(20.0, box * box / 64.0)};
}

/// Least-squares fit of log(value) against log(t).
struct ExponentFit {
    double t1 = 0.0;
    double t2 = 0.0;
    double slope = 0.0;
    double intercept = 0.0; ///< log-log intercept: value ≈ e^intercept · t^slope
    double r2 = 1.0;
    std::size_t n_points = 0;
};

inline ExponentFit fit_decay_exponent(const DecaySeries& series, const FitWindow& window) {
    if (!(window.t2 > 0.0 && window.t1 > 0.0 && window.t2 > window.t1))
        throw std::invalid_argument("fit_decay_exponent: invalid window");
    if (window.t2 / window.t1 < std::sqrt(10.0))
        throw std::invalid_argument(
            "fit_decay_exponent: window must span at least half a decade (t2/t1 >= sqrt(10))");

    std::vector<double> lt, lv;
    for (const auto& [t, v] : series.samples) {
        if (t < window.t1 || t > window.t2) continue;
        if (!(t > 0.0)) throw std::invalid_argument("fit_decay_exponent: requires t > 0");
        if (!(v > 0.0))
            throw std::invalid_argument("fit_decay_exponent: requires positive values");
        lt.push_back(std::log(t));
        lv.push_back(std::log(v));
    }
    if (lt.size() < 2)
        throw std::invalid_argument("fit_decay_exponent: fewer than two samples in window");
    if (std::exp(lt.back() - lt.front()) < std::sqrt(10.0))
        throw std::invalid_argument(
            "fit_decay_exponent: sampled times span less than half a decade");

    const auto n = static_cast<double>(lt.size());
    double mt = 0.0, mv = 0.0;
    for (std::size_t i = 0; i < lt.size(); ++i) { mt += lt[i]; mv += lv[i]; }
    mt /= n; mv /= n;
    double stt = 0.0, stv = 0.0, svv = 0.0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
        const double dt = lt[i] - mt, dv = lv[i] - mv;
        stt += dt * dt;
        stv += dt * dv;
        svv += dv * dv;
    }
    ExponentFit fit;
    fit.t1 = window.t1;
    fit.t2 = window.t2;
    fit.n_points = lt.size();
    fit.slope = stv / stt;
    fit.intercept = mv - fit.slope * mt;
    const double ss_res = svv - stv * stv / stt;
    fit.r2 = svv > 0.0 ? std::max(0.0, 1.0 - ss_res / svv) : 1.0;
    return fit;
}

} // namespace bouss::diag
