#pragma once
// Gauss–Legendre rules and adaptive integration.
//
// Nodes/weights are generated at runtime by Newton iteration on the Legendre
// recurrence (any order, ~1e-15 accurate) and cached per order.  The adaptive
// driver bisects panels until the coarse/fine discrepancy meets the local
// error budget.  Semi-infinite integrals use domain doubling with a
// divergence heuristic: once past the first few segments, successive
// doubling increments of an integrable tail must shrink by at least 5% each;
// slower decay (e.g. the log-divergent ones, whose increments approach a
// constant) marks the integral non-integrable.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bouss {

struct QuadRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights; // sum = 2
};

/// Gauss–Legendre rule of the given order (number of nodes), cached.
inline const QuadRule& gauss_legendre(int order) {
    if (order < 1 || order > 64) throw std::invalid_argument("gauss_legendre: order must be in [1,64]");
    static std::map<int, QuadRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;

    QuadRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int n = order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n(x) = 0.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = w;
    }
    return cache.emplace(order, std::move(rule)).first->second;
}

/// Fixed-order Gauss–Legendre approximation of ∫_a^b f.
inline double gl_panel(const std::function<double(double)>& f, double a, double b, int order) {
    const QuadRule& rule = gauss_legendre(order);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

struct IntegrationResult {
    double value = 0.0;
    double error = 0.0;       // accumulated local error estimates
    std::size_t panels = 0;   // leaf panels used
    bool converged = true;    // false if depth limit hit or divergence detected
};

namespace detail {

inline void integrate_rec(const std::function<double(double)>& f, double a, double b,
                          double tol, int order, int depth, IntegrationResult& out) {
    const double coarse = gl_panel(f, a, b, order);
    const double mid = 0.5 * (a + b);
    const double fine = gl_panel(f, a, mid, order) + gl_panel(f, mid, b, order);
    const double err = std::abs(fine - coarse);
    if (err <= tol || depth >= 48) {
        out.value += fine;
        out.error += err;
        out.panels += 2;
        if (depth >= 48 && err > tol) out.converged = false;
        return;
    }
    integrate_rec(f, a, mid, 0.5 * tol, order, depth + 1, out);
    integrate_rec(f, mid, b, 0.5 * tol, order, depth + 1, out);
}

} // namespace detail

/// Adaptive integration of f over the finite interval [a, b].
inline IntegrationResult integrate(const std::function<double(double)>& f, double a, double b,
                                   double tol = 1e-12, int order = 10) {
    IntegrationResult out;
    if (a == b) return out;
    detail::integrate_rec(f, a, b, tol, order, 0, out);
    return out;
}

struct ImproperResult {
    double value = 0.0;
    double error = 0.0;
    bool integrable = true;   // false when increments violate the 5% decay rule
    std::size_t segments = 0; // doubling segments consumed
};

/// ∫_a^∞ f via domain doubling: segments [c, 2c] with c = max(a, scale), 2c, 4c, ...
/// An integrable tail must show increments shrinking by ≥5% per doubling once
/// transients pass; persistent slower decay flags the integral non-integrable.
inline ImproperResult improper_integrate(const std::function<double(double)>& f, double a,
                                         double tol = 1e-10, double scale = 1.0,
                                         int max_doublings = 44) {
    ImproperResult out;
    double c = (a < scale) ? scale : a;
    if (a < c) {
        IntegrationResult head = integrate(f, a, c, tol);
        out.value += head.value;
        out.error += head.error;
    }
    double prev_inc = -1.0;
    int slow_decay = 0;
    for (int i = 0; i < max_doublings; ++i) {
        IntegrationResult seg = integrate(f, c, 2.0 * c, tol);
        out.value += seg.value;
        out.error += seg.error;
        out.segments += 1;
        const double inc = std::abs(seg.value);
        const double floor = tol * std::max(1.0, std::abs(out.value));
        if (inc < floor) {
            // Two negligible segments in a row end the sweep.
            IntegrationResult next = integrate(f, 2.0 * c, 4.0 * c, tol);
            if (std::abs(next.value) < floor) {
                out.value += next.value;
                return out;
            }
            out.value += next.value;
            out.error += next.error;
            out.segments += 1;
            c *= 4.0;
            prev_inc = std::abs(next.value);
            continue;
        }
        if (prev_inc > 0.0 && inc > 0.95 * prev_inc) {
            if (++slow_decay >= 3) {
                out.integrable = false;
                return out;
            }
        } else {
            slow_decay = 0;
        }
        prev_inc = inc;
        c *= 2.0;
    }
    out.integrable = false; // never reached the negligible-tail floor
    return out;
}

} // namespace bouss
