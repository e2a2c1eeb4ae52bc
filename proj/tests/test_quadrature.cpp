// Gauss–Legendre rules, adaptive and improper integration, Duhamel sample
// generation, and exact-rational bookkeeping.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include <bouss/decay.hpp>
#include <bouss/duhamel.hpp>
#include <bouss/quadrature.hpp>
#include <bouss/rational.hpp>

using Catch::Approx;
using namespace bouss;

TEST_CASE("Gauss-Legendre rules: node symmetry, weight sum, polynomial exactness") {
    for (int order : {1, 2, 3, 5, 8, 13, 20}) {
        const QuadRule& rule = gauss_legendre(order);
        REQUIRE(rule.nodes.size() == static_cast<std::size_t>(order));

        double wsum = 0.0;
        for (double w : rule.weights) wsum += w;
        REQUIRE(wsum == Approx(2.0).epsilon(1e-14));

        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            REQUIRE(rule.nodes[i] == Approx(-rule.nodes[rule.nodes.size() - 1 - i]).margin(1e-14));

        // Exact through degree 2·order − 1.
        const int deg = 2 * order - 1;
        const double got = gl_panel([&](double x) { return std::pow(x, deg); }, 0.0, 1.0, order);
        REQUIRE(got == Approx(1.0 / (deg + 1)).epsilon(1e-12));
    }
    REQUIRE_THROWS_AS(gauss_legendre(0), std::invalid_argument);
    REQUIRE_THROWS_AS(gauss_legendre(65), std::invalid_argument);
}

TEST_CASE("adaptive integration reaches the requested tolerance") {
    const auto smooth = integrate([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-13);
    REQUIRE(smooth.converged);
    REQUIRE(std::abs(smooth.value - (std::exp(1.0) - 1.0)) < 1e-12);

    // Sharp Lorentzian peak: adaptivity has to refine near x = 0.
    const double eps = 1e-4;
    const auto peaked =
        integrate([&](double x) { return 1.0 / (eps + x * x); }, -1.0, 1.0, 1e-11);
    const double exact = 2.0 * std::atan(1.0 / std::sqrt(eps)) / std::sqrt(eps);
    REQUIRE(peaked.converged);
    REQUIRE(std::abs(peaked.value - exact) < 1e-8 * exact);

    REQUIRE(integrate([](double x) { return x; }, 2.0, 2.0).value == 0.0);
}

TEST_CASE("improper integration: Gaussian tail converges, critical tail is flagged") {
    const auto gauss =
        improper_integrate([](double r) { return r * r * std::exp(-r * r); }, 0.0, 1e-12);
    REQUIRE(gauss.integrable);
    REQUIRE(std::abs(gauss.value - std::sqrt(M_PI) / 4.0) < 1e-10);

    // ∫ dr/(1+r) diverges logarithmically: increments stop shrinking.
    const auto critical = improper_integrate([](double r) { return 1.0 / (1.0 + r); }, 0.0, 1e-10);
    REQUIRE_FALSE(critical.integrable);

    // (1+r)^{-2} tail converges slowly but reaches the negligible-tail floor
    // within the doubling budget (increment ratio 1/2 per doubling).
    const auto slow =
        improper_integrate([](double r) { return std::pow(1.0 + r, -2.0); }, 0.0, 1e-10);
    REQUIRE(slow.integrable);
    REQUIRE(std::abs(slow.value - 1.0) < 1e-8);
}

TEST_CASE("Duhamel samples partition [0, t] and respect breakpoints") {
    solver::QuadratureSpec q; // graded panels, GL 3, splits 1
    for (double t : {0.37, 1.0, 4.0}) {
        const auto samples = duhamel_samples(t, q);
        double wsum = 0.0;
        for (const auto& [s, w] : samples) {
            REQUIRE(s > 0.0);
            REQUIRE(s < t);
            REQUIRE(w > 0.0);
            wsum += w;
        }
        REQUIRE(wsum == Approx(t).epsilon(1e-13));
    }

    // Doubling `splits` doubles the sample count without changing total weight.
    solver::QuadratureSpec q2 = q;
    q2.splits = 2;
    const auto base = duhamel_samples(1.0, q);
    const auto fine = duhamel_samples(1.0, q2);
    REQUIRE(fine.size() == 2 * base.size());

    // Breakpoints become panel edges: sample count grows, weights still sum to t.
    const auto broken = duhamel_samples(1.0, q, {0.3});
    REQUIRE(broken.size() > base.size());
    double wsum = 0.0;
    for (const auto& [s, w] : broken) wsum += w;
    REQUIRE(wsum == Approx(1.0).epsilon(1e-13));

    // The graded grid integrates a stiff-but-smooth exponential: GL 3 to a few
    // parts in 1e6, GL 8 to machine accuracy.
    const double exact = (1.0 - std::exp(-5.0)) / 5.0;
    double val = 0.0;
    for (const auto& [s, w] : base) val += w * std::exp(5.0 * (s - 1.0));
    REQUIRE(std::abs(val - exact) < 1e-5);
    solver::QuadratureSpec q8 = q;
    q8.gl_order = 8;
    double val8 = 0.0;
    for (const auto& [s, w] : duhamel_samples(1.0, q8)) val8 += w * std::exp(5.0 * (s - 1.0));
    REQUIRE(std::abs(val8 - exact) < 1e-13);

    REQUIRE(duhamel_samples(0.0, q).empty());
    REQUIRE_THROWS_AS(duhamel_samples(-1.0, q), std::invalid_argument);
}

TEST_CASE("rational arithmetic and recovery from doubles") {
    const Rational a{3, 4}, b{-1, 2};
    REQUIRE(a + b == Rational(1, 4));
    REQUIRE(a - b == Rational(5, 4));
    REQUIRE(a * Rational(2) == Rational(3, 2));
    REQUIRE(a / Rational(1, 2) == Rational(3, 2));
    REQUIRE(-a == Rational(-3, 4));
    REQUIRE(Rational(6, 8) == a); // normalization
    REQUIRE(a.value() == 0.75);
    REQUIRE(b < a);

    REQUIRE(diag::rational_from_double(0.75, "test") == Rational(3, 4));
    REQUIRE(diag::rational_from_double(-1.25, "test") == Rational(-5, 4));
    REQUIRE(diag::rational_from_double(2.0, "test") == Rational(2));
    // Irrational inputs have no small-denominator representation.
    REQUIRE_THROWS_AS(diag::rational_from_double(0.41421356237, "test"), std::invalid_argument);
    REQUIRE_THROWS_AS(diag::rational_from_double(std::nan(""), "test"), std::invalid_argument);
}
