#pragma once
// Weighted grid suprema for the scaling-invariant norms
//   ‖u‖_X = sup (√t + |x|) |u(t, x)|,   ‖θ‖_Y = sup (√t + |x|)³ |θ(t, x)|.
// coord() reports minimal-image coordinates, so the minimal-image radius is
// the plain Euclidean norm of the coordinates.

#include <cmath>
#include <vector>

#include "field.hpp"

namespace bouss::spectral {

/// sup over the grid of (√t + |x|)^power |f(x)|.
inline double weighted_sup(const SpectralScalar& f, double t, int power) {
    const Grid& g = *f.grid();
    const auto ph = f.to_physical();
    const double st = std::sqrt(t);
    double best = 0.0;
    std::size_t i = 0;
    for (int iz = 0; iz < g.n(); ++iz) {
        const double z = g.coord(iz);
        for (int iy = 0; iy < g.n(); ++iy) {
            const double y = g.coord(iy);
            for (int ix = 0; ix < g.n(); ++ix, ++i) {
                const double x = g.coord(ix);
                const double r = std::sqrt(x * x + y * y + z * z);
                const double w = std::pow(st + r, power);
                const double v = w * std::abs(ph[i]);
                if (std::isnan(v)) return v; // a single bad point poisons the sup
                if (v > best) best = v;
            }
        }
    }
    return best;
}

/// sup over the grid of (√t + |x|)^power |u(x)| for the pointwise vector magnitude.
inline double weighted_sup(const SpectralVector& u, double t, int power) {
    const Grid& g = *u.grid();
    const auto px = u[0].to_physical();
    const auto py = u[1].to_physical();
    const auto pz = u[2].to_physical();
    const double st = std::sqrt(t);
    double best = 0.0;
    std::size_t i = 0;
    for (int iz = 0; iz < g.n(); ++iz) {
        const double z = g.coord(iz);
        for (int iy = 0; iy < g.n(); ++iy) {
            const double y = g.coord(iy);
            for (int ix = 0; ix < g.n(); ++ix, ++i) {
                const double x = g.coord(ix);
                const double r = std::sqrt(x * x + y * y + z * z);
                const double mag =
                    std::sqrt(px[i] * px[i] + py[i] * py[i] + pz[i] * pz[i]);
                const double v = std::pow(st + r, power) * mag;
                if (std::isnan(v)) return v; // a single bad point poisons the sup
                if (v > best) best = v;
            }
        }
    }
    return best;
}

} // namespace bouss::spectral
