#pragma once
// The system's scaling symmetry on initial data:
//   u_λ(x) = λ u(λx),  θ_λ(x) = λ³ θ(λx),
// realized on a box of side L/λ.  Fourier modes of the scaled box satisfy
// ξ'_k = λ ξ_k at the same integer index k, and the coefficients transform as
//   c'_k[u] = λ c_k[u],  c'_k[θ] = λ³ c_k[θ],
// so the transform is exact: same coefficients, rescaled, on a rescaled grid.
// The Galerkin truncation commutes with this map (the retained index set is
// identical), hence discrete solutions inherit the continuum scaling
// equivalence up to time-discretization differences.

#include <stdexcept>
#include <tuple>

#include "state.hpp"

namespace bouss::solver {

struct ScaledData {
    GridPtr grid; // box side L/λ, same N
    SpectralVector u0;
    SpectralScalar theta0;
};

inline ScaledData scaling_transform(const SpectralVector& u0, const SpectralScalar& th0,
                                    double lambda) {
    if (lambda <= 0.0) throw std::invalid_argument("scaling_transform: lambda must be positive");
    const Grid& g = *u0.grid();
    GridPtr scaled = spectral::make_grid(g.n(), g.box() / lambda);
    ScaledData out{scaled, SpectralVector(scaled), SpectralScalar(scaled)};
    const double l3 = lambda * lambda * lambda;
    for (std::size_t i = 0; i < th0.size(); ++i) {
        for (int c = 0; c < 3; ++c) out.u0[c][i] = lambda * u0[c][i];
        out.theta0[i] = l3 * th0[i];
    }
    return out;
}

} // namespace bouss::solver
