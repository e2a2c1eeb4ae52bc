#pragma once
// Initial-data families, constructed directly in Fourier space where a closed
// transform exists (so moments are exact coefficients of the spectrum at
// ξ → 0) and sampled physically otherwise.  All constructions apply the
// 2/3-rule mask, which also zeroes the Nyquist planes and keeps the implied
// full spectrum Hermitian.
//
// Families:
//   gaussian θ₀      A e^{−|x|²/σ²}                    (mass A σ³ π^{3/2})
//   dipole θ₀        A ∂₃ e^{−|x|²/σ²}                 (zero mass, vertical
//                                                        first moment −A σ³ π^{3/2})
//   vortex blob u₀   ∇ × (A e^{−|x|²/σ²} ê_axis)       (divergence-free)
//   algebraic θ₀     3A (1 + |x|²)^{−3/2}, grid-sampled (not integrable;
//                                                        moments diverge)

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "operators.hpp"

namespace bouss::spectral {

namespace detail {

/// Fourier coefficient magnitude of A e^{−|x|²/σ²} on the box:
/// c(ξ) = A σ³ π^{3/2} e^{−σ²|ξ|²/4} / L³.
inline double gaussian_coeff(double amp, double sigma, double L, double xi2) {
    return amp * std::pow(sigma, 3) * std::pow(M_PI, 1.5) * std::exp(-0.25 * sigma * sigma * xi2) /
           (L * L * L);
}

} // namespace detail

inline SpectralScalar gaussian_scalar(GridPtr grid, double amp, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("gaussian_scalar: sigma must be positive");
    const Grid& g = *grid;
    SpectralScalar th(grid);
    g.for_each_mode([&](std::size_t idx, int ikx, int ky, int kz) {
        const double xx = g.xi(ikx), xy = g.xi(ky), xz = g.xi(kz);
        th[idx] = detail::gaussian_coeff(amp, sigma, g.box(), xx * xx + xy * xy + xz * xz);
    });
    dealias(th);
    return th;
}

/// Vertical-derivative (dipole) datum A ∂₃ e^{−|x|²/σ²}: zero mass, first
/// moment (0, 0, −A σ³ π^{3/2}).
inline SpectralScalar dipole_scalar(GridPtr grid, double amp, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("dipole_scalar: sigma must be positive");
    const Grid& g = *grid;
    SpectralScalar th(grid);
    const std::complex<double> I(0.0, 1.0);
    g.for_each_mode([&](std::size_t idx, int ikx, int ky, int kz) {
        const double xx = g.xi(ikx), xy = g.xi(ky), xz = g.xi(kz);
        const double c = detail::gaussian_coeff(amp, sigma, g.box(), xx * xx + xy * xy + xz * xz);
        th[idx] = I * xz * c;
    });
    dealias(th);
    return th;
}

/// Divergence-free vortex blob u₀ = ∇ × (A e^{−|x|²/σ²} ê_axis), axis ∈ {0,1,2}.
inline SpectralVector vortex_blob(GridPtr grid, double amp, double sigma, int axis = 2) {
    if (sigma <= 0.0) throw std::invalid_argument("vortex_blob: sigma must be positive");
    if (axis < 0 || axis > 2) throw std::invalid_argument("vortex_blob: axis must be 0, 1 or 2");
    const Grid& g = *grid;
    SpectralVector psi(grid);
    g.for_each_mode([&](std::size_t idx, int ikx, int ky, int kz) {
        const double xx = g.xi(ikx), xy = g.xi(ky), xz = g.xi(kz);
        psi[axis][idx] =
            detail::gaussian_coeff(amp, sigma, g.box(), xx * xx + xy * xy + xz * xz);
    });
    SpectralVector u = curl(psi);
    dealias(u);
    return u;
}

/// Slowly decaying datum 3A (1 + |x|²)^{−3/2}, sampled on the grid (its
/// continuum transform is singular at ξ = 0, so there is no clean spectral
/// construction; physical sampling plus forward transform is the definition
/// here).  Not L¹: domain-truncated moments grow logarithmically.
inline SpectralScalar algebraic_scalar(GridPtr grid, double amp) {
    const Grid& g = *grid;
    std::vector<double> f(g.real_size());
    std::size_t i = 0;
    for (int iz = 0; iz < g.n(); ++iz) {
        const double z = g.coord(iz);
        for (int iy = 0; iy < g.n(); ++iy) {
            const double y = g.coord(iy);
            for (int ix = 0; ix < g.n(); ++ix, ++i) {
                const double x = g.coord(ix);
                const double r2 = x * x + y * y + z * z;
                f[i] = 3.0 * amp * std::pow(1.0 + r2, -1.5);
            }
        }
    }
    SpectralScalar th = SpectralScalar::from_physical(grid, f);
    dealias(th);
    return th;
}

} // namespace bouss::spectral
