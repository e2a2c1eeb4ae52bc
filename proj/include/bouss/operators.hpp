#pragma once
// Diagonal and quadratic operators on spectral fields: Leray projection,
// curl/gradient/divergence, 2/3-rule dealiasing, heat multipliers, and the
// dealiased quadratic terms of the Boussinesq system.
//
// The Leray projector uses integer mode arithmetic (k·û and |k|² in exact
// integers scaled afterwards), so projecting twice is bitwise idempotent.
// The ξ = 0 mode passes through untouched.

#include <complex>
#include <utility>

#include "field.hpp"

namespace bouss::spectral {

/// û ↦ û − k (k·û)/|k|², in place; mean mode untouched.
inline void leray_project(SpectralVector& u) {
    const Grid& g = *u.grid();
    g.for_each_mode([&](std::size_t idx, int ikx, int ky, int kz) {
        const int kx = ikx; // storage covers kx >= 0 only
        const long k2 = long(kx) * kx + long(ky) * ky + long(kz) * kz;
        if (k2 == 0) return;
        const std::complex<double> kdot =
            double(kx) * u[0][idx] + double(ky) * u[1][idx] + double(kz) * u[2][idx];
        const std::complex<double> s = kdot / double(k2);
        u[0][idx] -= double(kx) * s;
        u[1][idx] -= double(ky) * s;
        u[2][idx] -= double(kz) * s;
    });
}

/// ω̂ = iξ × û.
inline SpectralVector curl(const SpectralVector& u) {
    const Grid& g = *u.grid();
    SpectralVector w(u.grid());
    const std::complex<double> I(0.0, 1.0);
    g.for_each_mode([&](std::size_t idx, int ikx, int ky, int kz) {
        const double xx = g.xi(ikx), xy = g.xi(ky), xz = g.xi(kz);
        w[0][idx] = I * (xy * u[2][idx] - xz * u[1][idx]);
        w[1][idx] = I * (xz * u[0][idx] - xx * u[2][idx]);
        w[2][idx] = I * (xx * u[1][idx] - xy * u[0][idx]);
    });
    return w;
}

/// ∇̂f = iξ f̂.
inline SpectralVector gradient(const SpectralScalar& f) {
    const Grid& g = *f.grid();
    SpectralVector out(f.grid());
    const std::complex<double> I(0.0, 1.0);
    g.for_each_mode([&](std::size_t idx, int ikx, int ky, int kz) {
        out[0][idx] = I * g.xi(ikx) * f[idx];
        out[1][idx] = I * g.xi(ky) * f[idx];
        out[2][idx] = I * g.xi(kz) * f[idx];
    });
    return out;
}

/// div̂ u = iξ·û.
inline SpectralScalar divergence(const SpectralVector& u) {
    const Grid& g = *u.grid();
    SpectralScalar out(u.grid());
    const std::complex<double> I(0.0, 1.0);
    g.for_each_mode([&](std::size_t idx, int ikx, int ky, int kz) {
        out[idx] = I * (g.xi(ikx) * u[0][idx] + g.xi(ky) * u[1][idx] + g.xi(kz) * u[2][idx]);
    });
    return out;
}

/// max_ξ |ξ·û(ξ)| — divergence-free diagnostic.
inline double divergence_linf(const SpectralVector& u) {
    const Grid& g = *u.grid();
    double m = 0.0;
    g.for_each_mode([&](std::size_t idx, int ikx, int ky, int kz) {
        const std::complex<double> d =
            g.xi(ikx) * u[0][idx] + g.xi(ky) * u[1][idx] + g.xi(kz) * u[2][idx];
        m = std::max(m, std::abs(d));
    });
    return m;
}

/// 2/3-rule mask: true when the mode survives (3·max|k_i| ≤ N).
inline bool dealias_keep(int n, int kx, int ky, int kz) {
    const int ax = kx < 0 ? -kx : kx, ay = ky < 0 ? -ky : ky, az = kz < 0 ? -kz : kz;
    const int m = std::max(ax, std::max(ay, az));
    return 3 * m <= n;
}

inline void dealias(SpectralScalar& f) {
    const Grid& g = *f.grid();
    const int n = g.n();
    g.for_each_mode([&](std::size_t idx, int ikx, int ky, int kz) {
        if (!dealias_keep(n, ikx, ky, kz)) f[idx] = 0.0;
    });
}

inline void dealias(SpectralVector& u) {
    for (int j = 0; j < 3; ++j) dealias(u[j]);
}

/// f̂ ↦ e^{−s|ξ|²} f̂ (heat semigroup for s ≥ 0), in place.
inline void heat_multiply(SpectralScalar& f, double s) {
    const Grid& g = *f.grid();
    g.for_each_mode([&](std::size_t idx, int ikx, int ky, int kz) {
        const double xx = g.xi(ikx), xy = g.xi(ky), xz = g.xi(kz);
        f[idx] *= std::exp(-s * (xx * xx + xy * xy + xz * xz));
    });
}

inline void heat_multiply(SpectralVector& u, double s) {
    for (int j = 0; j < 3; ++j) heat_multiply(u[j], s);
}

/// Dealiased spectral products of the quadratic terms: the symmetric tensor
/// (u_a u_b) and the flux vector (θ u_a).
struct QuadraticProducts {
    // Symmetric tensor storage order: 00, 01, 02, 11, 12, 22.
    std::array<SpectralScalar, 6> uu;
    std::array<SpectralScalar, 3> thu;

    static int sym_index(int a, int b) {
        static constexpr int tab[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
        return tab[a][b];
    }
};

inline QuadraticProducts compute_products(const SpectralVector& u, const SpectralScalar& th) {
    GridPtr gp = u.grid();
    const Grid& g = *gp;
    const auto ux = u[0].to_physical();
    const auto uy = u[1].to_physical();
    const auto uz = u[2].to_physical();
    const auto thp = th.to_physical();
    const std::array<const std::vector<double>*, 3> uphys = {&ux, &uy, &uz};

    QuadraticProducts out{{SpectralScalar(gp), SpectralScalar(gp), SpectralScalar(gp),
                           SpectralScalar(gp), SpectralScalar(gp), SpectralScalar(gp)},
                          {SpectralScalar(gp), SpectralScalar(gp), SpectralScalar(gp)}};

    std::vector<double> prod(g.real_size());
    for (int a = 0; a < 3; ++a) {
        for (int b = a; b < 3; ++b) {
            const auto& fa = *uphys[a];
            const auto& fb = *uphys[b];
            for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = fa[i] * fb[i];
            SpectralScalar& dst = out.uu[QuadraticProducts::sym_index(a, b)];
            g.forward(prod.data(), dst.data());
            dealias(dst);
        }
        const auto& fa = *uphys[a];
        for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = thp[i] * fa[i];
        g.forward(prod.data(), out.thu[a].data());
        dealias(out.thu[a]);
    }
    return out;
}

/// Quadratic right-hand sides of the system in spectral form,
///   f̂ = −iξ_a (û_a u_b)  (convective term, unprojected),
///   ĝ = −iξ_a (θ̂ u_a),
/// both computed from dealiased physical-space products.
inline std::pair<SpectralVector, SpectralScalar> nonlinear_terms(const SpectralVector& u,
                                                                 const SpectralScalar& th) {
    GridPtr gp = u.grid();
    const Grid& g = *gp;
    const QuadraticProducts q = compute_products(u, th);

    SpectralVector f(gp);
    SpectralScalar gg(gp);
    const std::complex<double> I(0.0, 1.0);
    g.for_each_mode([&](std::size_t idx, int ikx, int ky, int kz) {
        const double xi[3] = {g.xi(ikx), g.xi(ky), g.xi(kz)};
        for (int b = 0; b < 3; ++b) {
            std::complex<double> s(0.0, 0.0);
            for (int a = 0; a < 3; ++a)
                s += xi[a] * q.uu[QuadraticProducts::sym_index(a, b)][idx];
            f[b][idx] = -I * s;
        }
        gg[idx] = -I * (xi[0] * q.thu[0][idx] + xi[1] * q.thu[1][idx] + xi[2] * q.thu[2][idx]);
    });
    return {std::move(f), std::move(gg)};
}

/// Pressure-gradient recovery: ∇P̂ = (I − P)(θ̂ e₃ − iξ·(û⊗u)), the
/// non-solenoidal part of the momentum forcing.
inline SpectralVector recover_pressure_gradient(const SpectralVector& u,
                                                const SpectralScalar& th) {
    auto [f, g_unused] = nonlinear_terms(u, th);
    (void)g_unused;
    SpectralVector forcing = std::move(f);
    for (std::size_t i = 0; i < forcing[2].size(); ++i) forcing[2][i] += th[i];
    SpectralVector solenoidal = forcing;
    leray_project(solenoidal);
    forcing -= solenoidal;
    return forcing;
}

} // namespace bouss::spectral
