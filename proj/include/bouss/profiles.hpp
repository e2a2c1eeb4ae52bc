#pragma once
// Temperature moments and far-field asymptotic-profile residuals.
//
// For a trajectory starting from (u₀, θ₀) at t = 0, the velocity field admits
// far-field expansions whose remainders are measured here:
//
//   R1 = u − e^{tΔ}u₀ − t e^{tΔ}P(θ₀e₃)
//   R2 = u − e^{tΔ}u₀ − t m₀ K(t,·)e₃                    (m₀ = ∫θ₀)
//   R3 = u − e^{tΔ}u₀ − t m₀ ∇²E(·)e₃                    (∇²E = Riesz tensor)
//   R̃1_j = u_j − e^{tΔ}u₀_j + t Σ_h F_{j;h,3}(t,·)(m₁)_h
//          − ∫₀ᵗ (t−s) Σ_k F_{j;3,k}(t−s,·) m_k(s) ds    (m₁ = ∫yθ₀(y)dy)
//   R̃2_j = u_j − e^{tΔ}u₀_j + t Σ_h (∇³E)_{jh3}(m₁)_h
//          − Σ_k (∇³E)_{j3k} ∫₀ᵗ (t−s) m_k(s) ds
//
// with m_k(s) = ∫(θ u_k)(s, y) dy.  The first family is normalized by
// t|x|⁻³, the tilde family (which requires m₀ = 0) by t|x|⁻⁴; residuals are
// sampled on the far-field shell κ√t ≤ |x| ≤ L/4.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "kernels.hpp"
#include "norms.hpp"
#include "operators.hpp"
#include "quadrature.hpp"
#include "state.hpp"

namespace bouss::diag {

/// Zeroth and first moments of a scalar datum, with a domain-doubling
/// convergence check over the nested balls |x| ≤ L/16, L/8, L/4.
struct Moments {
    double m0 = 0.0;
    std::array<double, 3> m1{};
    bool m0_converged = true;
    bool m1_converged = true;
    std::array<double, 3> m0_shells{};                ///< values at R = L/16, L/8, L/4
    std::array<std::array<double, 3>, 3> m1_shells{}; ///< [shell][component]
};

inline Moments moments(const SpectralScalar& theta0) {
    const auto& g = *theta0.grid();
    const int n = g.n();
    const double dv = g.spacing() * g.spacing() * g.spacing();
    const std::array<double, 3> radii = {g.box() / 16.0, g.box() / 8.0, g.box() / 4.0};

    const auto phys = theta0.to_physical();
    double sum0[3] = {0.0, 0.0, 0.0};
    double sum1[3][3] = {};
    double abs0 = 0.0, abs1 = 0.0;
    for (int iz = 0; iz < n; ++iz) {
        const double z = g.coord(iz);
        for (int iy = 0; iy < n; ++iy) {
            const double y = g.coord(iy);
            std::size_t idx = (std::size_t(iz) * n + iy) * n;
            for (int ix = 0; ix < n; ++ix, ++idx) {
                const double x = g.coord(ix);
                const double r = std::sqrt(x * x + y * y + z * z);
                if (r > radii[2]) continue;
                const double v = phys[idx];
                abs0 += std::abs(v);
                abs1 += r * std::abs(v);
                for (int s = 0; s < 3; ++s) {
                    if (r > radii[s]) continue;
                    sum0[s] += v;
                    sum1[s][0] += x * v;
                    sum1[s][1] += y * v;
                    sum1[s][2] += z * v;
                }
            }
        }
    }

    Moments out;
    for (int s = 0; s < 3; ++s) {
        out.m0_shells[s] = sum0[s] * dv;
        for (int c = 0; c < 3; ++c) out.m1_shells[s][c] = sum1[s][c] * dv;
    }
    out.m0 = out.m0_shells[2];
    out.m1 = out.m1_shells[2];

    // Non-convergent when a doubling changes the value by ≥ 5%, measured
    // against the converged value with an absolute floor tied to the datum's
    // mass so exact zeroes (odd symmetry) are not flagged on roundoff.
    const double floor0 = 1e-9 * abs0 * dv + 1e-300;
    const double floor1 = 1e-9 * abs1 * dv + 1e-300;
    for (int s = 0; s < 2; ++s) {
        const double change = std::abs(out.m0_shells[s + 1] - out.m0_shells[s]);
        if (change > std::max(0.05 * std::abs(out.m0_shells[s + 1]), floor0))
            out.m0_converged = false;
        for (int c = 0; c < 3; ++c) {
            const double dc = std::abs(out.m1_shells[s + 1][c] - out.m1_shells[s][c]);
            if (dc > std::max(0.05 * std::abs(out.m1_shells[s + 1][c]), floor1))
                out.m1_converged = false;
        }
    }
    return out;
}

/// Which far-field expansion the residual is measured against.
enum class ProfileVariant { R1, R2, R3, Rt1, Rt2 };

inline const char* to_string(ProfileVariant v) {
    switch (v) {
        case ProfileVariant::R1: return "R1";
        case ProfileVariant::R2: return "R2";
        case ProfileVariant::R3: return "R3";
        case ProfileVariant::Rt1: return "Rt1";
        case ProfileVariant::Rt2: return "Rt2";
    }
    return "?";
}

/// Declared far-field decay of the initial data:
/// |u₀| ≤ C(1+|x|)^{−a}, |θ₀| ≤ C(1+|x|)^{−b}.
struct DataDecay {
    double a = 2.0;
    double b = 3.0;
};

struct ProfileOptions {
    double kappa = 4.0;     ///< inner radius of the sampling shell, in units of √t
    double m0_tol = 1e-8;   ///< |m₀| tolerance for the tilde variants
    int gl_order = 4;       ///< Gauss–Legendre order per node interval of the correction integral
};

struct ProfileSample {
    double t = 0.0;
    double sup_ratio = 0.0; ///< sup over the shell of |R| / (t|x|^{−3 or −4})
    double sup_abs = 0.0;   ///< sup over the shell of |R|
    double argmax_r = 0.0;  ///< radius where sup_ratio is attained
    std::size_t n_points = 0;
};

struct ProfileReport {
    ProfileVariant variant = ProfileVariant::R1;
    double kappa = 0.0;
    std::vector<ProfileSample> samples;
};

namespace detail {

/// Per-node values of m(s) = ∫(θu)(s, y) dy over the box.
inline std::vector<std::array<double, 3>> flux_moments(const solver::Trajectory& traj) {
    std::vector<std::array<double, 3>> m(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& st = traj.node(i);
        const auto& g = *st.grid();
        const double dv = g.spacing() * g.spacing() * g.spacing();
        const auto th = st.theta.to_physical();
        for (int c = 0; c < 3; ++c) {
            const auto uc = st.u[c].to_physical();
            double s = 0.0;
            for (std::size_t j = 0; j < th.size(); ++j) s += th[j] * uc[j];
            m[i][c] = s * dv;
        }
    }
    return m;
}

/// Quadrature samples (s, weight, m(s)) of ∫₀^{t_node[e]} · ds built from the
/// trajectory's node intervals, with m(s) piecewise linear between nodes.
struct CorrectionSample {
    double s, w;
    std::array<double, 3> m;
};

inline std::vector<CorrectionSample> correction_samples(
    const std::vector<double>& times, const std::vector<std::array<double, 3>>& m,
    std::size_t upto, int gl_order) {
    const auto& rule = gauss_legendre(gl_order);
    std::vector<CorrectionSample> out;
    out.reserve(upto * rule.nodes.size());
    for (std::size_t i = 0; i < upto; ++i) {
        const double a = times[i], b = times[i + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            CorrectionSample cs;
            cs.s = mid + half * rule.nodes[q];
            cs.w = half * rule.weights[q];
            const double lam = (cs.s - a) / (b - a);
            for (int c = 0; c < 3; ++c) cs.m[c] = (1.0 - lam) * m[i][c] + lam * m[i + 1][c];
            out.push_back(cs);
        }
    }
    return out;
}

} // namespace detail

/// Measure the chosen profile residual on every stored node with t > 0.
/// `decay` declares the initial data's far-field decay exponents; variants
/// check their admissibility requirements and the tilde variants additionally
/// require m₀ = 0 within tolerance.
inline ProfileReport profile_residual(const solver::Trajectory& traj, ProfileVariant variant,
                                      const Moments& mom, const DataDecay& decay,
                                      const ProfileOptions& opt = {}) {
    using kernels::Vec3;
    if (traj.size() < 2) throw std::invalid_argument("profile_residual: trajectory too short");
    if (std::abs(traj.front().t) > 1e-12)
        throw std::invalid_argument("profile_residual: trajectory must start at t = 0");

    const bool tilde = variant == ProfileVariant::Rt1 || variant == ProfileVariant::Rt2;
    if (!tilde) {
        if (!(decay.a > 1.5))
            throw std::invalid_argument("profile_residual: requires data decay a > 3/2");
        const bool needs_open = variant != ProfileVariant::R1;
        if (needs_open ? !(decay.b > 3.0) : !(decay.b >= 3.0))
            throw std::invalid_argument(needs_open
                                            ? "profile_residual: R2/R3 require data decay b > 3"
                                            : "profile_residual: R1 requires data decay b >= 3");
    } else {
        if (!(decay.a > 2.0))
            throw std::invalid_argument("profile_residual: tilde variants require data decay a > 2");
        if (!(decay.b > 4.0))
            throw std::invalid_argument("profile_residual: tilde variants require data decay b > 4");
        if (std::abs(mom.m0) > opt.m0_tol)
            throw std::invalid_argument(
                "profile_residual: tilde variants require vanishing temperature mass (m0 = 0)");
    }

    const auto& g0 = *traj.front().grid();
    const int n = g0.n();
    const double rmax = g0.box() / 4.0;
    const int norm_power = tilde ? 4 : 3;

    // Initial-data fields entering the subtracted profiles.
    const spectral::SpectralVector& u0 = traj.front().u;
    spectral::SpectralVector buoy0(traj.front().grid());
    if (variant == ProfileVariant::R1) {
        buoy0[2] = traj.front().theta;
        spectral::leray_project(buoy0);
    }

    std::vector<std::array<double, 3>> flux;
    std::vector<double> times;
    if (variant == ProfileVariant::Rt1 || variant == ProfileVariant::Rt2) {
        flux = detail::flux_moments(traj);
        times = traj.times();
    }

    ProfileReport rep;
    rep.variant = variant;
    rep.kappa = opt.kappa;

    for (std::size_t e = 1; e < traj.size(); ++e) {
        const auto& st = traj.node(e);
        const double t = st.t;
        const double rmin = opt.kappa * std::sqrt(t);
        if (rmin > rmax) continue; // shell empty at this time

        // base = u(t) − e^{tΔ}u₀ (− t e^{tΔ}P(θ₀e₃) for R1), in spectral space.
        spectral::SpectralVector base = st.u;
        spectral::SpectralVector lin = u0;
        spectral::heat_multiply(lin, t);
        base -= lin;
        if (variant == ProfileVariant::R1) {
            spectral::SpectralVector jb = buoy0;
            spectral::heat_multiply(jb, t);
            base.axpy(-t, jb);
        }
        const auto b0 = base[0].to_physical();
        const auto b1 = base[1].to_physical();
        const auto b2 = base[2].to_physical();

        std::vector<detail::CorrectionSample> corr;
        std::array<double, 3> acc{}; // ∫₀ᵗ (t−s) m(s) ds, for Rt2
        if (variant == ProfileVariant::Rt1 || variant == ProfileVariant::Rt2) {
            corr = detail::correction_samples(times, flux, e, opt.gl_order);
            for (const auto& cs : corr)
                for (int c = 0; c < 3; ++c) acc[c] += cs.w * (t - cs.s) * cs.m[c];
        }

        ProfileSample sample;
        sample.t = t;
        for (int iz = 0; iz < n; ++iz) {
            const double z = g0.coord(iz);
            for (int iy = 0; iy < n; ++iy) {
                const double y = g0.coord(iy);
                std::size_t idx = (std::size_t(iz) * n + iy) * n;
                for (int ix = 0; ix < n; ++ix, ++idx) {
                    const double x = g0.coord(ix);
                    const double r = std::sqrt(x * x + y * y + z * z);
                    if (r < rmin || r > rmax) continue;
                    const Vec3 pos = {x, y, z};

                    // Pointwise profile term P_j; residual_j = base_j − P_j.
                    std::array<double, 3> prof{};
                    switch (variant) {
                        case ProfileVariant::R1: break;
                        case ProfileVariant::R2: {
                            const auto K = kernels::oseen_eval(t, pos);
                            for (int j = 0; j < 3; ++j) prof[j] = t * mom.m0 * K[j][2];
                            break;
                        }
                        case ProfileVariant::R3: {
                            const auto R = kernels::riesz_tensor(pos);
                            for (int j = 0; j < 3; ++j) prof[j] = t * mom.m0 * R[j][2];
                            break;
                        }
                        case ProfileVariant::Rt1: {
                            const auto F = kernels::div_kernel_eval(t, pos);
                            for (int j = 0; j < 3; ++j) {
                                double v = 0.0;
                                for (int h = 0; h < 3; ++h) v += F(j, h, 2) * mom.m1[h];
                                prof[j] = -t * v;
                            }
                            for (const auto& cs : corr) {
                                const auto Fs = kernels::div_kernel_eval(t - cs.s, pos);
                                for (int j = 0; j < 3; ++j) {
                                    double v = 0.0;
                                    for (int k = 0; k < 3; ++k) v += Fs(j, 2, k) * cs.m[k];
                                    prof[j] += cs.w * (t - cs.s) * v;
                                }
                            }
                            break;
                        }
                        case ProfileVariant::Rt2: {
                            const auto T = kernels::harmonic_third(pos);
                            for (int j = 0; j < 3; ++j) {
                                double v = 0.0;
                                for (int h = 0; h < 3; ++h) v += T(j, h, 2) * mom.m1[h];
                                double w = 0.0;
                                for (int k = 0; k < 3; ++k) w += T(j, 2, k) * acc[k];
                                prof[j] = -t * v + w;
                            }
                            break;
                        }
                    }

                    const double rx = b0[idx] - prof[0];
                    const double ry = b1[idx] - prof[1];
                    const double rz = b2[idx] - prof[2];
                    const double mag = std::sqrt(rx * rx + ry * ry + rz * rz);
                    double envelope = t;
                    for (int pw = 0; pw < norm_power; ++pw) envelope /= r;
                    sample.sup_abs = std::max(sample.sup_abs, mag);
                    if (mag / envelope > sample.sup_ratio) {
                        sample.sup_ratio = mag / envelope;
                        sample.argmax_r = r;
                    }
                    ++sample.n_points;
                }
            }
        }
        rep.samples.push_back(sample);
    }
    return rep;
}

} // namespace bouss::diag
