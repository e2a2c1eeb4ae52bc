#pragma once
// Spherical Bessel functions j0..j3 with series fallbacks near z = 0.
//
// The closed forms (sin/cos combinations) lose all significant digits for
// small arguments because of catastrophic cancellation; below |z| = 0.5 we
// switch to the ascending series  j_n(z) = z^n / (2n+1)!! · Σ_k (−z²/2)^k /
// (k! (2n+2k+1)!!), truncated once terms fall below 1e-20 relative.

#include <cmath>

namespace bouss {

namespace detail {

inline double sph_bessel_series(int n, double z) {
    double dfact = 1.0; // (2n+1)!!
    for (int m = 2 * n + 1; m > 1; m -= 2) dfact *= m;
    const double z2 = z * z;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        term *= -0.5 * z2 / (k * (2.0 * n + 2.0 * k + 1.0));
        sum += term;
        if (std::abs(term) < 1e-20 * std::abs(sum)) break;
    }
    return std::pow(z, n) / dfact * sum;
}

} // namespace detail

inline double sph_j0(double z) {
    if (std::abs(z) < 0.5) return detail::sph_bessel_series(0, z);
    return std::sin(z) / z;
}

inline double sph_j1(double z) {
    if (std::abs(z) < 0.5) return detail::sph_bessel_series(1, z);
    return (std::sin(z) / z - std::cos(z)) / z;
}

inline double sph_j2(double z) {
    if (std::abs(z) < 0.5) return detail::sph_bessel_series(2, z);
    const double z2 = z * z;
    return (3.0 / z2 - 1.0) * std::sin(z) / z - 3.0 * std::cos(z) / z2;
}

inline double sph_j3(double z) {
    if (std::abs(z) < 0.5) return detail::sph_bessel_series(3, z);
    const double z2 = z * z;
    return (15.0 / (z2 * z) - 6.0 / z) * std::sin(z) / z -
           (15.0 / z2 - 1.0) * std::cos(z) / z;
}

/// j1(z)/z with its finite limit 1/3 at z = 0 (transverse kernel parts).
inline double sph_j1_over_z(double z) {
    if (z == 0.0) return 1.0 / 3.0;
    return sph_j1(z) / z;
}

/// j2(z)/z², finite limit 1/15 at z = 0.
inline double sph_j2_over_z2(double z) {
    if (z == 0.0) return 1.0 / 15.0;
    return sph_j2(z) / (z * z);
}

} // namespace bouss
