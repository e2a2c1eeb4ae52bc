#pragma once
// Periodic grid descriptor and FFT machinery.
//
// Real fields live on an N³ grid over a periodic cube of side L with spacing
// h = L/N, stored x-fastest: index = (iz·N + iy)·N + ix.  The spatial origin
// sits at index 0 and coord() reports minimal-image coordinates in
// (−L/2, L/2], so |coord| is the distance to the origin.  Spectral fields use
// the FFTW r2c half-complex layout, (iz·N + iy)·(N/2+1) + ikx, with complex
// coefficients normalized so that  f(x) = Σ_k c_k e^{i ξ_k · x},
// ξ_k = 2πk/L, k ∈ {−N/2+1, …, N/2}.  The forward transform carries the 1/N³
// factor; the inverse is unnormalized, so round trips are exact to rounding.
//
// Plans are created with FFTW_ESTIMATE: planning is then deterministic and
// independent of measurement noise, which keeps outputs bit-reproducible for
// a fixed FFTW version.  A Grid owns one r2c and one c2r plan plus scratch
// buffers; a mutex serializes transforms through the shared scratch.

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace bouss::spectral {

class Grid {
  public:
    Grid(int n, double box) : n_(n), box_(box) {
        if (n < 4 || n % 2 != 0) throw std::invalid_argument("Grid: N must be even and >= 4");
        if (box <= 0.0) throw std::invalid_argument("Grid: box side must be positive");
        real_scratch_ = fftw_alloc_real(real_size());
        cplx_scratch_ = fftw_alloc_complex(spec_size());
        if (!real_scratch_ || !cplx_scratch_) throw std::bad_alloc();
        fwd_ = fftw_plan_dft_r2c_3d(n, n, n, real_scratch_, cplx_scratch_, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_3d(n, n, n, cplx_scratch_, real_scratch_, FFTW_ESTIMATE);
        if (!fwd_ || !bwd_) throw std::runtime_error("Grid: FFTW plan creation failed");
    }

    ~Grid() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(real_scratch_);
        fftw_free(cplx_scratch_);
    }

    Grid(const Grid&) = delete;
    Grid& operator=(const Grid&) = delete;

    int n() const { return n_; }
    double box() const { return box_; }
    double spacing() const { return box_ / n_; }
    std::size_t real_size() const { return std::size_t(n_) * n_ * n_; }
    std::size_t spec_size() const { return std::size_t(n_) * n_ * (n_ / 2 + 1); }
    int nkx() const { return n_ / 2 + 1; }

    /// Signed integer mode for axis index i ∈ [0, N): k = i ≤ N/2 ? i : i − N.
    int mode(int i) const { return i <= n_ / 2 ? i : i - n_; }

    /// Physical wavenumber ξ = 2πk/L.
    double xi(int k) const { return 2.0 * M_PI * k / box_; }

    /// Minimal-image coordinate of grid index i along one axis: i·Δx wrapped
    /// into (−L/2, L/2].  The transform pair places the spatial origin at
    /// index 0, so |coord| is the minimal-image distance to the origin —
    /// the center of every spectrally constructed datum.
    /// The negative side is computed as −(N−i)·Δx so that coord(N−i) is the
    /// exact floating-point negation of coord(i); mirror-symmetric integrands
    /// then cancel exactly in ball sums.
    double coord(int i) const {
        return i <= n_ / 2 ? spacing() * i : -spacing() * (n_ - i);
    }

    /// Forward transform (real → spectral, normalized by 1/N³).
    void forward(const double* in, std::complex<double>* out) const {
        std::lock_guard<std::mutex> lock(mtx_);
        const std::size_t nr = real_size(), ns = spec_size();
        for (std::size_t i = 0; i < nr; ++i) real_scratch_[i] = in[i];
        fftw_execute(fwd_);
        const double norm = 1.0 / double(nr);
        auto* src = reinterpret_cast<std::complex<double>*>(cplx_scratch_);
        for (std::size_t i = 0; i < ns; ++i) out[i] = src[i] * norm;
    }

    /// Inverse transform (spectral → real, unnormalized).
    void inverse(const std::complex<double>* in, double* out) const {
        std::lock_guard<std::mutex> lock(mtx_);
        const std::size_t nr = real_size(), ns = spec_size();
        auto* dst = reinterpret_cast<std::complex<double>*>(cplx_scratch_);
        for (std::size_t i = 0; i < ns; ++i) dst[i] = in[i];
        fftw_execute(bwd_);
        for (std::size_t i = 0; i < nr; ++i) out[i] = real_scratch_[i];
    }

    /// Loop over spectral storage calling fn(idx, kx, ky, kz) with signed modes.
    template <class Fn>
    void for_each_mode(Fn&& fn) const {
        const int nx = nkx();
        std::size_t idx = 0;
        for (int iz = 0; iz < n_; ++iz) {
            const int kz = mode(iz);
            for (int iy = 0; iy < n_; ++iy) {
                const int ky = mode(iy);
                for (int ikx = 0; ikx < nx; ++ikx, ++idx) fn(idx, ikx, ky, kz);
            }
        }
    }

  private:
    int n_;
    double box_;
    double* real_scratch_;
    fftw_complex* cplx_scratch_;
    fftw_plan fwd_;
    fftw_plan bwd_;
    mutable std::mutex mtx_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(int n, double box) { return std::make_shared<const Grid>(n, box); }

} // namespace bouss::spectral
