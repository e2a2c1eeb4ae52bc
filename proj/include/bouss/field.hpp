#pragma once
// Spectral field containers: scalars and 3-vectors of Fourier coefficients
// bound to a shared Grid.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "grid.hpp"

namespace bouss::spectral {

class SpectralScalar {
  public:
    explicit SpectralScalar(GridPtr grid) : grid_(std::move(grid)), c_(grid_->spec_size()) {}

    static SpectralScalar from_physical(GridPtr grid, const std::vector<double>& f) {
        if (f.size() != grid->real_size())
            throw std::invalid_argument("from_physical: size mismatch");
        SpectralScalar s(grid);
        grid->forward(f.data(), s.c_.data());
        return s;
    }

    std::vector<double> to_physical() const {
        std::vector<double> f(grid_->real_size());
        grid_->inverse(c_.data(), f.data());
        return f;
    }

    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return c_.size(); }
    std::complex<double>& operator[](std::size_t i) { return c_[i]; }
    const std::complex<double>& operator[](std::size_t i) const { return c_[i]; }
    std::complex<double>* data() { return c_.data(); }
    const std::complex<double>* data() const { return c_.data(); }

    SpectralScalar& operator+=(const SpectralScalar& o) {
        check_compatible(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    SpectralScalar& operator-=(const SpectralScalar& o) {
        check_compatible(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    SpectralScalar& operator*=(double a) {
        for (auto& v : c_) v *= a;
        return *this;
    }
    /// this += a·o
    void axpy(double a, const SpectralScalar& o) {
        check_compatible(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += a * o.c_[i];
    }
    void zero() { std::fill(c_.begin(), c_.end(), std::complex<double>(0.0, 0.0)); }

    /// L² norm over the box by Parseval: ‖f‖² = L³ Σ_k |c_k|², taking the
    /// half-spectrum storage multiplicity into account.
    double l2_norm() const {
        const int half = grid_->n() / 2;
        double sum = 0.0;
        grid_->for_each_mode([&](std::size_t idx, int ikx, int, int) {
            const double mult = (ikx == 0 || ikx == half) ? 1.0 : 2.0;
            sum += mult * std::norm(c_[idx]);
        });
        const double L = grid_->box();
        return std::sqrt(L * L * L * sum);
    }

    /// Max-modulus of coefficients (cheap finiteness/diagnostic check).
    double spec_linf() const {
        double m = 0.0;
        for (const auto& v : c_) m = std::max(m, std::abs(v));
        return m;
    }

    /// Sup norm on the grid (one inverse transform).
    double linf_norm() const {
        const auto f = to_physical();
        double m = 0.0;
        for (double v : f) m = std::max(m, std::abs(v));
        return m;
    }

    bool finite() const {
        for (const auto& v : c_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

  private:
    void check_compatible(const SpectralScalar& o) const {
        if (o.grid_->n() != grid_->n() || o.grid_->box() != grid_->box())
            throw std::invalid_argument("spectral op: incompatible grids");
    }

    GridPtr grid_;
    std::vector<std::complex<double>> c_;
};

class SpectralVector {
  public:
    explicit SpectralVector(GridPtr grid)
        : comps_{SpectralScalar(grid), SpectralScalar(grid), SpectralScalar(grid)} {}

    const GridPtr& grid() const { return comps_[0].grid(); }
    SpectralScalar& operator[](int j) { return comps_[j]; }
    const SpectralScalar& operator[](int j) const { return comps_[j]; }

    SpectralVector& operator+=(const SpectralVector& o) {
        for (int j = 0; j < 3; ++j) comps_[j] += o.comps_[j];
        return *this;
    }
    SpectralVector& operator-=(const SpectralVector& o) {
        for (int j = 0; j < 3; ++j) comps_[j] -= o.comps_[j];
        return *this;
    }
    SpectralVector& operator*=(double a) {
        for (int j = 0; j < 3; ++j) comps_[j] *= a;
        return *this;
    }
    void axpy(double a, const SpectralVector& o) {
        for (int j = 0; j < 3; ++j) comps_[j].axpy(a, o.comps_[j]);
    }
    void zero() {
        for (int j = 0; j < 3; ++j) comps_[j].zero();
    }

    /// Componentwise-summed L² norm: ‖v‖ = (Σ_j ‖v_j‖²)^{1/2}.
    double l2_norm() const {
        double s = 0.0;
        for (int j = 0; j < 3; ++j) {
            const double nj = comps_[j].l2_norm();
            s += nj * nj;
        }
        return std::sqrt(s);
    }

    /// Pointwise-magnitude sup norm max_x |v(x)| (three inverse transforms).
    double linf_norm() const {
        const auto fx = comps_[0].to_physical();
        const auto fy = comps_[1].to_physical();
        const auto fz = comps_[2].to_physical();
        double m = 0.0;
        for (std::size_t i = 0; i < fx.size(); ++i) {
            const double v = fx[i] * fx[i] + fy[i] * fy[i] + fz[i] * fz[i];
            if (v > m) m = v;
        }
        return std::sqrt(m);
    }

    bool finite() const {
        return comps_[0].finite() && comps_[1].finite() && comps_[2].finite();
    }

  private:
    std::array<SpectralScalar, 3> comps_;
};

} // namespace bouss::spectral
