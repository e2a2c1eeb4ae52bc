#pragma once
// Solver state and trajectory containers.
//
// A Trajectory stores states at increasing times plus a provenance record
// (which mild formulation produced it, and a hash of the producing
// configuration).  Between stored nodes it reconstructs states by
// integrating-factor interpolation: both neighbours are propagated to the
// query time by the exact heat factor and blended linearly,
//
//   û(s) = (1−w) e^{−(s−t_j)|ξ|²} û_j + w e^{+(t_{j+1}−s)|ξ|²} û_{j+1},
//   w = (s−t_j)/(t_{j+1}−t_j).
//
// This is exact on trajectories of the form e^{sΔ}f and s·e^{sΔ}f (the
// linear parts of both mild formulations) and second-order accurate on the
// rest.  The backward factor is capped: when (t_{j+1}−s)|ξ|² exceeds the cap
// the mode's amplitude at the right node is heat-suppressed far below the
// left node's and the forward branch alone is used.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"
#include "operators.hpp"

namespace bouss::solver {

using spectral::Grid;
using spectral::GridPtr;
using spectral::SpectralScalar;
using spectral::SpectralVector;

/// Two mild formulations of the velocity equation: the classical one carries
/// the buoyancy as a Duhamel term L(θ); the buoyancy-integrated one moves the
/// leading buoyancy into the linear flow t·e^{tΔ}P(θ₀e₃) and keeps only the
/// time-weighted correction E(u, θ).
enum class MildFormula { Classical, BuoyancyIntegrated };

inline const char* to_string(MildFormula f) {
    return f == MildFormula::Classical ? "classical" : "buoyancy-integrated";
}

inline MildFormula mild_formula_from_string(const std::string& s) {
    if (s == "classical") return MildFormula::Classical;
    if (s == "buoyancy-integrated") return MildFormula::BuoyancyIntegrated;
    throw std::invalid_argument("unknown mild formula: " + s);
}

struct State {
    double t = 0.0;
    SpectralVector u;
    SpectralScalar theta;

    State(double time, SpectralVector uu, SpectralScalar th)
        : t(time), u(std::move(uu)), theta(std::move(th)) {}
    explicit State(GridPtr grid, double time = 0.0)
        : t(time), u(grid), theta(grid) {}

    const GridPtr& grid() const { return u.grid(); }
};

class Trajectory {
  public:
    Trajectory() = default;
    Trajectory(std::string formula, std::string config_hash)
        : formula_(std::move(formula)), config_hash_(std::move(config_hash)) {}

    void add(State s) {
        if (!nodes_.empty() && s.t <= nodes_.back().t)
            throw std::invalid_argument("Trajectory: node times must increase");
        nodes_.push_back(std::move(s));
    }

    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    const State& node(std::size_t i) const { return nodes_.at(i); }
    const State& front() const { return nodes_.front(); }
    const State& back() const { return nodes_.back(); }

    std::vector<double> times() const {
        std::vector<double> t;
        t.reserve(nodes_.size());
        for (const auto& s : nodes_) t.push_back(s.t);
        return t;
    }

    const std::string& formula() const { return formula_; }
    const std::string& config_hash() const { return config_hash_; }
    void set_provenance(std::string formula, std::string hash) {
        formula_ = std::move(formula);
        config_hash_ = std::move(hash);
    }

    /// Stored node at time t (1e-9·(1+|t|) tolerance); throws if absent.
    const State& at_time(double t) const {
        for (const auto& s : nodes_)
            if (std::abs(s.t - t) <= 1e-9 * (1.0 + std::abs(t))) return s;
        throw std::out_of_range("Trajectory: no stored node at t = " + std::to_string(t));
    }

    /// Integrating-factor reconstruction at any covered time.
    State state_at(double s) const {
        if (nodes_.empty()) throw std::out_of_range("Trajectory: empty");
        const double t0 = nodes_.front().t, t1 = nodes_.back().t;
        const double tol = 1e-9 * (1.0 + std::abs(s));
        if (s < t0 - tol || s > t1 + tol)
            throw std::out_of_range("Trajectory: time " + std::to_string(s) +
                                    " outside covered range [" + std::to_string(t0) + ", " +
                                    std::to_string(t1) + "]");
        s = std::min(std::max(s, t0), t1);
        // Locate the bracketing interval.
        std::size_t j = 0;
        while (j + 2 < nodes_.size() && nodes_[j + 1].t <= s) ++j;
        const State& a = nodes_[j];
        const State& b = nodes_[j + 1 < nodes_.size() ? j + 1 : j];
        if (std::abs(a.t - s) <= tol || nodes_.size() == 1) return a;
        if (std::abs(b.t - s) <= tol) return b;

        const Grid& g = *a.grid();
        const double w = (s - a.t) / (b.t - a.t);
        State out(a.grid(), s);
        constexpr double kBackwardCap = 30.0;
        g.for_each_mode([&](std::size_t idx, int ikx, int ky, int kz) {
            const double xx = g.xi(ikx), xy = g.xi(ky), xz = g.xi(kz);
            const double xi2 = xx * xx + xy * xy + xz * xz;
            const double ef = std::exp(-(s - a.t) * xi2);
            const double back_arg = (b.t - s) * xi2;
            if (back_arg > kBackwardCap) {
                for (int c = 0; c < 3; ++c) out.u[c][idx] = ef * a.u[c][idx];
                out.theta[idx] = ef * a.theta[idx];
            } else {
                const double eb = std::exp(back_arg);
                for (int c = 0; c < 3; ++c)
                    out.u[c][idx] = (1.0 - w) * ef * a.u[c][idx] + w * eb * b.u[c][idx];
                out.theta[idx] = (1.0 - w) * ef * a.theta[idx] + w * eb * b.theta[idx];
            }
        });
        return out;
    }

  private:
    std::vector<State> nodes_;
    std::string formula_;
    std::string config_hash_;
};

/// FNV-1a hash of a canonical configuration string, for provenance records.
inline std::string fnv64_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace bouss::solver
