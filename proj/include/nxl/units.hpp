// Copyright (c) 2026 nxl contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>

#include "nxl/constants.hpp"
#include "nxl/errors.hpp"

namespace nxl {

// Natural units with hbar = c = epsilon_0 = 1 and eV as the base scale.
// Every quantity carries a single integer dimension: the power of energy.
// Energies are +1, times and lengths are -1, intensities are +4, pulse
// areas and quasispin projections are 0.  Mixed-dimension sums throw;
// conversions to SI are explicit and checked.
class Quantity {
  public:
    constexpr Quantity() = default;
    constexpr Quantity(double value, int dim) : value_(value), dim_(dim) {}

    static constexpr Quantity dimensionless(double v) { return {v, 0}; }
    static constexpr Quantity energy_ev(double v) { return {v, 1}; }
    static constexpr Quantity energy_kev(double v) { return {v * 1e3, 1}; }
    static constexpr Quantity time_natural(double v) { return {v, -1}; }
    static constexpr Quantity length_natural(double v) { return {v, -1}; }
    static constexpr Quantity intensity_ev4(double v) { return {v, 4}; }

    static constexpr Quantity from_seconds(double s) {
        return {s / constants::hbar_ev_s, -1};
    }
    static constexpr Quantity from_nanometers(double nm) {
        return {nm / constants::hbar_c_ev_nm, -1};
    }
    static constexpr Quantity from_micrometers(double um) {
        return from_nanometers(um * 1e3);
    }
    static constexpr Quantity from_w_per_cm2(double i) {
        return {i / constants::ev4_w_per_cm2, 4};
    }

    constexpr double value() const { return value_; }
    constexpr int dim() const { return dim_; }

    double to_ev() const { return require_dim(1, "energy").value_; }
    double to_kev() const { return to_ev() * 1e-3; }
    double to_seconds() const {
        return require_dim(-1, "time").value_ * constants::hbar_ev_s;
    }
    double to_nanoseconds() const { return to_seconds() * 1e9; }
    double to_nanometers() const {
        return require_dim(-1, "length").value_ * constants::hbar_c_ev_nm;
    }
    double to_micrometers() const { return to_nanometers() * 1e-3; }
    double to_w_per_cm2() const {
        return require_dim(4, "intensity").value_ * constants::ev4_w_per_cm2;
    }

    const Quantity& require_dim(int dim, const char* what) const {
        if (dim_ != dim) {
            throw DimensionError(std::string("expected ") + what + " (E^"
                                 + std::to_string(dim) + "), got E^"
                                 + std::to_string(dim_));
        }
        return *this;
    }

    Quantity inverse() const {
        if (value_ == 0.0) throw DomainError("inverse of zero quantity");
        return {1.0 / value_, -dim_};
    }

    // Square root demands an even dimension; field amplitudes sqrt(I)
    // (E^2) are the one place this appears.
    Quantity sqrt() const {
        if (value_ < 0.0) throw DomainError("sqrt of negative quantity");
        if (dim_ % 2 != 0) {
            throw DimensionError("sqrt of odd-dimension quantity E^"
                                 + std::to_string(dim_));
        }
        return {std::sqrt(value_), dim_ / 2};
    }

    constexpr Quantity operator-() const { return {-value_, dim_}; }

    friend Quantity operator+(Quantity a, Quantity b) {
        check_same(a, b, "+");
        return {a.value_ + b.value_, a.dim_};
    }
    friend Quantity operator-(Quantity a, Quantity b) {
        check_same(a, b, "-");
        return {a.value_ - b.value_, a.dim_};
    }
    friend constexpr Quantity operator*(Quantity a, Quantity b) {
        return {a.value_ * b.value_, a.dim_ + b.dim_};
    }
    friend constexpr Quantity operator*(double x, Quantity q) {
        return {x * q.value_, q.dim_};
    }
    friend constexpr Quantity operator*(Quantity q, double x) { return x * q; }
    friend Quantity operator/(Quantity a, Quantity b) {
        if (b.value_ == 0.0) throw DomainError("division by zero quantity");
        return {a.value_ / b.value_, a.dim_ - b.dim_};
    }
    friend constexpr Quantity operator/(Quantity q, double x) {
        return {q.value_ / x, q.dim_};
    }

    friend bool operator<(Quantity a, Quantity b) {
        check_same(a, b, "<");
        return a.value_ < b.value_;
    }
    friend bool operator>(Quantity a, Quantity b) { return b < a; }
    friend bool operator==(Quantity a, Quantity b) {
        return a.dim_ == b.dim_ && a.value_ == b.value_;
    }

  private:
    static void check_same(Quantity a, Quantity b, const char* op) {
        if (a.dim_ != b.dim_) {
            throw DimensionError(std::string("dimension mismatch in '") + op
                                 + "': E^" + std::to_string(a.dim_) + " vs E^"
                                 + std::to_string(b.dim_));
        }
    }

    double value_ = 0.0;
    int dim_ = 0;
};

// Lifetime <-> linewidth: tau = 1/Gamma.
inline Quantity energy_to_time(Quantity gamma) {
    gamma.require_dim(1, "energy");
    if (gamma.value() <= 0.0) throw DomainError("energy_to_time: nonpositive energy");
    return gamma.inverse();
}

inline Quantity time_to_energy(Quantity tau) {
    tau.require_dim(-1, "time");
    if (tau.value() <= 0.0) throw DomainError("time_to_energy: nonpositive time");
    return tau.inverse();
}

// lambda = 2*pi/omega; lambda[nm] * E[eV] = 2*pi*hbar*c by construction.
inline Quantity wavelength_of(Quantity omega) {
    omega.require_dim(1, "energy");
    if (omega.value() <= 0.0) throw DomainError("wavelength_of: nonpositive energy");
    return Quantity::length_natural(constants::two_pi / omega.value());
}

}  // namespace nxl
