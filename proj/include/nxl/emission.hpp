// Copyright (c) 2026 nxl contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "nxl/constants.hpp"
#include "nxl/errors.hpp"
#include "nxl/nuclides.hpp"
#include "nxl/units.hpp"

namespace nxl {

// Uniform time grid t_i = i * dt, i = 0 .. n-1, in natural units.
struct TimeGrid {
    double dt = 0.0;
    std::size_t n = 0;

    double t_max() const { return n > 0 ? dt * double(n - 1) : 0.0; }
    bool operator==(const TimeGrid&) const = default;
};

// One foil: S nuclei sharing the transition, prepared with s0 excitations,
// transverse size L_perp.  The collective decay constant gamma and the
// dimensionless coupling g~ are fixed by (transition, L_perp) alone.
struct Foil {
    Transition transition;
    double big_s = 0.0;
    double s0 = 0.0;
    Quantity l_perp;
    Quantity gamma_coll;   // gamma = Gamma_single / (4 omega^2 L_perp^2)
    double g_tilde = 0.0;  // sqrt(2 pi Gamma_single / omega)

    Foil() = default;
    Foil(Transition tr, double big_s, double s0, Quantity l_perp)
        : transition(std::move(tr)), big_s(big_s), s0(s0), l_perp(l_perp) {
        if (!(big_s >= 1.0)) throw DomainError("Foil: S must be >= 1");
        if (!(s0 >= 0.0) || s0 > big_s) {
            throw DomainError("Foil: need 0 <= s0 <= S");
        }
        l_perp.require_dim(-1, "length");
        if (!(l_perp.value() > 0.0)) {
            throw DomainError("Foil: L_perp must be positive");
        }
        double omega = transition.omega.to_ev();
        double gamma_single = transition.gamma_single.to_ev();
        double omega_l = omega * l_perp.value();
        gamma_coll = Quantity::energy_ev(gamma_single / (4.0 * omega_l * omega_l));
        g_tilde = std::sqrt(constants::two_pi * gamma_single / omega);
    }
};

// ---------------------------------------------------------------------
// PulseSeries: intensity samples on a uniform grid.  The stored values
// are signed -- stimulated emission goes negative past the pi pulse area
// (re-absorption) and that is preserved -- but every sqrt consumer sees
// max(I, 0), with the number of clamped samples recorded.  The running
// trapezoid integral of sqrt(I) is precomputed since both the phase
// Phi(t) and the depletion-time search live on it.

class PulseSeries {
  public:
    PulseSeries() = default;

    PulseSeries(TimeGrid grid, std::vector<double> intensity)
        : grid_(grid), intensity_(std::move(intensity)) {
        if (grid_.n < 2 || !(grid_.dt > 0.0)) {
            throw DomainError("PulseSeries: need dt > 0 and at least 2 samples");
        }
        if (intensity_.size() != grid_.n) {
            throw GridMismatchError("PulseSeries: " + std::to_string(intensity_.size())
                                    + " samples on a grid of " + std::to_string(grid_.n));
        }
        cumroot_.resize(grid_.n);
        cumint_.resize(grid_.n);
        cumroot_[0] = 0.0;
        cumint_[0] = 0.0;
        double r_prev = root_at_node(0);
        for (std::size_t i = 0; i + 1 < grid_.n; ++i) {
            double r_next = root_at_node(i + 1);
            cumroot_[i + 1] = cumroot_[i] + 0.5 * grid_.dt * (r_prev + r_next);
            cumint_[i + 1] = cumint_[i]
                             + 0.5 * grid_.dt * (intensity_[i] + intensity_[i + 1]);
            r_prev = r_next;
        }
        for (double v : intensity_) {
            if (v < 0.0) ++clamp_events_;
        }
    }

    static PulseSeries zeros(TimeGrid grid) {
        return PulseSeries(grid, std::vector<double>(grid.n, 0.0));
    }

    const TimeGrid& grid() const { return grid_; }
    std::size_t size() const { return grid_.n; }
    double dt() const { return grid_.dt; }
    double time(std::size_t i) const { return grid_.dt * double(i); }
    const std::vector<double>& intensity() const { return intensity_; }
    double cumulative_root(std::size_t i) const { return cumroot_[i]; }
    std::size_t clamp_events() const { return clamp_events_; }
    bool has_reabsorption() const { return clamp_events_ > 0; }

    // int_0^t sqrt(max(I, 0)) dtau; linear interpolation of the root
    // between nodes makes this piecewise quadratic and exactly consistent
    // with the node values above.
    double cumulative_root_at(double t) const {
        auto [k, tau] = locate(t);
        double r0 = root_at_node(k);
        double r1 = root_at_node(k + 1);
        return cumroot_[k] + tau * r0 + tau * tau * (r1 - r0) / (2.0 * grid_.dt);
    }

    // Signed int_0^t I dtau (energy bookkeeping keeps the re-absorption sign).
    double integral_to(double t) const {
        auto [k, tau] = locate(t);
        double i0 = intensity_[k];
        double i1 = intensity_[k + 1];
        return cumint_[k] + tau * i0 + tau * tau * (i1 - i0) / (2.0 * grid_.dt);
    }

    friend PulseSeries operator+(const PulseSeries& a, const PulseSeries& b) {
        if (!(a.grid_ == b.grid_)) {
            throw GridMismatchError("PulseSeries sum: time grids differ");
        }
        std::vector<double> sum(a.grid_.n);
        for (std::size_t i = 0; i < a.grid_.n; ++i) {
            sum[i] = a.intensity_[i] + b.intensity_[i];
        }
        return PulseSeries(a.grid_, std::move(sum));
    }

    // CSV: header t_s,intensity_W_per_cm2; SI columns, full precision.
    void write_csv(std::ostream& out) const {
        out << "t_s,intensity_W_per_cm2\n";
        for (std::size_t i = 0; i < grid_.n; ++i) {
            out << format_number(time(i) * constants::hbar_ev_s) << ','
                << format_number(intensity_[i] * constants::ev4_w_per_cm2)
                << '\n';
        }
    }

  private:
    double root_at_node(std::size_t i) const {
        return std::sqrt(std::max(intensity_[i], 0.0));
    }

    std::pair<std::size_t, double> locate(double t) const {
        if (grid_.n < 2) throw DomainError("PulseSeries: empty series");
        double tol = 1e-9 * grid_.t_max();
        if (!(t >= 0.0) || t > grid_.t_max() + tol) {
            throw DomainError("PulseSeries: t = " + std::to_string(t)
                              + " outside grid [0, " + std::to_string(grid_.t_max())
                              + "]");
        }
        std::size_t k = std::min(static_cast<std::size_t>(t / grid_.dt),
                                 grid_.n - 2);
        return {k, t - grid_.dt * double(k)};
    }

    TimeGrid grid_;
    std::vector<double> intensity_;
    std::vector<double> cumroot_;
    std::vector<double> cumint_;
    std::size_t clamp_events_ = 0;
};

// ---------------------------------------------------------------------
// Collective spontaneous emission.

// Gamma_sp(s) = gamma (S - s + 1) s.
inline Quantity spontaneous_rate(const Foil& foil, double s) {
    if (!(s >= 0.0) || s > foil.big_s) {
        throw DomainError("spontaneous_rate: need 0 <= s <= S");
    }
    return Quantity::energy_ev(foil.gamma_coll.to_ev()
                               * (foil.big_s - s + 1.0) * s);
}

namespace detail {

inline void require_half_filled(const Foil& foil, const char* op) {
    if (foil.s0 != 0.5 * foil.big_s) {
        throw ContractError(std::string(op)
                            + ": closed form holds only for s0 = S/2; "
                              "use integrate_population_ode for other s0");
    }
}

// S / (1 + e^x) without overflow.
inline double logistic_population(double big_s, double x) {
    if (x > 0.0) {
        double e = std::exp(-x);
        return big_s * e / (1.0 + e);
    }
    return big_s / (1.0 + std::exp(x));
}

// sech(x), safe for large |x|.
inline double sech(double x) {
    double e = std::exp(-std::abs(x));
    return 2.0 * e / (1.0 + e * e);
}

}  // namespace detail

// s(t) = S / (1 + e^{gamma S t}), the large-S solution for s0 = S/2.
inline double spontaneous_population(const Foil& foil, Quantity t) {
    detail::require_half_filled(foil, "spontaneous_population");
    t.require_dim(-1, "time");
    return detail::logistic_population(
        foil.big_s, foil.gamma_coll.value() * foil.big_s * t.value());
}

// I_sp(t) = (gamma S^2 / 4) sech^2(gamma S t / 2) * omega / L_perp^2.
inline Quantity spontaneous_intensity(const Foil& foil, Quantity t) {
    detail::require_half_filled(foil, "spontaneous_intensity");
    t.require_dim(-1, "time");
    double gs = foil.gamma_coll.value() * foil.big_s;
    double sh = detail::sech(0.5 * gs * t.value());
    double lp = foil.l_perp.value();
    return Quantity::intensity_ev4(0.25 * gs * foil.big_s * sh * sh
                                   * foil.transition.omega.value() / (lp * lp));
}

inline PulseSeries spontaneous_series(const Foil& foil, TimeGrid grid) {
    detail::require_half_filled(foil, "spontaneous_series");
    std::vector<double> v(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        v[i] = spontaneous_intensity(foil,
                                     Quantity::time_natural(grid.dt * double(i)))
                   .value();
    }
    return PulseSeries(grid, std::move(v));
}

// tau_sp = 4 / (gamma S).
inline Quantity tau_spontaneous(const Foil& foil) {
    return Quantity::time_natural(
        4.0 / (foil.gamma_coll.value() * foil.big_s));
}

// tau_sp / tau_single = 64 pi^2 L_perp^2 / (lambda^2 S).
inline double coherence_advantage(double big_s, Quantity l_perp,
                                  Quantity lambda) {
    l_perp.require_dim(-1, "length");
    lambda.require_dim(-1, "length");
    if (!(big_s > 0.0) || !(l_perp.value() > 0.0) || !(lambda.value() > 0.0)) {
        throw DomainError("coherence_advantage: all arguments must be positive");
    }
    double ratio = l_perp.value() / lambda.value();
    return 64.0 * constants::pi * constants::pi * ratio * ratio / big_s;
}

// ds/dt = -gamma (S - s + 1) s integrated on the grid nodes; the logistic
// closed form is the cross-check, this handles every other s0.
inline std::vector<double> integrate_population_ode(const Foil& foil, double s0,
                                                    TimeGrid grid) {
    namespace ode = boost::numeric::odeint;
    if (!(s0 >= 0.0) || s0 > foil.big_s) {
        throw DomainError("integrate_population_ode: need 0 <= s0 <= S");
    }
    if (grid.n < 2 || !(grid.dt > 0.0)) {
        throw DomainError("integrate_population_ode: bad grid");
    }
    const double gamma = foil.gamma_coll.value();
    const double big_s = foil.big_s;
    auto rhs = [gamma, big_s](const double& s, double& dsdt, double) {
        dsdt = -gamma * (big_s - s + 1.0) * s;
    };

    std::vector<double> times(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) times[i] = grid.dt * double(i);

    std::vector<double> out;
    out.reserve(grid.n);
    auto observer = [&out, big_s](const double& s, double) {
        out.push_back(std::clamp(s, 0.0, big_s));
    };

    auto stepper = ode::make_controlled(
        1e-9 * big_s, 1e-9, ode::runge_kutta_dopri5<double>());
    try {
        ode::integrate_times(stepper, rhs, s0, times.begin(), times.end(),
                             grid.dt * 1e-3, observer, ode::max_step_checker(10000));
    } catch (const std::runtime_error& e) {
        throw IntegrationError(
            std::string("integrate_population_ode: stepper failed after ")
            + std::to_string(out.size()) + " of " + std::to_string(grid.n)
            + " grid points: " + e.what());
    }
    return out;
}

// ---------------------------------------------------------------------
// Stimulated emission.

// I_st(t) = (g~ S / L_perp^2) sin(Phi(t)) sqrt(I_in(t)),
// Phi(t) = (2 g~ / omega) int_0^t sqrt(I_in) dtau.
inline PulseSeries stimulated_intensity(const Foil& foil,
                                        const PulseSeries& incoming) {
    if (foil.s0 != foil.big_s) {
        throw ContractError(
            "stimulated_intensity: foil must be fully excited (s0 = S)");
    }
    double pref = foil.g_tilde * foil.big_s
                  / (foil.l_perp.value() * foil.l_perp.value());
    double phase_pref = 2.0 * foil.g_tilde / foil.transition.omega.value();
    std::vector<double> out(incoming.size());
    for (std::size_t i = 0; i < incoming.size(); ++i) {
        double phi = phase_pref * incoming.cumulative_root(i);
        double root = std::sqrt(std::max(incoming.intensity()[i], 0.0));
        out[i] = pref * std::sin(phi) * root;
    }
    return PulseSeries(incoming.grid(), std::move(out));
}

// First t with int_0^t sqrt(I_in) = pi omega / (2 g~): the drive has then
// rotated the quasispin by pi and the foil is fully depleted.
inline Quantity tau_stimulated(const Foil& foil, const PulseSeries& incoming) {
    const double target = constants::pi * foil.transition.omega.value()
                          / (2.0 * foil.g_tilde);
    const std::size_t n = incoming.size();
    const double attained = incoming.cumulative_root(n - 1);
    if (attained < target) {
        throw InsufficientDriveError(
            "tau_stimulated: drive reaches only "
                + format_number(attained / target)
                + " of the required pulse area within the grid",
            attained / target);
    }
    // first node at or past the target, then bisect inside the cell
    std::size_t k = 1;
    while (incoming.cumulative_root(k) < target) ++k;
    if (incoming.cumulative_root(k - 1) >= target) {
        return Quantity::time_natural(incoming.time(k - 1));
    }
    double lo = incoming.time(k - 1);
    double hi = incoming.time(k);
    while (hi - lo > 1e-10 * hi) {
        double mid = 0.5 * (lo + hi);
        if (incoming.cumulative_root_at(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return Quantity::time_natural(0.5 * (lo + hi));
}

// tau_st / tau_sp for a sech^2 spontaneous drive: artanh(tan(sqrt(pi/2)/8)).
inline double tau_stimulated_closed_form() {
    return std::atanh(std::tan(std::sqrt(constants::pi / 2.0) / 8.0));
}

}  // namespace nxl
