// Copyright (c) 2026 nxl contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nxl/constants.hpp"
#include "nxl/errors.hpp"
#include "nxl/nuclides.hpp"
#include "nxl/quasispin.hpp"
#include "nxl/units.hpp"

namespace nxl {

// g~ = sqrt(2 pi Gamma_single / omega).
inline double coupling_from_linewidth(const Transition& tr) {
    double gamma = tr.gamma_single.to_ev();
    double omega = tr.omega.to_ev();
    if (!(gamma > 0.0) || !(omega > 0.0)) {
        throw DomainError("coupling_from_linewidth: need Gamma > 0 and omega > 0");
    }
    return std::sqrt(constants::two_pi * gamma / omega);
}

// Coherent pump envelope A(t): constant over [0, duration] unless an
// explicitly sampled envelope is supplied.
struct PumpPulse {
    Quantity amplitude;        // field amplitude (energy dimension)
    Quantity duration;         // tau_pump
    double n_wavecycles = 0.0; // N with tau_pump = 2 pi N / omega
    std::vector<double> samples;  // optional sampled envelope, natural units
    double sample_dt = 0.0;

    bool is_constant() const { return samples.empty(); }

    static PumpPulse constant(Quantity amplitude, Quantity duration,
                              double n_wavecycles) {
        amplitude.require_dim(1, "field amplitude");
        duration.require_dim(-1, "time");
        if (amplitude.value() < 0.0) {
            throw DomainError("PumpPulse: amplitude must be >= 0");
        }
        if (!(duration.value() > 0.0)) {
            throw DomainError("PumpPulse: duration must be positive");
        }
        return {amplitude, duration, n_wavecycles, {}, 0.0};
    }

    // A = sqrt(I)/omega over tau_pump = 2 pi N / omega.
    static PumpPulse constant_from_intensity(const Transition& tr,
                                             Quantity intensity,
                                             double n_wavecycles) {
        intensity.require_dim(4, "intensity");
        if (intensity.value() < 0.0) {
            throw DomainError("PumpPulse: intensity must be >= 0");
        }
        if (!(n_wavecycles >= 1.0)) {
            throw DomainError("PumpPulse: need at least one wave cycle");
        }
        double omega = tr.omega.to_ev();
        Quantity amplitude =
            Quantity::energy_ev(std::sqrt(intensity.value()) / omega);
        Quantity duration =
            Quantity::time_natural(constants::two_pi * n_wavecycles / omega);
        return {amplitude, duration, n_wavecycles, {}, 0.0};
    }

    static PumpPulse sampled(std::vector<double> envelope, double dt) {
        if (envelope.size() < 2 || !(dt > 0.0)) {
            throw DomainError("PumpPulse: sampled envelope needs dt > 0 and 2+ samples");
        }
        for (double a : envelope) {
            if (a < 0.0) throw DomainError("PumpPulse: amplitude must be >= 0");
        }
        PumpPulse p;
        p.duration = Quantity::time_natural(dt * double(envelope.size() - 1));
        p.amplitude = Quantity::energy_ev(envelope.front());
        p.samples = std::move(envelope);
        p.sample_dt = dt;
        return p;
    }

    // int_0^t A dtau (trapezoid for sampled envelopes).
    double area_to(double t_natural) const {
        if (!(t_natural >= 0.0)) throw DomainError("PumpPulse: t must be >= 0");
        if (is_constant()) {
            return amplitude.value() * std::min(t_natural, duration.value());
        }
        double area = 0.0;
        double t_end = std::min(t_natural, duration.value());
        std::size_t full = static_cast<std::size_t>(t_end / sample_dt);
        full = std::min(full, samples.size() - 1);
        for (std::size_t i = 0; i < full; ++i) {
            area += 0.5 * sample_dt * (samples[i] + samples[i + 1]);
        }
        if (full + 1 < samples.size()) {
            double tau = t_end - sample_dt * double(full);
            double a0 = samples[full];
            double a1 = samples[full + 1];
            area += tau * a0 + tau * tau * (a1 - a0) / (2.0 * sample_dt);
        }
        return area;
    }

    double total_area() const { return area_to(duration.value()); }
};

// s(t) = (S/2) [1 - cos(2 g~ int_0^t A)] -- Rabi rotation of the quasispin.
inline double pump_population(double big_s, double g_tilde,
                              const PumpPulse& pulse, Quantity t) {
    t.require_dim(-1, "time");
    if (!(big_s >= 1.0)) throw DomainError("pump_population: S must be >= 1");
    double tv = t.value();
    double tol = 1e-9 * pulse.duration.value();
    if (!(tv >= 0.0) || tv > pulse.duration.value() + tol) {
        throw DomainError("pump_population: t outside the pulse [0, tau_pump]");
    }
    double arg = 2.0 * g_tilde * pulse.area_to(tv);
    return 0.5 * big_s * (1.0 - std::cos(arg));
}

// Full inversion needs int A dtau = pi / (2 g~).
inline double pi_pulse_area(double g_tilde) {
    if (!(g_tilde > 0.0)) throw DomainError("pi_pulse_area: g~ must be positive");
    return constants::pi / (2.0 * g_tilde);
}

// I_pump = omega^5 / (32 pi N^2 Gamma_single): the intensity whose constant
// pulse of N wave cycles is exactly a pi pulse.  Evaluated both ways --
// directly and through (A, tau_pump) -- as an internal consistency check.
inline Quantity required_pump_intensity(const Transition& tr,
                                        double n_wavecycles) {
    if (!(n_wavecycles >= 1.0)) {
        throw DomainError("required_pump_intensity: need N >= 1");
    }
    double omega = tr.omega.to_ev();
    double gamma = tr.gamma_single.to_ev();
    double direct = std::pow(omega, 5)
                    / (32.0 * constants::pi * n_wavecycles * n_wavecycles * gamma);

    double g_tilde = coupling_from_linewidth(tr);
    double tau = constants::two_pi * n_wavecycles / omega;
    double a_pi = constants::pi / (2.0 * g_tilde * tau);  // amplitude of the pi pulse
    double via_pulse = a_pi * a_pi * omega * omega;

    double rel = std::abs(direct - via_pulse) / direct;
    if (rel > 1e-10) {
        throw Error("required_pump_intensity: internal cross-check failed, rel "
                    + format_number(rel));
    }
    return Quantity::intensity_ev4(direct);
}

// ---------------------------------------------------------------------
// Incoherent pumping Monte Carlo: j equal-magnitude sub-pulses with
// independent uniform phases add as a random walk in beta, so the exciton
// number n = |sum beta_i|^2 grows linearly in j instead of quadratically.

struct PumpMcRow {
    std::size_t j;
    double mean_n;
    double stderr_n;
};

struct PumpMcResult {
    std::vector<PumpMcRow> rows;
    double beta_per_subpulse = 0.0;  // |beta| contributed by one sub-pulse
    bool regime_warning = false;     // expected n not << S
};

namespace detail {

// Substream scheme: member i seeds mt19937_64 with the i-th output of a
// splitmix64 sequence started at the master seed.  Closed form below, so
// members can be derived independently (and in parallel).
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t i) {
    std::uint64_t z = master + (i + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Uniform double in [0, 1) from the top 53 bits; avoids the
// implementation-defined std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

inline PumpMcResult simulate_incoherent_pump(double big_s, double g_tilde,
                                             double sub_pulse_area,
                                             std::size_t n_subpulses,
                                             std::uint64_t seed,
                                             std::size_t ensemble,
                                             bool random_phases = true) {
    if (!(big_s >= 1.0)) throw DomainError("simulate_incoherent_pump: S >= 1");
    if (!(g_tilde > 0.0) || !(sub_pulse_area > 0.0)) {
        throw DomainError("simulate_incoherent_pump: need g~ > 0 and area > 0");
    }
    if (n_subpulses < 1 || ensemble < 1) {
        throw DomainError("simulate_incoherent_pump: need subpulses, ensemble >= 1");
    }

    const double beta = g_tilde * std::sqrt(big_s) * sub_pulse_area;
    const double b2 = beta * beta;

    std::vector<double> sum(n_subpulses, 0.0);
    std::vector<double> sumsq(n_subpulses, 0.0);
    for (std::size_t e = 0; e < ensemble; ++e) {
        std::mt19937_64 rng(detail::substream_seed(seed, e));
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < n_subpulses; ++i) {
            double phi = random_phases
                             ? constants::two_pi * detail::uniform01(rng)
                             : 0.0;
            re += std::cos(phi);
            im += std::sin(phi);
            double n = b2 * (re * re + im * im);
            sum[i] += n;
            sumsq[i] += n * n;
        }
    }

    PumpMcResult result;
    result.beta_per_subpulse = beta;
    result.rows.resize(n_subpulses);
    double max_mean = 0.0;
    for (std::size_t i = 0; i < n_subpulses; ++i) {
        double mean = sum[i] / double(ensemble);
        double stderr_n = mean;  // degenerate ensemble: 100% uncertainty
        if (ensemble > 1) {
            double var = (sumsq[i] - double(ensemble) * mean * mean)
                         / double(ensemble - 1);
            stderr_n = std::sqrt(std::max(var, 0.0) / double(ensemble));
        }
        result.rows[i] = {i + 1, mean, stderr_n};
        max_mean = std::max(max_mean, mean);
    }
    // Holstein-Primakoff validity: n must stay well below S.
    result.regime_warning = max_mean > 0.1 * big_s;
    return result;
}

// ---------------------------------------------------------------------
// Two-photon UV pumping of a forbidden transition (order of magnitude).

struct TwoPhotonScheme {
    double g23 = 0.0;  // forbidden lower leg, dimensionless
    double g34 = 0.0;  // allowed upper leg, dimensionless
    Quantity omega1;
    Quantity omega2;
    Quantity detuning;
    Quantity omega_uv;  // omega1 + omega2 by construction (resonance)

    TwoPhotonScheme(double g23, double g34, Quantity omega1, Quantity omega2,
                    Quantity detuning)
        : g23(g23), g34(g34), omega1(omega1), omega2(omega2),
          detuning(detuning), omega_uv(omega1 + omega2) {
        omega1.require_dim(1, "energy");
        omega2.require_dim(1, "energy");
        detuning.require_dim(1, "energy");
        if (!(omega1.value() > 0.0) || !(omega2.value() > 0.0)) {
            throw DomainError("TwoPhotonScheme: energies must be positive");
        }
    }
};

// Couplings from a dipole length of the given number of Bohr radii: the
// allowed leg is e*l*omega2, the forbidden leg carries one extra
// multipole suppression factor omega1*l.
inline TwoPhotonScheme dipole_two_photon_scheme(double dipole_bohr_radii,
                                                Quantity omega1,
                                                Quantity omega2,
                                                Quantity detuning) {
    if (!(dipole_bohr_radii > 0.0)) {
        throw DomainError("dipole_two_photon_scheme: dipole length must be positive");
    }
    double l = Quantity::from_nanometers(dipole_bohr_radii
                                         * constants::bohr_radius_nm)
                   .value();  // natural length, eV^-1
    double e = std::sqrt(4.0 * constants::pi * constants::fine_structure);
    double g34 = e * l * omega2.to_ev();
    double g23 = e * l * l * omega1.to_ev() * omega1.to_ev();
    return TwoPhotonScheme(g23, g34, omega1, omega2, detuning);
}

// Omega_eff = g23 A1 g34 A2 / Delta after adiabatic elimination of the
// intermediate level; only valid while both single-photon Rabi couplings
// stay a factor 10 below the detuning.
inline Quantity two_photon_effective_rabi(const TwoPhotonScheme& scheme,
                                          Quantity a1, Quantity a2) {
    a1.require_dim(1, "field amplitude");
    a2.require_dim(1, "field amplitude");
    double delta = scheme.detuning.value();
    if (delta == 0.0) {
        throw DomainError("two_photon_effective_rabi: detuning must be nonzero");
    }
    double r1 = std::abs(scheme.g23 * a1.value() / delta);
    double r2 = std::abs(scheme.g34 * a2.value() / delta);
    if (r1 > 0.1 || r2 > 0.1) {
        throw RegimeError(
            "two_photon_effective_rabi: adiabatic elimination invalid, "
            "|g A|/Delta = " + format_number(r1) + " (leg 2-3), "
            + format_number(r2) + " (leg 3-4); need both <= 0.1");
    }
    return Quantity::energy_ev(scheme.g23 * a1.value() * scheme.g34
                               * a2.value() / delta);
}

struct TwoPhotonDrive {
    Quantity intensity;  // common beam intensity (geometric mean over legs)
    Quantity tau_pump;
    Quantity amplitude;  // common field amplitude A1 = A2
};

// Closed-form estimate of the beam intensity whose effective two-photon
// Rabi coupling gives a pi pulse within N wave cycles.  No adiabaticity
// margin is enforced here: the target scenarios sit at order-unity
// |g A|/Delta on the allowed leg, and only order-of-magnitude output is
// claimed.
inline TwoPhotonDrive two_photon_required_intensity(
    const TwoPhotonScheme& scheme, double n_wavecycles) {
    if (!(n_wavecycles >= 1.0)) {
        throw DomainError("two_photon_required_intensity: need N >= 1");
    }
    double delta = std::abs(scheme.detuning.value());
    if (delta == 0.0) {
        throw DomainError("two_photon_required_intensity: detuning must be nonzero");
    }
    double w1 = scheme.omega1.to_ev();
    double w2 = scheme.omega2.to_ev();
    double tau = constants::two_pi * n_wavecycles / w1;
    double omega_eff = 0.5 * constants::pi / tau;  // pi pulse: Omega tau = pi/2
    double a2 = omega_eff * delta / (scheme.g23 * scheme.g34);
    return {Quantity::intensity_ev4(a2 * w1 * w2),
            Quantity::time_natural(tau),
            Quantity::energy_ev(std::sqrt(a2))};
}

}  // namespace nxl
