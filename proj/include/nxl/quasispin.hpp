// Copyright (c) 2026 nxl contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nxl/errors.hpp"

namespace nxl {

// Symmetric Dicke ladder |S, s>: S two-level nuclei sharing s excitations.
struct DickeLadder {
    double big_s;
    double s;

    DickeLadder(double big_s, double s) : big_s(big_s), s(s) {
        if (!(big_s >= 0.0)) throw DomainError("DickeLadder: S must be >= 0");
        if (!(s >= 0.0) || s > big_s) {
            throw DomainError("DickeLadder: need 0 <= s <= S");
        }
    }
};

// Sigma^+ |s> = sqrt((S-s)(s+1)) |s+1>.  Vanishes at s = S.
inline double raise_coefficient(double big_s, double s) {
    if (!(s >= 0.0) || s > big_s) {
        throw DomainError("raise_coefficient: need 0 <= s <= S");
    }
    return std::sqrt((big_s - s) * (s + 1.0));
}

// Sigma^- |s> = sqrt((S-s+1) s) |s-1>.  Vanishes at s = 0.
inline double lower_coefficient(double big_s, double s) {
    if (!(s >= 0.0) || s > big_s) {
        throw DomainError("lower_coefficient: need 0 <= s <= S");
    }
    return std::sqrt((big_s - s + 1.0) * s);
}

// Dense matrices live in the (S+1)-dimensional Dicke basis s = 0..S.
inline constexpr int dense_operator_cap = 12;

struct CollectiveOperators {
    int big_s;
    Eigen::MatrixXcd sigma_plus;
    Eigen::MatrixXcd sigma_minus;
    Eigen::MatrixXcd sigma_z;
};

namespace detail {
inline void check_dense_size(int big_s) {
    if (big_s < 1) throw DomainError("collective operators: S must be >= 1");
    if (big_s > dense_operator_cap) {
        throw SizeError("collective operators: S = " + std::to_string(big_s)
                        + " exceeds dense cap " + std::to_string(dense_operator_cap)
                        + "; use the Holstein-Primakoff route for large S");
    }
}
}  // namespace detail

inline CollectiveOperators build_collective_operators(int big_s) {
    detail::check_dense_size(big_s);
    const int dim = big_s + 1;
    CollectiveOperators ops{big_s, Eigen::MatrixXcd::Zero(dim, dim),
                            Eigen::MatrixXcd::Zero(dim, dim),
                            Eigen::MatrixXcd::Zero(dim, dim)};
    for (int s = 0; s < big_s; ++s) {
        ops.sigma_plus(s + 1, s) = raise_coefficient(big_s, s);
    }
    for (int s = 1; s <= big_s; ++s) {
        ops.sigma_minus(s - 1, s) = lower_coefficient(big_s, s);
    }
    for (int s = 0; s <= big_s; ++s) {
        ops.sigma_z(s, s) = s - 0.5 * big_s;
    }
    return ops;
}

// Independent oracle: build the same matrices by summing single-spin
// operators over the full 2^S product space (all phase factors 1, i.e.
// the coherent mode) and projecting onto the symmetric Dicke states.
// Never uses the ladder-coefficient formula.
inline CollectiveOperators build_collective_operators_bruteforce(int big_s) {
    detail::check_dense_size(big_s);
    const std::size_t dim = std::size_t{1} << big_s;
    const int nstates = big_s + 1;

    // normalized Dicke vectors: equal weight on all bitstrings with s bits set
    std::vector<Eigen::VectorXd> dicke(nstates, Eigen::VectorXd::Zero(dim));
    for (std::size_t m = 0; m < dim; ++m) {
        dicke[std::popcount(m)](static_cast<Eigen::Index>(m)) = 1.0;
    }
    for (auto& d : dicke) d.normalize();

    auto apply_raise = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
        for (std::size_t m = 0; m < dim; ++m) {
            if (v(static_cast<Eigen::Index>(m)) == 0.0) continue;
            for (int l = 0; l < big_s; ++l) {
                std::size_t bit = std::size_t{1} << l;
                if (!(m & bit)) {
                    w(static_cast<Eigen::Index>(m | bit))
                        += v(static_cast<Eigen::Index>(m));
                }
            }
        }
        return w;
    };
    auto apply_lower = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
        for (std::size_t m = 0; m < dim; ++m) {
            if (v(static_cast<Eigen::Index>(m)) == 0.0) continue;
            for (int l = 0; l < big_s; ++l) {
                std::size_t bit = std::size_t{1} << l;
                if (m & bit) {
                    w(static_cast<Eigen::Index>(m & ~bit))
                        += v(static_cast<Eigen::Index>(m));
                }
            }
        }
        return w;
    };

    CollectiveOperators ops{big_s, Eigen::MatrixXcd::Zero(nstates, nstates),
                            Eigen::MatrixXcd::Zero(nstates, nstates),
                            Eigen::MatrixXcd::Zero(nstates, nstates)};
    for (int s = 0; s < nstates; ++s) {
        Eigen::VectorXd raised = apply_raise(dicke[s]);
        Eigen::VectorXd lowered = apply_lower(dicke[s]);
        for (int sp = 0; sp < nstates; ++sp) {
            double up = dicke[sp].dot(raised);
            double down = dicke[sp].dot(lowered);
            if (up != 0.0) ops.sigma_plus(sp, s) = up;
            if (down != 0.0) ops.sigma_minus(sp, s) = down;
        }
        // Sigma^z = sum_l sigma_l^z / 2, diagonal in the bitstring basis
        double z = 0.0;
        for (std::size_t m = 0; m < dim; ++m) {
            double a = dicke[s](static_cast<Eigen::Index>(m));
            z += a * a * (std::popcount(m) - 0.5 * big_s);
        }
        ops.sigma_z(s, s) = z;
    }
    return ops;
}

// <Sigma^z>(t) for the initially stretched (fully excited) state after a
// coherent rotation: (S/2) cos(arg) with arg = 2 g~ int A dtau.
inline double rotate_sigma_z(double big_s, double pulse_area_argument) {
    return 0.5 * big_s * std::cos(pulse_area_argument);
}

// Holstein-Primakoff coherent amplitude beta(t) = -i g~ sqrt(S) int A dtau.
// Valid while |beta|^2 << S.
inline std::complex<double> hp_coherent_amplitude(double g_tilde,
                                                  double sqrt_big_s,
                                                  double pump_area) {
    return {0.0, -g_tilde * sqrt_big_s * pump_area};
}

}  // namespace nxl
