// Copyright (c) 2026 nxl contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace nxl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arithmetic between quantities of incompatible dimension.
struct DimensionError : Error {
    using Error::Error;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

// Scenario files: parse failures, missing fields, bare numbers, bad values.
struct ConfigError : Error {
    using Error::Error;
};

// Lookup of an unknown transition label.
struct UnknownTransitionError : ConfigError {
    using ConfigError::ConfigError;
};

// Operation invoked outside its stated contract (e.g. a closed form that
// only holds for half initial inversion).
struct ContractError : Error {
    using Error::Error;
};

// Collective-operator construction above the dense-matrix cap.
struct SizeError : Error {
    using Error::Error;
};

// ODE stepper failed to converge within its iteration budget.
struct IntegrationError : Error {
    using Error::Error;
};

// Arithmetic between pulse series on different time grids.
struct GridMismatchError : Error {
    using Error::Error;
};

// Perturbative / adiabatic validity violated (two-photon margins).
struct RegimeError : Error {
    using Error::Error;
};

// Incoming pulse never accumulates a pi pulse area; carries how much of
// the required area the drive did attain.
struct InsufficientDriveError : Error {
    InsufficientDriveError(const std::string& what, double fraction)
        : Error(what), attained_fraction(fraction) {}
    double attained_fraction;
};

}  // namespace nxl
