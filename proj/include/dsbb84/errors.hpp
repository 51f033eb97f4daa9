#pragma once

#include <stdexcept>
#include <string>

namespace dsbb84 {

/// Bad argument value (out of range, inconsistent units, ...).
struct invalid_parameter : std::invalid_argument {
    explicit invalid_parameter(const std::string& what) : std::invalid_argument(what) {}
};

/// Request valid only in a different numerical regime (e.g. first-order
/// model asked for a modulation index that needs the exact path).
struct regime_violation : std::domain_error {
    explicit regime_violation(const std::string& what) : std::domain_error(what) {}
};

/// Normalization constant of the sideband powers is zero.
struct undefined_normalization : std::domain_error {
    explicit undefined_normalization(const std::string& what) : std::domain_error(what) {}
};

/// Visibility is undefined (both modulation indices zero).
struct undefined_visibility : std::domain_error {
    explicit undefined_visibility(const std::string& what) : std::domain_error(what) {}
};

/// Design criterion has no solution for the given inputs.
struct no_solution : std::domain_error {
    explicit no_solution(const std::string& what) : std::domain_error(what) {}
};

} // namespace dsbb84
