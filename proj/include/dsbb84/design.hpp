#pragma once

#include <cmath>

#include "dsbb84/constants.hpp"
#include "dsbb84/errors.hpp"

namespace dsbb84 {

// The design criterion |beta2| L Omega^2 = n pi is written with the
// dispersion magnitude: the observable depends on the accumulated phase
// only through cos(.), which is even, so the sign of beta2 is
// irrelevant to the condition (it stays signed in propagation).

/// Minimum link length satisfying the criterion at harmonic n.
inline double solve_length(double beta2_abs, double omega_rf, int n) {
    if (beta2_abs <= 0.0 || omega_rf <= 0.0)
        throw no_solution("criterion needs nonzero dispersion and RF frequency");
    if (n < 1) throw invalid_parameter("harmonic n must be >= 1");
    return n * pi / (beta2_abs * omega_rf * omega_rf);
}

/// RF frequency satisfying the criterion for a fixed link.
inline double solve_frequency(double beta2_abs, double length, int n) {
    if (beta2_abs <= 0.0 || length <= 0.0)
        throw no_solution("criterion needs nonzero dispersion and length");
    if (n < 1) throw invalid_parameter("harmonic n must be >= 1");
    return std::sqrt(n * pi / (beta2_abs * length));
}

/// Accumulated dispersion phase |beta2| L Omega^2.
inline double criterion_phase(double beta2_abs, double length, double omega_rf) {
    return beta2_abs * length * omega_rf * omega_rf;
}

/// How far a configuration is from the nearest target, |beta2| L Omega^2 - n pi.
inline double criterion_residual(double beta2_abs, double length, double omega_rf,
                                 int n) {
    return criterion_phase(beta2_abs, length, omega_rf) - n * pi;
}

/// Engineering dispersion parameter D [ps/(nm km)] to beta2 [s^2/m],
/// beta2 = -D lambda^2 / (2 pi c).
inline double beta2_from_dispersion_parameter(double d_ps_per_nm_km,
                                              double wavelength_nm) {
    if (wavelength_nm <= 0.0) throw invalid_parameter("wavelength must be positive");
    const double d_si = d_ps_per_nm_km * 1e-6;      // s/m^2
    const double lambda = wavelength_nm * 1e-9;     // m
    return -d_si * lambda * lambda / (2.0 * pi * c_light);
}

inline double beta2_s2m_to_ps2km(double beta2_s2_per_m) { return beta2_s2_per_m * 1e27; }
inline double beta2_ps2km_to_s2m(double beta2_ps2_per_km) { return beta2_ps2_per_km * 1e-27; }

} // namespace dsbb84
