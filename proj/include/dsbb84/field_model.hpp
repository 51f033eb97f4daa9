#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "dsbb84/constants.hpp"
#include "dsbb84/errors.hpp"

namespace dsbb84 {

using cplx = std::complex<double>;

/// Optical field as a comb of discrete lines around the carrier:
/// carrier at omega_0, first-order sidebands at omega_0 +/- omega_rf,
/// and (in exact mode) higher orders at omega_0 + k*omega_rf, |k| >= 2.
/// Amplitudes are normalized to the source amplitude.
struct SidebandField {
    cplx carrier{};
    cplx upper{};  // line at omega_0 + omega_rf
    cplx lower{};  // line at omega_0 - omega_rf
    std::vector<std::pair<int, cplx>> higher_orders{};
    double omega_rf = 0.0; // rad/s

    static SidebandField pure_carrier(cplx amplitude, double omega_rf) {
        SidebandField f;
        f.carrier = amplitude;
        f.omega_rf = omega_rf;
        return f;
    }

    [[nodiscard]] double total_power() const {
        double p = std::norm(carrier) + std::norm(upper) + std::norm(lower);
        for (const auto& [k, a] : higher_orders) p += std::norm(a);
        return p;
    }
};

/// Phase modulator drive settings. The index is m = pi * V_drive / V_pi
/// when parameterized by voltages; t_mod is the amplitude transmittance
/// of the device (insertion loss).
struct ModulatorParams {
    double m = 0.0;      // modulation index, >= 0
    double phi = 0.0;    // RF drive phase, rad
    double t_mod = 1.0;  // amplitude transmittance, (0, 1]

    static ModulatorParams from_drive_voltage(double v_drive, double v_pi,
                                              double phi, double t_mod = 1.0) {
        if (v_pi <= 0.0) throw invalid_parameter("v_pi must be positive");
        return ModulatorParams{pi * v_drive / v_pi, phi, t_mod};
    }
};

/// Fiber link: flat loss plus group-velocity dispersion.
struct LinkParams {
    double alpha_db_per_km = 0.0; // power loss, dB/km
    double beta2 = 0.0;           // GVD, s^2/m, signed
    double length = 0.0;          // m
};

enum class ModulationMode { first_order, exact };

/// Amplitude attenuation factor after z meters of fiber.
inline double attenuation_amplitude(double alpha_db_per_km, double z) {
    return std::pow(10.0, -alpha_db_per_km * (z / 1000.0) / 20.0);
}

namespace detail {

// i^k for integer k
inline cplx unit_imag_pow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

inline double bessel_j(int k, double x) {
    const double v = std::cyl_bessel_j(static_cast<double>(std::abs(k)), x);
    return (k < 0 && (std::abs(k) % 2 == 1)) ? -v : v;
}

inline std::map<int, cplx> to_lines(const SidebandField& f) {
    std::map<int, cplx> lines;
    lines[0] = f.carrier;
    lines[1] = f.upper;
    lines[-1] = f.lower;
    for (const auto& [k, a] : f.higher_orders) lines[k] += a;
    return lines;
}

inline SidebandField from_lines(const std::map<int, cplx>& lines, double omega_rf) {
    SidebandField f;
    f.omega_rf = omega_rf;
    for (const auto& [k, a] : lines) {
        if (k == 0) f.carrier = a;
        else if (k == 1) f.upper = a;
        else if (k == -1) f.lower = a;
        else if (std::norm(a) > 0.0) f.higher_orders.emplace_back(k, a);
    }
    return f;
}

} // namespace detail

/// Apply a phase modulator driven at the field's RF frequency.
///
/// first_order: small-index expansion, exp(jm cos) ~ 1 + jm cos. The
/// carrier seeds the +/-1 sidebands with j*(m/2)*exp(+/-j phi); existing
/// sidebands pass through scaled by t_mod (cross-products of two
/// modulation indices are dropped).
///
/// exact: Jacobi-Anger expansion; every input line spawns lines at all
/// offsets k with weight j^k * J_k(m) * exp(jk phi), truncated where
/// |J_k(m)| < 1e-12.
inline SidebandField phase_modulate(const SidebandField& field,
                                    const ModulatorParams& mod,
                                    ModulationMode mode) {
    if (mod.m < 0.0) throw invalid_parameter("modulation index must be >= 0");
    if (mod.t_mod <= 0.0 || mod.t_mod > 1.0)
        throw invalid_parameter("modulator transmittance must be in (0, 1]");
    if (mode == ModulationMode::first_order && mod.m > 0.5)
        throw regime_violation(
            "first-order model requires m <= 0.5; use ModulationMode::exact");

    if (mode == ModulationMode::first_order) {
        SidebandField out = field;
        const cplx half = cplx{0.0, 0.5 * mod.m} * field.carrier;
        out.carrier = field.carrier * mod.t_mod;
        out.upper = (field.upper + half * std::polar(1.0, mod.phi)) * mod.t_mod;
        out.lower = (field.lower + half * std::polar(1.0, -mod.phi)) * mod.t_mod;
        for (auto& [k, a] : out.higher_orders) a *= mod.t_mod;
        return out;
    }

    // truncation order for the Bessel comb
    int kmax = 1;
    while (kmax < 60 && std::abs(detail::bessel_j(kmax, mod.m)) >= 1e-12) ++kmax;

    const auto in = detail::to_lines(field);
    std::map<int, cplx> out;
    for (const auto& [k0, a] : in) {
        if (std::norm(a) == 0.0) continue;
        for (int k = -kmax; k <= kmax; ++k) {
            const double jk = detail::bessel_j(k, mod.m);
            if (std::abs(jk) < 1e-12) continue;
            out[k0 + k] += a * mod.t_mod * detail::unit_imag_pow(k) * jk *
                           std::polar(1.0, k * mod.phi);
        }
    }
    return detail::from_lines(out, field.omega_rf);
}

/// Propagate z meters along the link. Each line at offset k*omega_rf
/// is attenuated and picks up the dispersion phase (1/2) beta2 z (k Omega)^2.
/// The common carrier phase beta0*z is dropped (unobservable in
/// intensity detection), so the carrier phase reference stays 0.
inline SidebandField propagate(const SidebandField& field, const LinkParams& link,
                               double z) {
    if (z < 0.0 || z > link.length)
        throw invalid_parameter("propagation distance outside [0, link length]");

    const double amp = attenuation_amplitude(link.alpha_db_per_km, z);
    const auto line_factor = [&](int k) {
        const double koff = k * field.omega_rf;
        return amp * std::polar(1.0, 0.5 * link.beta2 * z * koff * koff);
    };

    SidebandField out = field;
    out.carrier = field.carrier * amp;
    out.upper = field.upper * line_factor(1);
    out.lower = field.lower * line_factor(-1);
    for (auto& [k, a] : out.higher_orders) a *= line_factor(k);
    return out;
}

/// Interference visibility of the sideband powers, 2 mA mB / (mA^2 + mB^2).
inline double visibility(double m_a, double m_b) {
    if (m_a < 0.0 || m_b < 0.0) throw invalid_parameter("indices must be >= 0");
    if (m_a == 0.0 && m_b == 0.0)
        throw undefined_visibility("visibility undefined for m_a = m_b = 0");
    return 2.0 * m_a * m_b / (m_a * m_a + m_b * m_b);
}

/// Bob's index that realizes a target visibility v against a given m_a
/// (the root with m_b <= m_a).
inline double matched_index_for_visibility(double m_a, double v) {
    if (m_a <= 0.0) throw invalid_parameter("m_a must be positive");
    if (v <= 0.0 || v > 1.0) throw invalid_parameter("visibility must be in (0, 1]");
    return m_a * (1.0 - std::sqrt(1.0 - v * v)) / v;
}

/// Common phase absorbed into Bob's drive so that the symmetric
/// per-sideband dispersion phases reduce to the asymmetric textbook form:
/// upper argument Phi_B - Phi_A, lower argument Phi_B - Phi_A + beta2 L Omega^2.
inline double calibrate_reference(const LinkParams& link, double omega_rf) {
    return 0.5 * link.beta2 * link.length * omega_rf * omega_rf;
}

/// Same, for a receiver at position z instead of the far end.
inline double calibrate_reference_at(const LinkParams& link, double omega_rf, double z) {
    return 0.5 * link.beta2 * z * omega_rf * omega_rf;
}

/// Normalization for the cascade sideband powers: twice the incoherent
/// sum of the two interfering sideband amplitudes, so that the
/// normalized powers take the form (1/2)[1 + V cos(...)] and hit 1 at
/// V = 1 constructive interference.
inline double normalization_constant(const ModulatorParams& alice,
                                     const ModulatorParams& bob,
                                     const LinkParams& link, double z) {
    const double a = attenuation_amplitude(link.alpha_db_per_km, z);
    const double scale = alice.t_mod * bob.t_mod * a;
    // 2 * [(mA/2)^2 + (mB/2)^2] * scale^2
    return scale * scale * (alice.m * alice.m + bob.m * bob.m) / 2.0;
}

struct SidebandPowers {
    double plus = 0.0;   // line at omega_0 + omega_rf
    double minus = 0.0;  // line at omega_0 - omega_rf
};

/// Normalized first-order sideband powers of a cascade output field.
inline SidebandPowers sideband_powers(const SidebandField& field, double norm) {
    if (norm <= 0.0)
        throw undefined_normalization("cascade carries no sideband power");
    return {std::norm(field.upper) / norm, std::norm(field.lower) / norm};
}

/// Full Alice -> fiber(z) -> Bob chain in the first-order model,
/// returning normalized sideband powers.
inline SidebandPowers cascade_powers(const ModulatorParams& alice,
                                     const ModulatorParams& bob,
                                     const LinkParams& link, double z,
                                     double omega_rf) {
    auto f = SidebandField::pure_carrier(1.0, omega_rf);
    f = phase_modulate(f, alice, ModulationMode::first_order);
    f = propagate(f, link, z);
    f = phase_modulate(f, bob, ModulationMode::first_order);
    return sideband_powers(f, normalization_constant(alice, bob, link, z));
}

} // namespace dsbb84
