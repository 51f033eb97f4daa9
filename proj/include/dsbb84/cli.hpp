#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "dsbb84/config.hpp"
#include "dsbb84/design.hpp"
#include "dsbb84/detection.hpp"
#include "dsbb84/field_model.hpp"
#include "dsbb84/protocol.hpp"

namespace dsbb84::cli {

struct CommandOutput {
    // file name suffix (before the extension) -> CSV/text content;
    // an empty suffix means "the output file itself"
    std::vector<std::pair<std::string, std::string>> files;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string length_tag(double len_m) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%gm", len_m);
    return buf;
}

} // namespace detail

/// Data behind the QBER-vs-distance figure: sweep the receiver position
/// z over [0, L] and emit the closed-form DS QBER next to the
/// dispersionless AM-AM baseline.
inline CommandOutput cmd_qber_curve(const RunConfig& cfg) {
    cfg.validate();
    CommandOutput out;

    const double phase = criterion_phase(std::abs(cfg.beta2_s2m()), cfg.length_m,
                                         cfg.omega_rf());
    if (std::abs(phase - pi) > 1e-6 * pi)
        out.warnings.push_back(
            "link is off the design point: |beta2| L Omega^2 = " +
            detail::num(phase) + " instead of pi; the curve will not reach the "
            "standard BB84 floor at z = L");

    SessionConfig s = cfg.session();
    const double v = visibility(s.alice.m, s.bob.m);
    // baseline is evaluated z-independent, at the far-end signal level
    out.warnings.push_back(
        "AM-AM reference column is z-independent (constant contrast = V, "
        "far-end signal level)");
    const double baseline = am_am_reference_qber(
        v, s.det.dark_prob, p_signal(s.link.length, s.link, s.det));

    std::ostringstream csv;
    csv << "z_over_L,qber_ds,qber_am_am_reference\n";
    for (int i = 0; i < cfg.sweep_steps; ++i) {
        const double frac = static_cast<double>(i) / (cfg.sweep_steps - 1);
        csv << detail::num(frac) << ','
            << detail::num(qber_closed_form(frac * s.link.length, s)) << ','
            << detail::num(baseline) << '\n';
    }
    out.files.emplace_back("", csv.str());
    return out;
}

namespace detail {

/// Cascade field (carrier + sidebands) at the end of a link of length
/// `len`, with Bob's reference calibrated for that length.
inline SidebandField cascade_field(const RunConfig& cfg, double len, double delta_phi) {
    const LinkParams link = cfg.link_of_length(len);
    const double calib = calibrate_reference(link, cfg.omega_rf());
    auto f = SidebandField::pure_carrier(1.0, cfg.omega_rf());
    f = phase_modulate(f, cfg.alice_mod(0.0), ModulationMode::first_order);
    f = propagate(f, link, len);
    f = phase_modulate(f, cfg.bob_mod(delta_phi + calib), ModulationMode::first_order);
    return f;
}

} // namespace detail

/// OSA spectra for each (length, delta-phi) panel of the spectra figure.
inline CommandOutput cmd_spectrum(const RunConfig& cfg) {
    cfg.validate();
    CommandOutput out;
    for (double len : cfg.sweep_lengths_m) {
        for (int half : {0, 1}) {
            const double dphi = half ? pi : 0.0;
            const auto field = detail::cascade_field(cfg, len, dphi);
            const double carrier_dbm =
                cfg.source_power_dbm + 10.0 * std::log10(std::norm(field.carrier));
            const auto spectrum = synth_spectrum(field, carrier_dbm, cfg.osa());

            std::ostringstream csv;
            csv << "wavelength_nm,power_dbm\n";
            for (const auto& pt : spectrum)
                csv << detail::num(pt.wavelength_nm) << ','
                    << detail::num(pt.power_dbm) << '\n';
            out.files.emplace_back(
                "_" + detail::length_tag(len) + (half ? "_dphi_pi" : "_dphi_0"),
                csv.str());
        }
    }
    return out;
}

/// Normalized sideband powers vs Alice-Bob phase shift, one file per
/// link length (the sideband-amplitude figure).
inline CommandOutput cmd_sidebands(const RunConfig& cfg) {
    cfg.validate();
    CommandOutput out;
    for (double len : cfg.sweep_lengths_m) {
        const LinkParams link = cfg.link_of_length(len);
        const double calib = calibrate_reference(link, cfg.omega_rf());
        std::ostringstream csv;
        csv << "delta_phi,p_plus,p_minus\n";
        for (int i = 0; i < cfg.sweep_steps; ++i) {
            const double dphi = 2.0 * pi * i / (cfg.sweep_steps - 1);
            const auto p = cascade_powers(cfg.alice_mod(0.0),
                                          cfg.bob_mod(dphi + calib), link, len,
                                          cfg.omega_rf());
            csv << detail::num(dphi) << ',' << detail::num(p.plus) << ','
                << detail::num(p.minus) << '\n';
        }
        out.files.emplace_back("_" + detail::length_tag(len), csv.str());
    }
    return out;
}

/// Contrast available to a receiver as a function of fiber length.
inline CommandOutput cmd_contrast(const RunConfig& cfg) {
    cfg.validate();
    CommandOutput out;
    const double v = visibility(cfg.index_a(), cfg.index_b());
    const LinkParams link = cfg.link();
    std::ostringstream csv;
    csv << "length_m,contrast\n";
    for (int i = 0; i < cfg.sweep_steps; ++i) {
        const double z = cfg.length_m * i / (cfg.sweep_steps - 1);
        csv << detail::num(z) << ','
            << detail::num(contrast(z, cfg.omega_rf(), link, v)) << '\n';
    }
    out.files.emplace_back("", csv.str());
    return out;
}

enum class DesignSolve { length, frequency, report };

/// Solve the dispersion design criterion, or just report the residual
/// of the configured link.
inline CommandOutput cmd_design(const RunConfig& cfg, DesignSolve solve, int n) {
    cfg.validate();
    const double beta2_abs = std::abs(cfg.beta2_s2m());
    const double omega = cfg.omega_rf();

    std::ostringstream rep;
    rep << "beta2_abs_s2_per_m=" << detail::num(beta2_abs) << '\n'
        << "beta2_abs_ps2_per_km=" << detail::num(beta2_abs * 1e27) << '\n'
        << "n=" << n << '\n';

    double length = cfg.length_m;
    double omega_used = omega;
    if (solve == DesignSolve::length) {
        length = solve_length(beta2_abs, omega, n);
        rep << "f_rf_ghz=" << detail::num(omega / (2.0 * pi) / 1e9) << '\n'
            << "solved_length_m=" << detail::num(length) << '\n';
    } else if (solve == DesignSolve::frequency) {
        omega_used = solve_frequency(beta2_abs, cfg.length_m, n);
        rep << "length_m=" << detail::num(cfg.length_m) << '\n'
            << "solved_f_rf_ghz=" << detail::num(omega_used / (2.0 * pi) / 1e9) << '\n';
    } else {
        rep << "f_rf_ghz=" << detail::num(omega / (2.0 * pi) / 1e9) << '\n'
            << "length_m=" << detail::num(cfg.length_m) << '\n';
    }
    rep << "criterion_phase=" << detail::num(criterion_phase(beta2_abs, length, omega_used))
        << '\n'
        << "residual_vs_npi="
        << detail::num(criterion_residual(beta2_abs, length, omega_used, n)) << '\n';

    CommandOutput out;
    out.files.emplace_back("", rep.str());
    return out;
}

/// Monte-Carlo session; key=value report, or a CSV row for sweeps.
inline CommandOutput cmd_session(const RunConfig& cfg, bool csv_row) {
    cfg.validate();
    const SessionConfig s = cfg.session();
    const QberReport rep = run_session(s);

    CommandOutput out;
    if (csv_row) {
        std::ostringstream csv;
        csv << "n_pulses,receiver_z_m,seed,sifted_count,error_count,"
               "double_click_count,no_click_count,qber_estimate,"
               "qber_closed_form,binomial_std_error\n";
        csv << s.n_pulses << ',' << detail::num(s.receiver_position()) << ','
            << s.seed << ',' << rep.sifted_count << ',' << rep.error_count << ','
            << rep.double_click_count << ',' << rep.no_click_count << ','
            << detail::num(rep.qber_estimate) << ','
            << detail::num(rep.qber_closed_form) << ','
            << detail::num(rep.binomial_std_error) << '\n';
        out.files.emplace_back("", csv.str());
    } else {
        std::ostringstream txt;
        txt << "n_pulses=" << s.n_pulses << '\n'
            << "receiver_z_m=" << detail::num(s.receiver_position()) << '\n'
            << "seed=" << s.seed << '\n'
            << "sifted_count=" << rep.sifted_count << '\n'
            << "error_count=" << rep.error_count << '\n'
            << "double_click_count=" << rep.double_click_count << '\n'
            << "no_click_count=" << rep.no_click_count << '\n'
            << "estimate_defined=" << (rep.estimate_defined ? 1 : 0) << '\n'
            << "qber_estimate=" << detail::num(rep.qber_estimate) << '\n'
            << "qber_closed_form=" << detail::num(rep.qber_closed_form) << '\n'
            << "binomial_std_error=" << detail::num(rep.binomial_std_error) << '\n';
        out.files.emplace_back("", txt.str());
    }
    if (!rep.estimate_defined)
        out.warnings.push_back("no pulses survived sifting; QBER estimate undefined");
    return out;
}

} // namespace dsbb84::cli
