#pragma once

#include <cmath>
#include <vector>

#include "dsbb84/field_model.hpp"
#include "dsbb84/rng.hpp"

namespace dsbb84 {

/// Optical spectrum analyzer rendering settings.
struct OsaParams {
    double center_wavelength_nm = 1550.0;
    double span_nm = 0.8;
    double resolution_bandwidth_nm = 0.01; // Gaussian FWHM
    int points = 4001;
};

/// Gated single-photon detector pair model.
struct DetectorParams {
    double eta = 0.1;       // detection efficiency, [0, 1]
    double dark_prob = 8e-6; // dark-count probability per gate, [0, 1)
    double mu_sb = 0.1;     // mean sideband photon number per pulse at Alice
};

struct SpectrumPoint {
    double wavelength_nm = 0.0;
    double power_dbm = 0.0;
};

inline constexpr double osa_floor_dbm = -80.0;

/// Render the line spectrum as an OSA would display it: each line a
/// Gaussian of the resolution bandwidth, peak height equal to the line
/// power (an OSA integrates a delta line into one resolution cell),
/// with the carrier peak pinned to carrier_power_dbm.
inline std::vector<SpectrumPoint> synth_spectrum(const SidebandField& field,
                                                 double carrier_power_dbm,
                                                 const OsaParams& osa) {
    if (osa.resolution_bandwidth_nm <= 0.0)
        throw invalid_parameter("resolution bandwidth must be positive");
    if (osa.points < 2) throw invalid_parameter("need at least 2 spectrum points");

    const double lambda0 = osa.center_wavelength_nm; // carrier wavelength
    const double f_rf = field.omega_rf / (2.0 * pi);
    // wavelength offset of one RF sideband: lambda^2 f / c
    const double dlam_nm = (lambda0 * 1e-9) * (lambda0 * 1e-9) * f_rf / c_light * 1e9;
    if (osa.span_nm / 2.0 < dlam_nm)
        throw invalid_parameter("OSA span does not cover the RF sidebands");

    const double p_carrier = std::norm(field.carrier);
    if (p_carrier <= 0.0)
        throw invalid_parameter("carrier power is zero; cannot set the dBm reference");
    const double scale = std::pow(10.0, carrier_power_dbm / 10.0) / p_carrier; // -> mW

    struct Line { double lambda_nm; double peak_mw; };
    std::vector<Line> lines;
    const auto add = [&](int k, double power) {
        if (power > 0.0 || k == 0)
            lines.push_back({lambda0 - k * dlam_nm, power * scale});
    };
    add(0, p_carrier);
    add(1, std::norm(field.upper));
    add(-1, std::norm(field.lower));
    for (const auto& [k, a] : field.higher_orders) add(k, std::norm(a));

    const double sigma = osa.resolution_bandwidth_nm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    const double floor_mw = std::pow(10.0, osa_floor_dbm / 10.0);

    std::vector<SpectrumPoint> out(osa.points);
    for (int i = 0; i < osa.points; ++i) {
        const double lam = lambda0 - osa.span_nm / 2.0 +
                           osa.span_nm * i / (osa.points - 1);
        double p = 0.0;
        for (const auto& l : lines) {
            const double d = (lam - l.lambda_nm) / sigma;
            p += l.peak_mw * std::exp(-0.5 * d * d);
        }
        out[i] = {lam, 10.0 * std::log10(std::max(p, floor_mw))};
    }
    return out;
}

struct ClickProbabilities {
    double plus = 0.0;
    double minus = 0.0;
};

/// Per-gate click probabilities of the two sideband detectors for
/// normalized sideband powers p_+/-, Poisson photon statistics and an
/// independent dark-count floor:
///   q = 1 - (1 - d) exp(-mu eta 10^(-loss/10) p)
inline ClickProbabilities click_probabilities(double p_plus, double p_minus,
                                              const DetectorParams& det,
                                              double path_loss_db) {
    if (p_plus < 0.0 || p_plus > 1.0 || p_minus < 0.0 || p_minus > 1.0)
        throw invalid_parameter("normalized sideband powers must be in [0, 1]");
    if (det.eta < 0.0 || det.eta > 1.0)
        throw invalid_parameter("detector efficiency must be in [0, 1]");
    if (det.dark_prob < 0.0 || det.dark_prob >= 1.0)
        throw invalid_parameter("dark-count probability must be in [0, 1)");
    if (det.mu_sb < 0.0) throw invalid_parameter("mu_sb must be >= 0");

    const double flux = det.mu_sb * det.eta * std::pow(10.0, -path_loss_db / 10.0);
    const auto q = [&](double p) {
        return 1.0 - (1.0 - det.dark_prob) * std::exp(-flux * p);
    };
    return {q(p_plus), q(p_minus)};
}

enum class ClickOutcome { none, plus, minus, both };

/// Two independent Bernoulli draws, one per detector.
inline ClickOutcome sample_clicks(double q_plus, double q_minus, RngStream& rng) {
    if (q_plus < 0.0 || q_plus > 1.0 || q_minus < 0.0 || q_minus > 1.0)
        throw invalid_parameter("click probabilities must be in [0, 1]");
    const bool cp = rng.next_double() < q_plus;
    const bool cm = rng.next_double() < q_minus;
    if (cp && cm) return ClickOutcome::both;
    if (cp) return ClickOutcome::plus;
    if (cm) return ClickOutcome::minus;
    return ClickOutcome::none;
}

} // namespace dsbb84
