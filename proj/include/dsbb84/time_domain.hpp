#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "dsbb84/field_model.hpp"

namespace dsbb84 {

struct LinePower {
    int order = 0;    // frequency offset in units of omega_rf
    double power = 0.0;
};

/// Exact time-domain reference for the first-order cascade model.
///
/// Synthesizes exp(j m_A cos(Omega t + Phi_A)) on a uniform grid over an
/// integer number of RF periods, applies per-line dispersion phase and
/// loss of the full link in the frequency domain, applies Bob's exact
/// modulation in the time domain, and projects out the line powers.
/// Shares no code with the sideband bookkeeping it validates.
inline std::vector<LinePower> time_domain_oracle(double source_power,
                                                 const ModulatorParams& alice,
                                                 const ModulatorParams& bob,
                                                 const LinkParams& link,
                                                 double omega_rf,
                                                 int n_samples, int n_periods) {
    if (n_samples < 1024 || (n_samples & (n_samples - 1)) != 0)
        throw invalid_parameter("n_samples must be a power of two >= 1024");
    if (n_periods < 1 || n_samples / n_periods < 8)
        throw invalid_parameter("need n_samples/n_periods >= 8 for the retained harmonics");
    if (alice.m < 0.0 || bob.m < 0.0)
        throw invalid_parameter("modulation index must be >= 0");

    // work in RF-phase units x = Omega t; omega_rf reenters only through
    // the dispersion phase of each line
    const int kmax = std::min(48, n_samples / (2 * n_periods) - 1);
    const int nlines = 2 * kmax + 1;

    // phase grid and Alice's exact field
    std::vector<double> x(n_samples);
    std::vector<cplx> field(n_samples);
    const double amp0 = std::sqrt(source_power) * alice.t_mod;
    for (int n = 0; n < n_samples; ++n) {
        x[n] = 2.0 * pi * n_periods * n / n_samples;
        field[n] = amp0 * std::polar(1.0, alice.m * std::cos(x[n] + alice.phi));
    }

    const auto project = [&](const std::vector<cplx>& f) {
        std::vector<cplx> lines(nlines);
        for (int n = 0; n < n_samples; ++n) {
            const cplx w = std::polar(1.0, -x[n]);
            cplx rot = std::polar(1.0, kmax * x[n]); // e^{+j kmax x}, start at k=-kmax
            for (int i = 0; i < nlines; ++i) {
                lines[i] += f[n] * rot;
                rot *= w;
            }
        }
        for (auto& a : lines) a /= static_cast<double>(n_samples);
        return lines;
    };

    // to the frequency domain, through the fiber, and back
    auto lines = project(field);
    const double loss = attenuation_amplitude(link.alpha_db_per_km, link.length);
    for (int i = 0; i < nlines; ++i) {
        const double koff = (i - kmax) * omega_rf;
        lines[i] *= loss * std::polar(1.0, 0.5 * link.beta2 * link.length * koff * koff);
    }
    for (int n = 0; n < n_samples; ++n) {
        cplx acc = 0.0;
        const cplx w = std::polar(1.0, x[n]);
        cplx rot = std::polar(1.0, -kmax * x[n]);
        for (int i = 0; i < nlines; ++i) {
            acc += lines[i] * rot;
            rot *= w;
        }
        field[n] = acc * bob.t_mod * std::polar(1.0, bob.m * std::cos(x[n] + bob.phi));
    }

    lines = project(field);
    std::vector<LinePower> out;
    out.reserve(nlines);
    for (int i = 0; i < nlines; ++i)
        out.push_back({i - kmax, std::norm(lines[i])});
    return out;
}

/// Convenience lookup; returns 0 for a line the oracle did not retain.
inline double line_power(const std::vector<LinePower>& spectrum, int order) {
    for (const auto& l : spectrum)
        if (l.order == order) return l.power;
    return 0.0;
}

} // namespace dsbb84
