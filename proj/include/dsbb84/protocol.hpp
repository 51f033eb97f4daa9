#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "dsbb84/detection.hpp"
#include "dsbb84/field_model.hpp"
#include "dsbb84/rng.hpp"

namespace dsbb84 {

/// One key-exchange session over the simulated physical layer.
struct SessionConfig {
    std::int64_t n_pulses = 100000;
    LinkParams link{};
    ModulatorParams alice{};   // phi is set per pulse by the encoder
    ModulatorParams bob{};
    DetectorParams det{};
    double omega_rf = 0.0;     // rad/s
    double receiver_z = -1.0;  // m; < 0 means "at the far end of the link"
    std::uint64_t seed = 1;
    int n_workers = 1;

    [[nodiscard]] double receiver_position() const {
        return receiver_z < 0.0 ? link.length : receiver_z;
    }
};

struct QberReport {
    std::int64_t sifted_count = 0;
    std::int64_t error_count = 0;
    std::int64_t double_click_count = 0;
    std::int64_t no_click_count = 0;
    double qber_estimate = std::numeric_limits<double>::quiet_NaN();
    double qber_closed_form = 0.0;
    double binomial_std_error = std::numeric_limits<double>::quiet_NaN();
    bool estimate_defined = false;
};

/// Alice's phase for (bit, basis): basis 1 uses {0, pi}, basis 2 the
/// conjugate set {pi/2, 3pi/2}.
inline double encode_alice(int bit, int basis) {
    const double base = (basis == 2) ? pi / 2.0 : 0.0;
    return base + (bit ? pi : 0.0);
}

/// Bob's drive phase for his basis choice, plus the dispersion
/// calibration offset his local oscillator absorbs.
inline double choose_bob_phase(int basis, double calibration_offset) {
    return (basis == 2 ? pi / 2.0 : 0.0) + calibration_offset;
}

/// Upper-sideband click means bit 0, lower means bit 1.
inline int decide_bit(ClickOutcome outcome) {
    if (outcome == ClickOutcome::plus) return 0;
    if (outcome == ClickOutcome::minus) return 1;
    throw invalid_parameter("decide_bit needs a single-click outcome");
}

struct AliceRecord {
    int bit = 0;
    int basis = 1;
};

struct BobRecord {
    int basis = 1;
    ClickOutcome outcome = ClickOutcome::none;
};

/// Indices kept after basis reconciliation: bases match and exactly one
/// detector clicked.
inline std::vector<std::size_t> sift(const std::vector<AliceRecord>& alice,
                                     const std::vector<BobRecord>& bob) {
    if (alice.size() != bob.size())
        throw invalid_parameter("record streams have different lengths");
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < alice.size(); ++i) {
        const bool single = bob[i].outcome == ClickOutcome::plus ||
                            bob[i].outcome == ClickOutcome::minus;
        if (single && alice[i].basis == bob[i].basis) kept.push_back(i);
    }
    return kept;
}

/// Signal detection probability of the adopted faint-pulse budget,
/// p_signal(z) = mu_sb * eta * 10^(-alpha z / 10).
inline double p_signal(double z, const LinkParams& link, const DetectorParams& det) {
    return det.mu_sb * det.eta *
           std::pow(10.0, -link.alpha_db_per_km * (z / 1000.0) / 10.0);
}

/// Distinguishability available to a receiver at position z: the
/// detector contrast of the brightest encoded state,
///   C(z) = V sin^2(theta/2) / (1 + V cos^2(theta/2)),  theta = beta2 z Omega^2.
/// Grows from 0 at z = 0 to V where the accumulated dispersion phase
/// reaches pi.
inline double contrast(double z, double omega_rf, const LinkParams& link, double v) {
    if (z < 0.0 || z > link.length)
        throw invalid_parameter("receiver position outside [0, link length]");
    const double half = 0.5 * link.beta2 * z * omega_rf * omega_rf;
    const double s = std::sin(half), c = std::cos(half);
    return v * s * s / (1.0 + v * c * c);
}

/// Error rate of a standard measurement at position z:
///   QBER(z) = (1/2) ((1 - C) p_signal + d) / (p_signal + d)
inline double qber_closed_form(double z, const SessionConfig& cfg) {
    const double v = visibility(cfg.alice.m, cfg.bob.m);
    const double c = contrast(z, cfg.omega_rf, cfg.link, v);
    const double p = p_signal(z, cfg.link, cfg.det);
    const double d = cfg.det.dark_prob;
    if (p + d <= 0.0) return 0.5;
    return 0.5 * ((1.0 - c) * p + d) / (p + d);
}

/// Dispersionless AM-AM baseline: the z-independent value of the QBER
/// expression with the contrast pinned at the visibility.
inline double am_am_reference_qber(double v, double dark_prob, double p_sig) {
    if (p_sig + dark_prob <= 0.0) return 0.5;
    return 0.5 * ((1.0 - v) * p_sig + dark_prob) / (p_sig + dark_prob);
}

namespace detail {

struct ChunkTally {
    std::int64_t sifted = 0, errors = 0, doubles = 0, nones = 0;
};

inline constexpr std::int64_t chunk_size = 8192;

inline ChunkTally run_chunk(const SessionConfig& cfg, std::uint64_t chunk_index,
                            std::int64_t pulses) {
    RngStream rng = RngStream::for_chunk(cfg.seed, chunk_index);
    const double z = cfg.receiver_position();
    const double calib = calibrate_reference_at(cfg.link, cfg.omega_rf, z);
    const double path_loss_db = cfg.link.alpha_db_per_km * (z / 1000.0);

    std::vector<AliceRecord> alice(pulses);
    std::vector<BobRecord> bob(pulses);
    ChunkTally tally;
    for (std::int64_t i = 0; i < pulses; ++i) {
        alice[i] = {rng.next_bit() ? 1 : 0, rng.next_bit() ? 2 : 1};
        bob[i].basis = rng.next_bit() ? 2 : 1;

        ModulatorParams a = cfg.alice;
        a.phi = encode_alice(alice[i].bit, alice[i].basis);
        ModulatorParams b = cfg.bob;
        b.phi = choose_bob_phase(bob[i].basis, calib);

        const auto powers = cascade_powers(a, b, cfg.link, z, cfg.omega_rf);
        const auto q = click_probabilities(powers.plus, powers.minus, cfg.det,
                                           path_loss_db);
        bob[i].outcome = sample_clicks(q.plus, q.minus, rng);
        if (bob[i].outcome == ClickOutcome::both) ++tally.doubles;
        if (bob[i].outcome == ClickOutcome::none) ++tally.nones;
    }

    for (std::size_t idx : sift(alice, bob)) {
        ++tally.sifted;
        if (decide_bit(bob[idx].outcome) != alice[idx].bit) ++tally.errors;
    }
    return tally;
}

} // namespace detail

/// Run a full BB84 session. Pulses are processed in fixed-size chunks,
/// each with an RNG stream derived from (seed, chunk index), so the
/// report is bit-identical for any worker count.
inline QberReport run_session(const SessionConfig& cfg) {
    if (cfg.n_pulses < 1) throw invalid_parameter("n_pulses must be >= 1");
    const double z = cfg.receiver_position();
    if (z < 0.0 || z > cfg.link.length)
        throw invalid_parameter("receiver position outside [0, link length]");

    const std::int64_t n_chunks =
        (cfg.n_pulses + detail::chunk_size - 1) / detail::chunk_size;
    std::vector<detail::ChunkTally> tallies(n_chunks);

    const auto worker = [&](std::int64_t first, std::int64_t stride) {
        for (std::int64_t c = first; c < n_chunks; c += stride) {
            const std::int64_t pulses =
                std::min(detail::chunk_size, cfg.n_pulses - c * detail::chunk_size);
            tallies[c] = detail::run_chunk(cfg, static_cast<std::uint64_t>(c), pulses);
        }
    };

    const int workers = std::max(1, cfg.n_workers);
    if (workers == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker, w, workers);
        for (auto& t : pool) t.join();
    }

    QberReport rep;
    for (const auto& t : tallies) {
        rep.sifted_count += t.sifted;
        rep.error_count += t.errors;
        rep.double_click_count += t.doubles;
        rep.no_click_count += t.nones;
    }
    rep.qber_closed_form = qber_closed_form(z, cfg);
    if (rep.sifted_count > 0) {
        rep.estimate_defined = true;
        const double q = static_cast<double>(rep.error_count) / rep.sifted_count;
        rep.qber_estimate = q;
        rep.binomial_std_error = std::sqrt(q * (1.0 - q) / rep.sifted_count);
    }
    return rep;
}

} // namespace dsbb84
