#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dsbb84/design.hpp"
#include "dsbb84/detection.hpp"
#include "dsbb84/field_model.hpp"
#include "dsbb84/protocol.hpp"

namespace dsbb84 {

/// Flat run configuration shared by all CLI commands. Populated from a
/// `section.key = value` text file plus command-line overrides; defaults
/// are the experimental operating point (1550 nm, 5 dBm source, 15 GHz,
/// m = 0.35, 15 km standard fiber, 2.5 dB insertion loss per modulator,
/// V_pi = 7.4 V, dark counts 8e-6, visibility 98%).
struct RunConfig {
    // source
    double wavelength_nm = 1550.0;
    double source_power_dbm = 5.0;
    // rf
    double f_rf_ghz = 15.0;
    // link
    double alpha_db_per_km = 0.2;
    double dispersion_ps_nm_km = 17.0;  // used unless beta2 is set directly
    double beta2_ps2_km = 0.0;          // direct |beta2| input, 0 = unset
    bool beta2_set = false;
    bool dispersion_set = false;
    double length_m = 15000.0;
    // modulators
    double m_a = 0.35;
    double m_b = 0.2860723259209556;    // V = 0.98 against m_a = 0.35
    double insertion_loss_db = 2.5;     // per modulator
    double v_pi_volts = 7.4;
    double v_drive_a_volts = -1.0;      // optional; >= 0 overrides m_a
    double v_drive_b_volts = -1.0;
    // detectors
    double eta = 0.1;
    double dark_prob = 8e-6;
    double mu_sb = 0.1;
    // session
    std::int64_t n_pulses = 100000;
    std::uint64_t seed = 1;
    int workers = 1;
    double receiver_z_m = -1.0;
    // osa
    double osa_span_nm = 0.8;
    double osa_rbw_nm = 0.01;
    int osa_points = 4001;
    // sweeps
    int sweep_steps = 201;
    std::vector<double> sweep_lengths_m = {15000.0, 7300.0, 0.0};

    [[nodiscard]] double omega_rf() const { return 2.0 * pi * f_rf_ghz * 1e9; }

    [[nodiscard]] double beta2_s2m() const {
        if (beta2_set) return -beta2_ps2_km * 1e-27; // anomalous-dispersion sign
        return beta2_from_dispersion_parameter(dispersion_ps_nm_km, wavelength_nm);
    }

    [[nodiscard]] double t_mod() const {
        return std::pow(10.0, -insertion_loss_db / 20.0);
    }

    [[nodiscard]] double index_a() const {
        return v_drive_a_volts >= 0.0 ? pi * v_drive_a_volts / v_pi_volts : m_a;
    }
    [[nodiscard]] double index_b() const {
        return v_drive_b_volts >= 0.0 ? pi * v_drive_b_volts / v_pi_volts : m_b;
    }

    [[nodiscard]] LinkParams link() const {
        return {alpha_db_per_km, beta2_s2m(), length_m};
    }
    [[nodiscard]] LinkParams link_of_length(double len) const {
        return {alpha_db_per_km, beta2_s2m(), len};
    }

    [[nodiscard]] ModulatorParams alice_mod(double phi = 0.0) const {
        return {index_a(), phi, t_mod()};
    }
    [[nodiscard]] ModulatorParams bob_mod(double phi = 0.0) const {
        return {index_b(), phi, t_mod()};
    }

    [[nodiscard]] DetectorParams detector() const { return {eta, dark_prob, mu_sb}; }

    [[nodiscard]] OsaParams osa() const {
        return {wavelength_nm, osa_span_nm, osa_rbw_nm, osa_points};
    }

    [[nodiscard]] SessionConfig session() const {
        SessionConfig s;
        s.n_pulses = n_pulses;
        s.link = link();
        s.alice = alice_mod();
        s.bob = bob_mod();
        s.det = detector();
        s.omega_rf = omega_rf();
        s.receiver_z = receiver_z_m;
        s.seed = seed;
        s.n_workers = workers;
        return s;
    }

    void validate() const {
        if (wavelength_nm <= 0.0) throw invalid_parameter("source.wavelength_nm must be > 0");
        if (f_rf_ghz <= 0.0) throw invalid_parameter("rf.frequency_ghz must be > 0");
        if (alpha_db_per_km < 0.0) throw invalid_parameter("link.alpha_db_per_km must be >= 0");
        if (beta2_set && dispersion_set)
            throw invalid_parameter("set link.dispersion_ps_nm_km or link.beta2_ps2_km, not both");
        if (length_m < 0.0) throw invalid_parameter("link.length_m must be >= 0");
        if (index_a() < 0.0 || index_b() < 0.0)
            throw invalid_parameter("modulation indices must be >= 0");
        if (insertion_loss_db < 0.0)
            throw invalid_parameter("mod.insertion_loss_db must be >= 0");
        if (v_pi_volts <= 0.0) throw invalid_parameter("mod.v_pi_volts must be > 0");
        if (eta < 0.0 || eta > 1.0) throw invalid_parameter("det.eta must be in [0, 1]");
        if (dark_prob < 0.0 || dark_prob >= 1.0)
            throw invalid_parameter("det.dark_prob must be in [0, 1)");
        if (mu_sb < 0.0) throw invalid_parameter("det.mu_sb must be >= 0");
        if (n_pulses < 1) throw invalid_parameter("session.n_pulses must be >= 1");
        if (workers < 1) throw invalid_parameter("session.workers must be >= 1");
        if (receiver_z_m > length_m)
            throw invalid_parameter("session.receiver_z_m must be <= link.length_m");
        if (osa_rbw_nm <= 0.0) throw invalid_parameter("osa.rbw_nm must be > 0");
        if (osa_points < 2) throw invalid_parameter("osa.points must be >= 2");
        if (sweep_steps < 2) throw invalid_parameter("sweep.steps must be >= 2");
        if (sweep_lengths_m.empty())
            throw invalid_parameter("sweep.lengths_m must list at least one length");
        for (double l : sweep_lengths_m)
            if (l < 0.0) throw invalid_parameter("sweep.lengths_m entries must be >= 0");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw invalid_parameter("bad numeric value for " + key + ": '" + v + "'");
    }
}

inline long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw invalid_parameter("bad integer value for " + key + ": '" + v + "'");
    }
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw invalid_parameter("bad unsigned value for " + key + ": '" + v + "'");
    }
}

inline std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
    return out;
}

} // namespace detail

/// Apply one `section.key = value` assignment.
inline void apply_config_entry(RunConfig& cfg, const std::string& key,
                               const std::string& value) {
    using detail::parse_double;
    using detail::parse_double_list;
    const auto d = [&] { return parse_double(key, value); };

    if (key == "source.wavelength_nm") cfg.wavelength_nm = d();
    else if (key == "source.power_dbm") cfg.source_power_dbm = d();
    else if (key == "rf.frequency_ghz") cfg.f_rf_ghz = d();
    else if (key == "link.alpha_db_per_km") cfg.alpha_db_per_km = d();
    else if (key == "link.dispersion_ps_nm_km") { cfg.dispersion_ps_nm_km = d(); cfg.dispersion_set = true; }
    else if (key == "link.beta2_ps2_km") { cfg.beta2_ps2_km = d(); cfg.beta2_set = true; }
    else if (key == "link.length_m") cfg.length_m = d();
    else if (key == "mod.m_a") cfg.m_a = d();
    else if (key == "mod.m_b") cfg.m_b = d();
    else if (key == "mod.insertion_loss_db") cfg.insertion_loss_db = d();
    else if (key == "mod.v_pi_volts") cfg.v_pi_volts = d();
    else if (key == "mod.v_drive_a_volts") cfg.v_drive_a_volts = d();
    else if (key == "mod.v_drive_b_volts") cfg.v_drive_b_volts = d();
    else if (key == "det.eta") cfg.eta = d();
    else if (key == "det.dark_prob") cfg.dark_prob = d();
    else if (key == "det.mu_sb") cfg.mu_sb = d();
    else if (key == "session.n_pulses") cfg.n_pulses = detail::parse_int(key, value);
    else if (key == "session.seed") cfg.seed = detail::parse_u64(key, value);
    else if (key == "session.workers") cfg.workers = static_cast<int>(detail::parse_int(key, value));
    else if (key == "session.receiver_z_m") cfg.receiver_z_m = d();
    else if (key == "osa.span_nm") cfg.osa_span_nm = d();
    else if (key == "osa.rbw_nm") cfg.osa_rbw_nm = d();
    else if (key == "osa.points") cfg.osa_points = static_cast<int>(d());
    else if (key == "sweep.steps") cfg.sweep_steps = static_cast<int>(d());
    else if (key == "sweep.lengths_m") cfg.sweep_lengths_m = parse_double_list(key, value);
    else throw invalid_parameter("unknown config key: " + key);
}

/// Parse `section.key = value` lines; '#' starts a comment.
inline void load_config_stream(RunConfig& cfg, std::istream& in,
                               const std::string& origin = "<stream>") {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw invalid_parameter(origin + ":" + std::to_string(lineno) +
                                    ": expected 'section.key = value'");
        apply_config_entry(cfg, detail::trim(line.substr(0, eq)),
                           detail::trim(line.substr(eq + 1)));
    }
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_parameter("cannot open config file: " + path);
    load_config_stream(cfg, in, path);
}

/// Apply a `--set section.key=value` override.
inline void apply_override(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw invalid_parameter("override must look like section.key=value: " + assignment);
    apply_config_entry(cfg, detail::trim(assignment.substr(0, eq)),
                       detail::trim(assignment.substr(eq + 1)));
}

} // namespace dsbb84
