// Command-line front end: regenerates the QBER, spectrum, sideband and
// contrast data sets, runs Monte-Carlo key-exchange sessions, and solves
// the dispersion design criterion.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsbb84/cli.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::vector<std::string> overrides;
    bool seed_given = false;
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "config file (section.key = value lines)");
    cmd->add_option("--out", opts.out_path, "output file (stdout if omitted)");
    cmd->add_option("--set", opts.overrides, "override, section.key=value (repeatable)");
    cmd->add_option("--seed", opts.seed, "session RNG seed")->each([&](const std::string&) {
        opts.seed_given = true;
    });
}

dsbb84::RunConfig build_config(const CommonOpts& opts) {
    dsbb84::RunConfig cfg;
    if (!opts.config_path.empty()) dsbb84::load_config_file(cfg, opts.config_path);
    for (const auto& s : opts.overrides) dsbb84::apply_override(cfg, s);
    if (opts.seed_given) cfg.seed = opts.seed;
    return cfg;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
    if (suffix.empty()) return path;
    const auto dot = path.rfind('.');
    const auto slash = path.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + suffix;
    return path.substr(0, dot) + suffix + path.substr(dot);
}

void emit(const dsbb84::cli::CommandOutput& out, const std::string& out_path) {
    for (const auto& w : out.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& [suffix, content] : out.files) {
        if (out_path.empty()) {
            if (out.files.size() > 1) std::cout << "# --- " << suffix << " ---\n";
            std::cout << content;
        } else {
            const std::string path = with_suffix(out_path, suffix);
            std::ofstream f(path, std::ios::binary);
            if (!f) throw dsbb84::invalid_parameter("cannot write " + path);
            f << content;
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dispersion-supported PM-PM frequency-coded BB84 link simulator"};
    app.require_subcommand(1);

    CommonOpts opts;
    dsbb84::cli::DesignSolve solve = dsbb84::cli::DesignSolve::length;
    int design_n = 1;
    bool session_csv = false;

    auto* qber = app.add_subcommand("qber-curve", "closed-form QBER vs receiver position");
    add_common(qber, opts);
    auto* spectrum = app.add_subcommand("spectrum", "OSA spectra per (length, delta-phi) panel");
    add_common(spectrum, opts);
    auto* sidebands = app.add_subcommand("sidebands", "sideband powers vs phase shift, per length");
    add_common(sidebands, opts);
    auto* contrast = app.add_subcommand("contrast", "contrast vs fiber length");
    add_common(contrast, opts);
    auto* design = app.add_subcommand("design", "solve the dispersion design criterion");
    add_common(design, opts);
    std::string solve_for = "length";
    design->add_option("--solve", solve_for, "what to solve for: length|frequency|report");
    design->add_option("--n", design_n, "criterion harmonic n");
    auto* session = app.add_subcommand("session", "run a Monte-Carlo BB84 session");
    add_common(session, opts);
    session->add_flag("--csv", session_csv, "emit a CSV row instead of key=value text");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_for == "length") solve = dsbb84::cli::DesignSolve::length;
        else if (solve_for == "frequency") solve = dsbb84::cli::DesignSolve::frequency;
        else if (solve_for == "report") solve = dsbb84::cli::DesignSolve::report;
        else throw dsbb84::invalid_parameter("--solve must be length, frequency or report");

        const dsbb84::RunConfig cfg = build_config(opts);
        dsbb84::cli::CommandOutput out;
        if (qber->parsed()) out = dsbb84::cli::cmd_qber_curve(cfg);
        else if (spectrum->parsed()) out = dsbb84::cli::cmd_spectrum(cfg);
        else if (sidebands->parsed()) out = dsbb84::cli::cmd_sidebands(cfg);
        else if (contrast->parsed()) out = dsbb84::cli::cmd_contrast(cfg);
        else if (design->parsed()) out = dsbb84::cli::cmd_design(cfg, solve, design_n);
        else if (session->parsed()) out = dsbb84::cli::cmd_session(cfg, session_csv);
        emit(out, opts.out_path);
    } catch (const dsbb84::regime_violation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const dsbb84::invalid_parameter& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        // undefined_normalization / undefined_visibility / no_solution
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
