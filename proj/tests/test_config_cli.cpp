#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "dsbb84/cli.hpp"
#include "dsbb84/config.hpp"

using namespace dsbb84;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("default configuration") {
    RunConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK_THAT(cfg.omega_rf(), WithinRel(2.0 * pi * 15e9, 1e-15));
    CHECK_THAT(cfg.t_mod(), WithinRel(std::pow(10.0, -2.5 / 20.0), 1e-15));
    CHECK_THAT(cfg.beta2_s2m(), WithinAbs(-2.1682619391414893e-26, 1e-38));
    CHECK_THAT(visibility(cfg.index_a(), cfg.index_b()), WithinAbs(0.98, 1e-12));
    const auto s = cfg.session();
    CHECK(s.n_pulses == 100000);
    CHECK_THAT(s.receiver_position(), WithinAbs(15000.0, 1e-9));
}

TEST_CASE("config stream parsing") {
    RunConfig cfg;
    std::istringstream in(
        "# a comment\n"
        "source.wavelength_nm = 1310  # trailing comment\n"
        "\n"
        "rf.frequency_ghz = 10\n"
        "mod.m_a=0.2\n"
        "session.seed = 18446744073709551615\n"
        "sweep.lengths_m = 1000, 2000, 0\n");
    load_config_stream(cfg, in);
    CHECK(cfg.wavelength_nm == 1310.0);
    CHECK(cfg.f_rf_ghz == 10.0);
    CHECK(cfg.m_a == 0.2);
    CHECK(cfg.seed == 18446744073709551615ULL);
    CHECK(cfg.sweep_lengths_m == std::vector<double>{1000.0, 2000.0, 0.0});

    SECTION("missing equals sign") {
        RunConfig c;
        std::istringstream bad("rf.frequency_ghz 10\n");
        CHECK_THROWS_AS(load_config_stream(c, bad), invalid_parameter);
    }
    SECTION("unknown key") {
        RunConfig c;
        CHECK_THROWS_AS(apply_config_entry(c, "rf.phase_deg", "7"), invalid_parameter);
    }
    SECTION("bad numeric value") {
        RunConfig c;
        CHECK_THROWS_AS(apply_config_entry(c, "rf.frequency_ghz", "ten"),
                        invalid_parameter);
        CHECK_THROWS_AS(apply_config_entry(c, "session.n_pulses", "1e5x"),
                        invalid_parameter);
    }
}

TEST_CASE("overrides") {
    RunConfig cfg;
    apply_override(cfg, "link.length_m=7300");
    apply_override(cfg, "det.eta = 0.25");
    CHECK(cfg.length_m == 7300.0);
    CHECK(cfg.eta == 0.25);
    CHECK_THROWS_AS(apply_override(cfg, "det.eta"), invalid_parameter);
}

TEST_CASE("validation rejects out-of-range settings") {
    const auto bad = [](const std::string& key, const std::string& value) {
        RunConfig c;
        apply_config_entry(c, key, value);
        CHECK_THROWS_AS(c.validate(), invalid_parameter);
    };
    bad("source.wavelength_nm", "0");
    bad("rf.frequency_ghz", "-1");
    bad("link.alpha_db_per_km", "-0.1");
    bad("link.length_m", "-5");
    bad("mod.m_a", "-0.2");
    bad("mod.v_pi_volts", "0");
    bad("det.eta", "1.5");
    bad("det.dark_prob", "1");
    bad("det.mu_sb", "-1");
    bad("session.n_pulses", "0");
    bad("session.workers", "0");
    bad("session.receiver_z_m", "99999999");
    bad("osa.rbw_nm", "0");
    bad("osa.points", "1");
    bad("sweep.steps", "1");
    bad("sweep.lengths_m", "-3");

    SECTION("direct and derived dispersion inputs are exclusive") {
        RunConfig c;
        apply_config_entry(c, "link.dispersion_ps_nm_km", "17");
        apply_config_entry(c, "link.beta2_ps2_km", "21.7");
        CHECK_THROWS_AS(c.validate(), invalid_parameter);
    }
    SECTION("direct dispersion input is used when set alone") {
        RunConfig c;
        apply_config_entry(c, "link.beta2_ps2_km", "21.7");
        CHECK_NOTHROW(c.validate());
        CHECK_THAT(c.beta2_s2m(), WithinRel(-2.17e-26, 1e-12));
    }
    SECTION("drive voltage overrides the index") {
        RunConfig c;
        apply_config_entry(c, "mod.v_drive_a_volts", "3.7");
        CHECK_THAT(c.index_a(), WithinRel(pi / 2.0, 1e-12));
        CHECK(c.index_b() == c.m_b);
    }
}

TEST_CASE("error-rate curve command") {
    RunConfig cfg;
    cfg.sweep_steps = 11;
    const auto out = cli::cmd_qber_curve(cfg);
    REQUIRE(out.files.size() == 1);
    const std::string& csv = out.files[0].second;
    CHECK(csv.rfind("z_over_L,qber_ds,qber_am_am_reference\n", 0) == 0);
    // first data row: z = 0 gives 0.5
    std::istringstream rows(csv);
    std::string line;
    std::getline(rows, line); // header
    std::getline(rows, line);
    CHECK(line.rfind("0,0.5,", 0) == 0);
    // default 15 km link is off the design point -> warns
    bool warned = false;
    for (const auto& w : out.warnings)
        if (w.find("off the design point") != std::string::npos) warned = true;
    CHECK(warned);

    SECTION("no design warning at the solved length") {
        RunConfig on = cfg;
        on.length_m = solve_length(std::abs(on.beta2_s2m()), on.omega_rf(), 1);
        const auto out2 = cli::cmd_qber_curve(on);
        for (const auto& w : out2.warnings)
            CHECK(w.find("off the design point") == std::string::npos);
    }
    SECTION("byte-identical across runs") {
        const auto again = cli::cmd_qber_curve(cfg);
        CHECK(again.files[0].second == csv);
    }
}

TEST_CASE("spectrum command emits six panels") {
    RunConfig cfg;
    cfg.osa_points = 801;
    const auto out = cli::cmd_spectrum(cfg);
    REQUIRE(out.files.size() == 6);
    CHECK(out.files[0].first == "_15000m_dphi_0");
    CHECK(out.files[1].first == "_15000m_dphi_pi");
    CHECK(out.files[4].first == "_0m_dphi_0");
    for (const auto& [suffix, csv] : out.files) {
        CHECK(csv.rfind("wavelength_nm,power_dbm\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 802);
    }
}

TEST_CASE("sideband sweep command") {
    RunConfig cfg;
    cfg.sweep_steps = 21;
    const auto out = cli::cmd_sidebands(cfg);
    REQUIRE(out.files.size() == 3);
    CHECK(out.files[0].first == "_15000m");
    CHECK(out.files[2].first == "_0m");
    for (const auto& [suffix, csv] : out.files)
        CHECK(csv.rfind("delta_phi,p_plus,p_minus\n", 0) == 0);
}

TEST_CASE("contrast sweep command") {
    RunConfig cfg;
    cfg.sweep_steps = 5;
    const auto out = cli::cmd_contrast(cfg);
    REQUIRE(out.files.size() == 1);
    std::istringstream rows(out.files[0].second);
    std::string line;
    std::getline(rows, line);
    CHECK(line == "length_m,contrast");
    std::getline(rows, line);
    CHECK(line == "0,0");
}

TEST_CASE("design command report") {
    RunConfig cfg;
    SECTION("solve for length") {
        const auto out = cli::cmd_design(cfg, cli::DesignSolve::length, 1);
        const std::string& rep = out.files[0].second;
        CHECK(rep.find("solved_length_m=16311.57") != std::string::npos);
        CHECK(rep.find("n=1") != std::string::npos);
    }
    SECTION("solve for frequency") {
        const auto out = cli::cmd_design(cfg, cli::DesignSolve::frequency, 1);
        CHECK(out.files[0].second.find("solved_f_rf_ghz=15.64") != std::string::npos);
    }
    SECTION("report only") {
        const auto out = cli::cmd_design(cfg, cli::DesignSolve::report, 1);
        const std::string& rep = out.files[0].second;
        CHECK(rep.find("criterion_phase=") != std::string::npos);
        CHECK(rep.find("residual_vs_npi=") != std::string::npos);
    }
}

TEST_CASE("session command") {
    RunConfig cfg;
    cfg.n_pulses = 20000;
    cfg.seed = 5;
    SECTION("key-value report") {
        const auto out = cli::cmd_session(cfg, false);
        const std::string& rep = out.files[0].second;
        CHECK(rep.find("n_pulses=20000") != std::string::npos);
        CHECK(rep.find("seed=5") != std::string::npos);
        CHECK(rep.find("sifted_count=") != std::string::npos);
        CHECK(rep.find("qber_closed_form=") != std::string::npos);
    }
    SECTION("CSV row mode, reproducible") {
        const auto out = cli::cmd_session(cfg, true);
        const std::string& csv = out.files[0].second;
        CHECK(csv.rfind("n_pulses,receiver_z_m,seed,", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
        const auto again = cli::cmd_session(cfg, true);
        CHECK(again.files[0].second == csv);
    }
}
