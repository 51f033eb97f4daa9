#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dsbb84/design.hpp"
#include "dsbb84/rng.hpp"

using namespace dsbb84;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double omega15 = 2.0 * pi * 15e9;
}

TEST_CASE("length solve") {
    const double beta2 = 2.17e-26;
    const double L = solve_length(beta2, omega15, 1);
    // independent arithmetic: n pi / (beta2 Omega^2)
    CHECK_THAT(L, WithinRel(pi / (beta2 * omega15 * omega15), 1e-15));
    CHECK_THAT(L, WithinAbs(16300.0, 100.0));
    CHECK_THAT(solve_length(beta2, omega15, 2), WithinRel(2.0 * L, 1e-15));
    CHECK_THAT(criterion_phase(beta2, L, omega15), WithinRel(pi, 1e-12));

    CHECK_THROWS_AS(solve_length(0.0, omega15, 1), no_solution);
    CHECK_THROWS_AS(solve_length(beta2, 0.0, 1), no_solution);
    CHECK_THROWS_AS(solve_length(beta2, omega15, 0), invalid_parameter);
}

TEST_CASE("frequency solve") {
    const double beta2 = 2.17e-26;
    const double omega = solve_frequency(beta2, 15000.0, 1);
    CHECK_THAT(omega / (2.0 * pi), WithinAbs(15.6e9, 0.1e9));
    CHECK_THAT(solve_frequency(beta2, 15000.0, 4), WithinRel(2.0 * omega, 1e-12));
    CHECK_THAT(criterion_phase(beta2, 15000.0, omega), WithinRel(pi, 1e-12));

    SECTION("round-trips with the length solve") {
        const double L = solve_length(beta2, omega, 3);
        CHECK_THAT(solve_frequency(beta2, L, 3), WithinRel(omega, 1e-12));
    }
    CHECK_THROWS_AS(solve_frequency(0.0, 15000.0, 1), no_solution);
    CHECK_THROWS_AS(solve_frequency(beta2, 0.0, 1), no_solution);
    CHECK_THROWS_AS(solve_frequency(beta2, 15000.0, -1), invalid_parameter);
}

TEST_CASE("dispersion parameter conversion") {
    const double beta2 = beta2_from_dispersion_parameter(17.0, 1550.0);
    CHECK(beta2 < 0.0);
    CHECK_THAT(beta2, WithinAbs(-2.1682619391414893e-26, 1e-38));
    CHECK_THAT(std::abs(beta2) * 1e27, WithinRel(21.7, 5e-3)); // ps^2/km
    CHECK(beta2_from_dispersion_parameter(0.0, 1550.0) == 0.0);
    CHECK_THAT(beta2_from_dispersion_parameter(34.0, 1550.0),
               WithinRel(2.0 * beta2, 1e-15));
    CHECK_THROWS_AS(beta2_from_dispersion_parameter(17.0, 0.0), invalid_parameter);
}

TEST_CASE("solves satisfy the criterion for randomized parameters") {
    RngStream rng = RngStream::for_chunk(4, 0);
    for (int n = 1; n <= 8; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            const double beta2 = 1e-27 + 4e-26 * rng.next_double();
            const double omega = 2.0 * pi * (1e9 + 39e9 * rng.next_double());
            const double L = solve_length(beta2, omega, n);
            CHECK_THAT(criterion_phase(beta2, L, omega), WithinRel(n * pi, 1e-12));
            const double length = 100.0 + 1e5 * rng.next_double();
            const double om = solve_frequency(beta2, length, n);
            CHECK_THAT(criterion_phase(beta2, length, om), WithinRel(n * pi, 1e-12));
            CHECK_THAT(criterion_residual(beta2, L, omega, n), WithinAbs(0.0, 1e-11));
        }
    }
}

TEST_CASE("unit conversions are consistent") {
    RngStream rng = RngStream::for_chunk(6, 0);
    for (int i = 0; i < 50; ++i) {
        const double si = 1e-27 + 5e-26 * rng.next_double();
        CHECK_THAT(beta2_ps2km_to_s2m(beta2_s2m_to_ps2km(si)), WithinRel(si, 1e-12));
        // the criterion evaluated in either unit system agrees
        const double omega = 2.0 * pi * 15e9;
        const double L_m = solve_length(si, omega, 1);
        const double phase_alt =
            beta2_ps2km_to_s2m(beta2_s2m_to_ps2km(si)) * L_m * omega * omega;
        CHECK_THAT(phase_alt, WithinRel(pi, 1e-12));
    }
}
