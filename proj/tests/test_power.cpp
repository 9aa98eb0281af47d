#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hotstack/power.hpp"

using namespace hotstack;
using Catch::Approx;

namespace {
// Independent exponentiation route for cross-checking std::pow results.
double power_law_oracle(double p_full, int r, int budget, double alpha) {
    return p_full * std::exp(alpha * std::log(static_cast<double>(r) / budget));
}
} // namespace

TEST_CASE("core power at the endpoints and hand-derived sizes", "[power]") {
    const PowerLawParams def;

    // r = budget: the power law collapses to p_full.
    REQUIRE(core_power(256, def) == Approx(25.0).margin(1e-12));

    // 256^0.875 = 2^7 = 128, so p(1) = 25/128 exactly.
    REQUIRE(core_power(1, def) == Approx(0.1953125).margin(1e-15));

    // p(64) = 25 * 2^-1.75
    REQUIRE(core_power(64, def) == Approx(7.432544468767007).margin(1e-12));
    REQUIRE(core_power(64, def) == Approx(power_law_oracle(25.0, 64, 256, 0.875)).margin(1e-9));
}

TEST_CASE("idle power scales the active power by k_idle", "[power]") {
    const PowerLawParams def;
    REQUIRE(idle_power(256, def, IdleModel{0.2}) == Approx(5.0).margin(1e-12));
    REQUIRE(idle_power(1, def, IdleModel{0.2}) == Approx(0.0390625).margin(1e-15));
    REQUIRE(idle_power(64, def, IdleModel{0.0}) == 0.0);
}

TEST_CASE("symmetric chip power", "[power]") {
    const PowerLawParams def;
    REQUIRE(chip_power_symmetric(1, def) == Approx(50.0).margin(1e-12));
    REQUIRE(chip_power_symmetric(256, def) == Approx(25.0).margin(1e-12));
    REQUIRE(chip_power_symmetric(64, def) == Approx(29.730177875068026).margin(1e-12));
}

TEST_CASE("asymmetric chip power", "[power]") {
    const PowerLawParams def;
    REQUIRE(chip_power_asymmetric(256, def) == Approx(25.0).margin(1e-12));
    REQUIRE(chip_power_asymmetric(1, def) == Approx(50.0).margin(1e-12));
    REQUIRE(chip_power_asymmetric(64, def) == Approx(44.932544468767006).margin(1e-12));
}

TEST_CASE("domain errors name the offending value", "[power]") {
    const PowerLawParams def;
    REQUIRE_THROWS_MATCHES(core_power(0, def), std::domain_error,
                           Catch::Matchers::Message("core size r = 0 outside [1, 256]"));
    REQUIRE_THROWS_AS(core_power(257, def), std::domain_error);
    REQUIRE_THROWS_AS(chip_power_symmetric(3, def), std::domain_error);
    REQUIRE_THROWS_AS(idle_power(64, def, IdleModel{1.5}), std::domain_error);
    REQUIRE_THROWS_AS(core_power(64, PowerLawParams{-1.0, 256, 0.875, 28.0}), std::domain_error);
    REQUIRE_THROWS_AS(core_power(64, PowerLawParams{25.0, 256, 1.25, 28.0}), std::domain_error);
}

TEST_CASE("power-law monotonicity over random parameters", "[power]") {
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> alpha_dist(0.05, 1.0);
    std::uniform_real_distribution<double> p_dist(1.0, 200.0);
    const int divisors[] = {1, 2, 4, 8, 16, 32, 64, 128, 256};

    for (int trial = 0; trial < 50; ++trial) {
        const PowerLawParams params{p_dist(rng), 256, alpha_dist(rng), 28.0};
        double prev_core = -1.0;
        double prev_chip = std::numeric_limits<double>::infinity();
        for (int r : divisors) {
            const double pc = core_power(r, params);
            REQUIRE(pc > prev_core);
            prev_core = pc;
            const double chip = chip_power_symmetric(r, params);
            if (params.alpha < 1.0)
                REQUIRE(chip < prev_chip);
            prev_chip = chip;
        }
    }

    // alpha = 1: chip power is constant at p_full.
    const PowerLawParams linear{25.0, 256, 1.0, 28.0};
    for (int r : divisors)
        REQUIRE(chip_power_symmetric(r, linear) == Approx(25.0).margin(1e-9));
}

TEST_CASE("asymmetric power dominates symmetric with equality at the ends", "[power]") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> alpha_dist(0.05, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const PowerLawParams params{25.0, 256, alpha_dist(rng), 28.0};
        for (int r : {1, 2, 4, 8, 16, 32, 64, 128, 256})
            REQUIRE(chip_power_asymmetric(r, params) >=
                    chip_power_symmetric(r, params) - 1e-12);
        REQUIRE(chip_power_asymmetric(1, params) ==
                Approx(chip_power_symmetric(1, params)).margin(1e-12));
        REQUIRE(chip_power_asymmetric(256, params) ==
                Approx(chip_power_symmetric(256, params)).margin(1e-12));
    }
}

TEST_CASE("normalized core power depends only on r/budget and alpha", "[power]") {
    const PowerLawParams small{10.0, 64, 0.875, 28.0};
    const PowerLawParams large{40.0, 256, 0.875, 28.0};
    // r/budget = 1/4 in both cases.
    REQUIRE(core_power(16, small) / small.p_full ==
            Approx(core_power(64, large) / large.p_full).margin(1e-15));
}
