#include <catch2/catch_amalgamated.hpp>

#include "hotstack/perf.hpp"

using namespace hotstack;
using Catch::Approx;

TEST_CASE("Pollack scaling factor", "[perf]") {
    REQUIRE(perf(1) == 1.0);
    REQUIRE(perf(256) == Approx(16.0).margin(1e-12));
    REQUIRE(perf(64) == Approx(8.0).margin(1e-12));
    REQUIRE_THROWS_AS(perf(0), std::domain_error);
}

TEST_CASE("phase durations by direct substitution", "[perf]") {
    {
        const PhasePlan p = phase_plan(WorkloadSpec{1.0, 1.0}, 1, 256);
        REQUIRE(p.serial_duration == 0.0);
        REQUIRE(p.parallel_duration == Approx(1.0 / 256).margin(1e-15));
    }
    {
        const PhasePlan p = phase_plan(WorkloadSpec{0.0, 1.0}, 256, 1);
        REQUIRE(p.serial_duration == Approx(1.0 / 16).margin(1e-15));
        REQUIRE(p.parallel_duration == 0.0);
    }
    {
        // f = 0.5 on four full-size cores (one per layer)
        const PhasePlan p = phase_plan(WorkloadSpec{0.5, 1.0}, 256, 4);
        REQUIRE(p.serial_duration == Approx(0.03125).margin(1e-15));
        REQUIRE(p.parallel_duration == Approx(0.0078125).margin(1e-15));
    }
}

TEST_CASE("speedup limits", "[perf]") {
    REQUIRE(speedup(WorkloadSpec{1.0, 1.0}, 1, 256) == Approx(256.0).margin(1e-9));
    REQUIRE(speedup(WorkloadSpec{0.0, 1.0}, 256, 7) == Approx(16.0).margin(1e-9));
    REQUIRE(speedup(WorkloadSpec{1.0, 1.0}, 256, 4) == Approx(64.0).margin(1e-9));
}

TEST_CASE("speedup is nondecreasing in f and in core count", "[perf]") {
    for (int r : {1, 4, 64}) {
        double prev = 0.0;
        for (double f : {0.0, 0.25, 0.5, 0.9, 0.99, 1.0}) {
            const double s = speedup(WorkloadSpec{f, 1.0}, r, 16);
            REQUIRE(s >= prev - 1e-12);
            prev = s;
        }
        prev = 0.0;
        for (int n : {1, 2, 8, 64, 1024}) {
            const double s = speedup(WorkloadSpec{0.9, 1.0}, r, n);
            REQUIRE(s >= prev - 1e-12);
            prev = s;
        }
    }
}

TEST_CASE("identity machine: phase durations sum to t_base", "[perf]") {
    for (double f : {0.0, 0.3, 0.5, 0.99, 1.0}) {
        const PhasePlan p = phase_plan(WorkloadSpec{f, 2.5}, 1, 1);
        REQUIRE(p.serial_duration + p.parallel_duration == Approx(2.5).margin(1e-12));
    }
}

TEST_CASE("perf is multiplicative over core-size products", "[perf]") {
    REQUIRE(perf(4 * 16) == Approx(perf(4) * perf(16)).margin(1e-12));
    REQUIRE(perf(2 * 128) == Approx(perf(2) * perf(128)).margin(1e-12));
}

TEST_CASE("workload validation", "[perf]") {
    REQUIRE_THROWS_AS(phase_plan(WorkloadSpec{1.5, 1.0}, 4, 4), std::domain_error);
    REQUIRE_THROWS_AS(phase_plan(WorkloadSpec{0.5, 0.0}, 4, 4), std::domain_error);
    REQUIRE_THROWS_AS(phase_plan(WorkloadSpec{0.5, 1.0}, 4, 0), std::domain_error);
}
