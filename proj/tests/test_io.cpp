#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "hotstack/hotspot_io.hpp"
#include "hotstack/power_trace.hpp"

using namespace hotstack;
using Catch::Approx;

namespace {
Floorplan3D make_fp(int r, Topology topology) {
    CmpConfig cfg;
    cfg.r = r;
    cfg.topology = topology;
    return build_floorplan(cfg);
}

PowerTrace make_trace(int r, double f, double t_base = 0.01) {
    CmpConfig cfg;
    cfg.r = r;
    cfg.f = f;
    const Floorplan3D fp = build_floorplan(cfg);
    return build_trace(fp, cfg, WorkloadSpec{f, t_base}, cfg.power_params(), cfg.idle_model());
}
} // namespace

TEST_CASE("floorplan files round-trip exactly", "[io]") {
    std::mt19937 rng(31);
    const int divisors[] = {1, 2, 4, 8, 16, 32, 64, 128, 256};
    std::uniform_int_distribution<size_t> pick(0, std::size(divisors) - 1);

    for (int trial = 0; trial < 8; ++trial) {
        const Topology topology = trial % 2 ? Topology::asymmetric : Topology::symmetric;
        const Floorplan3D fp = make_fp(divisors[pick(rng)], topology);
        for (const auto& layer : fp.layers) {
            std::stringstream file;
            write_flp(file, layer.plan);
            const Layer2D parsed = parse_flp(file);
            REQUIRE(parsed.blocks.size() == layer.plan.blocks.size());
            for (size_t i = 0; i < parsed.blocks.size(); ++i) {
                const Block& a = layer.plan.blocks[i];
                const Block& b = parsed.blocks[i];
                REQUIRE(b.name == a.name);
                REQUIRE(std::abs(b.x - a.x) <= 1e-12);
                REQUIRE(std::abs(b.y - a.y) <= 1e-12);
                REQUIRE(std::abs(b.width - a.width) <= 1e-12);
                REQUIRE(std::abs(b.height - a.height) <= 1e-12);
                REQUIRE(b.kind == a.kind);
            }
        }
    }
}

TEST_CASE("re-emitting a parsed floorplan is byte-identical", "[io]") {
    const Floorplan3D fp = make_fp(16, Topology::symmetric);
    std::stringstream first;
    write_flp(first, fp.layers[0].plan);
    Layer2D parsed = parse_flp(first);
    std::stringstream second;
    write_flp(second, parsed);
    REQUIRE(first.str() == second.str());
}

TEST_CASE("malformed floorplan lines are rejected", "[io]") {
    std::stringstream missing("core_0\t0.001\t0.002\n");
    REQUIRE_THROWS_AS(parse_flp(missing), std::invalid_argument);
    std::stringstream extra("core_0\t1\t1\t0\t0\t7\n");
    REQUIRE_THROWS_AS(parse_flp(extra), std::invalid_argument);
}

TEST_CASE("power traces round-trip with exact powers", "[io]") {
    const PowerTrace trace = make_trace(64, 0.5);
    const double interval = 3.333e-4;
    std::stringstream file;
    write_ptrace(file, trace, interval);

    const ParsedPtrace parsed = parse_ptrace(file);
    REQUIRE(parsed.block_names == trace.block_order);

    size_t expected_rows = 0;
    for (const auto& phase : trace.phases)
        expected_rows += static_cast<size_t>(std::ceil(phase.duration / interval));
    REQUIRE(parsed.rows.size() == expected_rows);

    // First row carries the serial phase, last row the parallel phase.
    size_t row = 0;
    for (const auto& phase : trace.phases) {
        const size_t rows = static_cast<size_t>(std::ceil(phase.duration / interval));
        for (size_t k = 0; k < rows; ++k, ++row)
            for (size_t i = 0; i < trace.block_order.size(); ++i)
                REQUIRE(parsed.rows[row][i] == phase.block_power.at(trace.block_order[i]));
    }
}

TEST_CASE("ptrace row counts follow the sampling interval", "[io]") {
    PowerTrace trace;
    trace.block_order = {"L0_core_0"};
    PowerPhase phase;
    phase.label = PhaseLabel::parallel;
    phase.duration = 0.001;
    phase.block_power["L0_core_0"] = 2.5;
    trace.phases.push_back(phase);

    std::stringstream file;
    write_ptrace(file, trace, 3.333e-4); // 0.001 / 3.333e-4 = 3.0003 -> 4 rows
    const ParsedPtrace parsed = parse_ptrace(file);
    REQUIRE(parsed.rows.size() == 4);
    for (const auto& row : parsed.rows)
        REQUIRE(row[0] == 2.5);
}

TEST_CASE("ptrace parsing rejects ragged rows", "[io]") {
    std::stringstream file("a\tb\n1.0\t2.0\n3.0\n");
    REQUIRE_THROWS_AS(parse_ptrace(file), std::invalid_argument);
}

TEST_CASE("stack manifest round-trips", "[io]") {
    const std::vector<ManifestEntry> entries = {
        {"layer0_cmp.flp", LayerRole::cmp},
        {"layer1_cmp.flp", LayerRole::cmp},
        {"layer2_cmp.flp", LayerRole::cmp},
        {"layer3_cmp.flp", LayerRole::cmp},
        {"layer4_dram.flp", LayerRole::dram},
    };
    std::stringstream file;
    write_manifest(file, entries);
    const auto parsed = parse_manifest(file);
    REQUIRE(parsed.size() == entries.size());
    for (size_t i = 0; i < entries.size(); ++i) {
        REQUIRE(parsed[i].flp_path == entries[i].flp_path);
        REQUIRE(parsed[i].role == entries[i].role);
    }
    std::stringstream bad("layer0.flp\tnotarole\n");
    REQUIRE_THROWS_AS(parse_manifest(bad), std::invalid_argument);
}
