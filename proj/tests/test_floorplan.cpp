#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "hotstack/floorplan.hpp"

using namespace hotstack;
using Catch::Approx;

namespace {
CmpConfig config_with(int r, Topology topology = Topology::symmetric) {
    CmpConfig cfg;
    cfg.r = r;
    cfg.topology = topology;
    return cfg;
}

double layer_area(const Layer2D& layer) {
    double sum = 0.0;
    for (const Block& b : layer.blocks)
        sum += b.area();
    return sum;
}
} // namespace

TEST_CASE("tiling a layer", "[floorplan]") {
    const double side = 5.2915026221291815e-3;

    SECTION("single full-budget core") {
        const Layer2D layer = tile_layer(256, 256, side);
        REQUIRE(layer.blocks.size() == 1);
        REQUIRE(layer.blocks[0].width == Approx(side));
        REQUIRE(layer.blocks[0].height == Approx(side));
        REQUIRE(layer.blocks[0].name == "core_0");
    }

    SECTION("four cores form a 2x2 grid of quarter-area blocks") {
        const Layer2D layer = tile_layer(64, 256, side);
        REQUIRE(layer.blocks.size() == 4);
        for (const Block& b : layer.blocks)
            REQUIRE(b.area() == Approx(side * side / 4).epsilon(1e-12));
        std::set<double> xs, ys;
        for (const Block& b : layer.blocks) {
            xs.insert(b.x);
            ys.insert(b.y);
        }
        REQUIRE(xs.size() == 2);
        REQUIRE(ys.size() == 2);
    }

    SECTION("unit cores form a 16x16 grid") {
        const Layer2D layer = tile_layer(1, 256, side);
        REQUIRE(layer.blocks.size() == 256);
        std::set<double> xs, ys;
        for (const Block& b : layer.blocks) {
            xs.insert(b.x);
            ys.insert(b.y);
        }
        REQUIRE(xs.size() == 16);
        REQUIRE(ys.size() == 16);
        REQUIRE(layer.blocks[17].name == "core_17"); // row-major naming
        REQUIRE(layer.blocks[17].x == Approx(side / 16).epsilon(1e-12));
        REQUIRE(layer.blocks[17].y == Approx(side / 16).epsilon(1e-12));
    }

    SECTION("non-divisor core sizes are rejected") {
        REQUIRE_THROWS_AS(tile_layer(3, 256, side), std::domain_error);
        REQUIRE_THROWS_AS(tile_layer(0, 256, side), std::domain_error);
    }
}

TEST_CASE("symmetric floorplans", "[floorplan]") {
    SECTION("five layers, dram on top") {
        const Floorplan3D fp = build_symmetric(config_with(256));
        REQUIRE(fp.layers.size() == 5);
        for (int i = 0; i < 4; ++i)
            REQUIRE(fp.layers[i].role == LayerRole::cmp);
        REQUIRE(fp.layers[4].role == LayerRole::dram);
        REQUIRE(fp.layers[4].plan.blocks.size() == 1);
        REQUIRE(fp.layers[4].plan.blocks[0].name == "dram");
        REQUIRE(validate(fp).empty());
    }

    SECTION("unit cores give 1024 core blocks over four layers") {
        const Floorplan3D fp = build_symmetric(config_with(1));
        int cores = 0;
        for (const auto& layer : fp.layers)
            for (const Block& b : layer.plan.blocks)
                if (b.kind == BlockKind::core)
                    ++cores;
        REQUIRE(cores == 1024);
        REQUIRE(validate(fp).empty());
    }

    SECTION("side follows the physical chip area") {
        const Floorplan3D fp = build_symmetric(config_with(64));
        REQUIRE(fp.side == Approx(5.2915026221291815e-3).margin(1e-7));
    }

    SECTION("construction is deterministic") {
        const Floorplan3D a = build_symmetric(config_with(16));
        const Floorplan3D b = build_symmetric(config_with(16));
        REQUIRE(a.layers.size() == b.layers.size());
        for (size_t li = 0; li < a.layers.size(); ++li)
            for (size_t bi = 0; bi < a.layers[li].plan.blocks.size(); ++bi) {
                const Block& ba = a.layers[li].plan.blocks[bi];
                const Block& bb = b.layers[li].plan.blocks[bi];
                REQUIRE(ba.name == bb.name);
                REQUIRE(ba.x == bb.x); // bit-identical
                REQUIRE(ba.y == bb.y);
                REQUIRE(ba.width == bb.width);
                REQUIRE(ba.height == bb.height);
            }
    }
}

TEST_CASE("asymmetric floorplans", "[floorplan]") {
    SECTION("full-budget serial core degenerates to one block per layer") {
        const Floorplan3D fp = build_asymmetric(config_with(256, Topology::asymmetric));
        for (int li = 0; li < 4; ++li) {
            REQUIRE(fp.layers[li].plan.blocks.size() == 1);
            REQUIRE(fp.layers[li].plan.blocks[0].name == "serial_core");
        }
        REQUIRE(validate(fp).empty());
    }

    SECTION("r = 64: quarter-area strip plus 192 unit cores") {
        const Floorplan3D fp = build_asymmetric(config_with(64, Topology::asymmetric));
        const Layer2D& layer = fp.layers[0].plan;
        REQUIRE(layer.blocks.size() == 193);
        REQUIRE(layer.blocks[0].name == "serial_core");
        REQUIRE(layer.blocks[0].area() == Approx(fp.side * fp.side / 4).epsilon(1e-12));
        const double unit_area = fp.side * fp.side / 256;
        for (size_t i = 1; i < layer.blocks.size(); ++i) {
            REQUIRE(layer.blocks[i].bce == 1);
            REQUIRE(layer.blocks[i].area() == Approx(unit_area).epsilon(1e-9));
        }
        REQUIRE(layer_area(layer) == Approx(fp.side * fp.side).epsilon(1e-9));
        REQUIRE(validate(fp).empty());
    }

    SECTION("r = 1 degenerates to the symmetric grid with a renamed block") {
        const Floorplan3D fp = build_asymmetric(config_with(1, Topology::asymmetric));
        const Layer2D& layer = fp.layers[0].plan;
        REQUIRE(layer.blocks.size() == 256);
        REQUIRE(layer.blocks[0].name == "serial_core");
        for (const Block& b : layer.blocks)
            REQUIRE(b.area() == Approx(fp.side * fp.side / 256).epsilon(1e-9));
        REQUIRE(validate(fp).empty());
    }

    SECTION("non-power-of-two serial cores still tile exactly") {
        for (int r : {3, 100, 200, 255}) {
            const Floorplan3D fp = build_asymmetric(config_with(r, Topology::asymmetric));
            REQUIRE(validate(fp).empty());
            REQUIRE(fp.layers[0].plan.blocks.size() == static_cast<size_t>(256 - r + 1));
            REQUIRE(layer_area(fp.layers[0].plan) ==
                    Approx(fp.side * fp.side).epsilon(1e-9));
        }
    }
}

TEST_CASE("floorplan validation catches broken invariants", "[floorplan]") {
    Floorplan3D fp = build_symmetric(config_with(64));

    SECTION("overlap") {
        fp.layers[0].plan.blocks[1].x = fp.layers[0].plan.blocks[0].x; // collide
        const auto violations = validate(fp);
        REQUIRE_FALSE(violations.empty());
        bool mentions_overlap = false;
        for (const std::string& v : violations)
            if (v.find("overlap") != std::string::npos)
                mentions_overlap = true;
        REQUIRE(mentions_overlap);
    }

    SECTION("duplicate names") {
        fp.layers[0].plan.blocks[1].name = "core_0";
        const auto violations = validate(fp);
        bool mentions_dup = false;
        for (const std::string& v : violations)
            if (v.find("duplicate") != std::string::npos)
                mentions_dup = true;
        REQUIRE(mentions_dup);
    }

    SECTION("coverage gap") {
        fp.layers[0].plan.blocks[1].width *= 0.5;
        const auto violations = validate(fp);
        bool mentions_area = false;
        for (const std::string& v : violations)
            if (v.find("tile") != std::string::npos)
                mentions_area = true;
        REQUIRE(mentions_area);
    }
}

TEST_CASE("serial-phase block designation", "[floorplan]") {
    SECTION("asymmetric uses the serial core") {
        const Floorplan3D fp = build_asymmetric(config_with(16, Topology::asymmetric));
        const auto [layer, name] = serial_block(fp);
        REQUIRE(layer == 0);
        REQUIRE(name == "serial_core");
    }

    SECTION("symmetric picks the center-nearest, lowest-index core") {
        const Floorplan3D quad = build_symmetric(config_with(64));
        REQUIRE(serial_block(quad).second == "core_0"); // all four tie at the center

        const Floorplan3D grid = build_symmetric(config_with(1));
        // 16x16 grid: the four inner blocks tie; row-major index 7*16+7 wins.
        REQUIRE(serial_block(grid).second == "core_119");
    }

    SECTION("single core trivially wins") {
        const Floorplan3D fp = build_symmetric(config_with(256));
        REQUIRE(serial_block(fp).second == "core_0");
    }
}

TEST_CASE("qualified names prefix the layer", "[floorplan]") {
    REQUIRE(qualified_name(0, "core_0") == "L0_core_0");
    REQUIRE(qualified_name(4, "dram") == "L4_dram");
}
