#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hotstack/config.hpp"

namespace hotstack {

enum class BlockKind { core, dram, fill };

/// Axis-aligned rectangle inside one layer. Coordinates are meters with the
/// layer's lower-left corner at the origin.
struct Block {
    std::string name;
    double x = 0.0;
    double y = 0.0;
    double width = 0.0;
    double height = 0.0;
    BlockKind kind = BlockKind::core;
    std::optional<int> core_index;
    int bce = 0; ///< core size in BCE; 0 for non-core blocks

    double area() const { return width * height; }
};

struct Layer2D {
    std::vector<Block> blocks;
    double side = 0.0;
};

enum class LayerRole { cmp, dram };

/// Bottom-to-top stack of floorplanned layers.
struct Floorplan3D {
    struct Layer {
        Layer2D plan;
        LayerRole role = LayerRole::cmp;
    };
    std::vector<Layer> layers;
    Topology topology = Topology::symmetric;
    int r = 1;
    int n_cores_per_layer = 0; ///< core blocks per cmp layer
    double side = 0.0;
};

/// Block name qualified with its layer index, e.g. "L0_core_3". Qualified
/// names are the keys used by power traces and exports.
inline std::string qualified_name(int layer_index, const std::string& block_name) {
    return "L" + std::to_string(layer_index) + "_" + block_name;
}

namespace detail {

/// Divisor of n closest to sqrt(n); ties resolve to the smaller divisor so
/// rows <= cols.
inline int rows_for_grid(int n) {
    int best = 1;
    double best_gap = std::abs(1.0 - std::sqrt(static_cast<double>(n)));
    for (int d = 1; d * d <= n; ++d) {
        if (n % d != 0)
            continue;
        for (int rows : {d, n / d}) {
            const double gap = std::abs(rows - std::sqrt(static_cast<double>(n)));
            if (gap < best_gap - 1e-12 || (gap < best_gap + 1e-12 && rows < best)) {
                best = rows;
                best_gap = gap;
            }
        }
    }
    return std::min(best, n / best);
}

} // namespace detail

/// Tiles one square layer with budget/r equal-area core rectangles in
/// row-major order. r must divide the budget.
inline Layer2D tile_layer(int r, int budget, double side) {
    if (r < 1 || budget < 1 || r > budget) {
        std::ostringstream msg;
        msg << "tile_layer: core size r = " << r << " outside [1, " << budget << "]";
        throw std::domain_error(msg.str());
    }
    if (budget % r != 0) {
        std::ostringstream msg;
        msg << "tile_layer: r = " << r << " does not divide budget " << budget;
        throw std::domain_error(msg.str());
    }
    if (!(side > 0.0))
        throw std::domain_error("tile_layer: side must be > 0");

    const int n_cores = budget / r;
    const int rows = detail::rows_for_grid(n_cores);
    const int cols = n_cores / rows;
    const double w = side / cols;
    const double h = side / rows;

    Layer2D layer;
    layer.side = side;
    layer.blocks.reserve(n_cores);
    for (int row = 0; row < rows; ++row) {
        for (int col = 0; col < cols; ++col) {
            const int k = row * cols + col;
            Block b;
            b.name = "core_" + std::to_string(k);
            b.x = col * w;
            b.y = row * h;
            b.width = w;
            b.height = h;
            b.kind = BlockKind::core;
            b.core_index = k;
            b.bce = r;
            layer.blocks.push_back(std::move(b));
        }
    }
    return layer;
}

namespace detail {

inline Layer2D dram_layer(double side) {
    Layer2D layer;
    layer.side = side;
    Block b;
    b.name = "dram";
    b.x = 0.0;
    b.y = 0.0;
    b.width = side;
    b.height = side;
    b.kind = BlockKind::dram;
    b.bce = 0;
    layer.blocks.push_back(std::move(b));
    return layer;
}

/// Asymmetric layer: serial core as a full-height strip on the left edge,
/// remainder tiled by an exact-area grid of unit cores.
inline Layer2D asymmetric_layer(int r, int budget, double side) {
    if (r == budget) {
        Layer2D layer;
        layer.side = side;
        Block b;
        b.name = "serial_core";
        b.x = 0.0;
        b.y = 0.0;
        b.width = side;
        b.height = side;
        b.kind = BlockKind::core;
        b.bce = r;
        layer.blocks.push_back(std::move(b));
        return layer;
    }
    if (r == 1) {
        // Degenerate asymmetric chip is the symmetric unit grid with one
        // block designated as the serial core.
        Layer2D layer = tile_layer(1, budget, side);
        layer.blocks.front().name = "serial_core";
        layer.blocks.front().core_index.reset();
        return layer;
    }

    Layer2D layer;
    layer.side = side;
    const double strip_w = side * (static_cast<double>(r) / budget);
    Block serial;
    serial.name = "serial_core";
    serial.x = 0.0;
    serial.y = 0.0;
    serial.width = strip_w;
    serial.height = side;
    serial.kind = BlockKind::core;
    serial.bce = r;
    layer.blocks.push_back(std::move(serial));

    const int n_units = budget - r;
    const int rows = rows_for_grid(n_units);
    const int cols = n_units / rows;
    const double rem_w = side - strip_w;
    const double w = rem_w / cols;
    const double h = side / rows;
    for (int row = 0; row < rows; ++row) {
        for (int col = 0; col < cols; ++col) {
            const int k = row * cols + col;
            Block b;
            b.name = "core_" + std::to_string(k);
            b.x = strip_w + col * w;
            b.y = row * h;
            b.width = w;
            b.height = h;
            b.kind = BlockKind::core;
            b.core_index = k;
            b.bce = 1;
            layer.blocks.push_back(std::move(b));
        }
    }
    return layer;
}

} // namespace detail

/// Symmetric stack: cmp_layers identical tiled core layers plus one DRAM
/// layer on top.
inline Floorplan3D build_symmetric(const CmpConfig& config) {
    config.validate();
    const double side = config.chip_side_m();
    Floorplan3D fp;
    fp.topology = Topology::symmetric;
    fp.r = config.r;
    fp.n_cores_per_layer = config.budget / config.r;
    fp.side = side;
    const Layer2D cmp = tile_layer(config.r, config.budget, side);
    for (int i = 0; i < config.cmp_layers; ++i)
        fp.layers.push_back({cmp, LayerRole::cmp});
    fp.layers.push_back({detail::dram_layer(side), LayerRole::dram});
    return fp;
}

/// Asymmetric stack: per cmp layer one serial core of size r plus
/// (budget - r) unit cores, and one DRAM layer on top.
inline Floorplan3D build_asymmetric(const CmpConfig& config) {
    CmpConfig cfg = config;
    cfg.topology = Topology::asymmetric;
    cfg.validate();
    const double side = cfg.chip_side_m();
    Floorplan3D fp;
    fp.topology = Topology::asymmetric;
    fp.r = cfg.r;
    fp.n_cores_per_layer = cfg.budget - cfg.r + 1;
    fp.side = side;
    const Layer2D cmp = detail::asymmetric_layer(cfg.r, cfg.budget, side);
    for (int i = 0; i < cfg.cmp_layers; ++i)
        fp.layers.push_back({cmp, LayerRole::cmp});
    fp.layers.push_back({detail::dram_layer(side), LayerRole::dram});
    return fp;
}

inline Floorplan3D build_floorplan(const CmpConfig& config) {
    return config.topology == Topology::symmetric ? build_symmetric(config)
                                                  : build_asymmetric(config);
}

/// Structural validation. Returns human-readable violations; empty means the
/// floorplan satisfies all invariants.
inline std::vector<std::string> validate(const Floorplan3D& fp) {
    std::vector<std::string> out;
    if (fp.layers.empty()) {
        out.push_back("floorplan has no layers");
        return out;
    }
    const double side = fp.side;
    const double area_tol = 1e-9 * side * side;
    for (size_t li = 0; li < fp.layers.size(); ++li) {
        const Layer2D& layer = fp.layers[li].plan;
        const std::string tag = "L" + std::to_string(li);
        if (std::abs(layer.side - side) > 1e-12)
            out.push_back(tag + ": side differs from floorplan side");
        double area_sum = 0.0;
        for (const Block& b : layer.blocks) {
            if (!(b.width > 0.0) || !(b.height > 0.0))
                out.push_back(tag + "/" + b.name + ": nonpositive extent");
            if (b.x < -1e-12 || b.y < -1e-12 || b.x + b.width > side + 1e-12 ||
                b.y + b.height > side + 1e-12)
                out.push_back(tag + "/" + b.name + ": outside layer bounds");
            area_sum += b.area();
        }
        if (std::abs(area_sum - side * side) > 1e-9 * side * side)
            out.push_back(tag + ": block areas do not tile the layer");
        for (size_t i = 0; i < layer.blocks.size(); ++i) {
            for (size_t j = i + 1; j < layer.blocks.size(); ++j) {
                const Block& a = layer.blocks[i];
                const Block& b = layer.blocks[j];
                if (a.name == b.name)
                    out.push_back(tag + ": duplicate block name " + a.name);
                const double ox = std::min(a.x + a.width, b.x + b.width) - std::max(a.x, b.x);
                const double oy = std::min(a.y + a.height, b.y + b.height) - std::max(a.y, b.y);
                if (ox > 0.0 && oy > 0.0 && ox * oy > area_tol)
                    out.push_back(tag + ": blocks " + a.name + " and " + b.name + " overlap");
            }
        }
    }
    if (fp.layers.back().role != LayerRole::dram)
        out.push_back("topmost layer is not the dram layer");
    for (size_t li = 0; li + 1 < fp.layers.size(); ++li)
        if (fp.layers[li].role != LayerRole::cmp)
            out.push_back("L" + std::to_string(li) + ": expected cmp layer below dram");
    for (size_t li = 0; li < fp.layers.size(); ++li) {
        if (fp.layers[li].role != LayerRole::cmp)
            continue;
        int cores = 0;
        for (const Block& b : fp.layers[li].plan.blocks)
            if (b.kind == BlockKind::core)
                ++cores;
        if (cores != fp.n_cores_per_layer)
            out.push_back("L" + std::to_string(li) + ": core count " + std::to_string(cores) +
                          " != expected " + std::to_string(fp.n_cores_per_layer));
    }
    return out;
}

/// Identifies the core that stays active during the serial phase: the
/// serial core of the bottom cmp layer for asymmetric chips, otherwise the
/// block nearest the layer center (ties to the lowest core index).
inline std::pair<int, std::string> serial_block(const Floorplan3D& fp) {
    if (fp.layers.empty() || fp.layers.front().role != LayerRole::cmp)
        throw std::invalid_argument("serial_block: floorplan has no bottom cmp layer");
    const Layer2D& layer = fp.layers.front().plan;
    if (fp.topology == Topology::asymmetric)
        return {0, "serial_core"};

    const double cx = layer.side / 2.0;
    const double cy = layer.side / 2.0;
    double best = std::numeric_limits<double>::infinity();
    for (const Block& b : layer.blocks) {
        if (b.kind != BlockKind::core)
            continue;
        const double dx = b.x + b.width / 2.0 - cx;
        const double dy = b.y + b.height / 2.0 - cy;
        best = std::min(best, dx * dx + dy * dy);
    }
    const double tol = 1e-12 * layer.side * layer.side;
    const Block* pick = nullptr;
    for (const Block& b : layer.blocks) {
        if (b.kind != BlockKind::core)
            continue;
        const double dx = b.x + b.width / 2.0 - cx;
        const double dy = b.y + b.height / 2.0 - cy;
        if (dx * dx + dy * dy <= best + tol) {
            if (!pick || b.core_index.value_or(1 << 30) < pick->core_index.value_or(1 << 30))
                pick = &b;
        }
    }
    return {0, pick->name};
}

} // namespace hotstack
