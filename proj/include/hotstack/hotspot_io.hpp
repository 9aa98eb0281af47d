#pragma once

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hotstack/floorplan.hpp"
#include "hotstack/power_trace.hpp"

namespace hotstack {

/// Writes one layer in HotSpot floorplan format:
///   name <tab> width_m <tab> height_m <tab> left_x_m <tab> bottom_y_m
/// Values use the shortest decimal form that parses back to the same double.
inline void write_flp(std::ostream& os, const Layer2D& layer) {
    os << "# block\twidth_m\theight_m\tleft_x_m\tbottom_y_m\n";
    for (const Block& b : layer.blocks) {
        os << b.name << '\t' << detail::format_double(b.width) << '\t'
           << detail::format_double(b.height) << '\t' << detail::format_double(b.x) << '\t'
           << detail::format_double(b.y) << '\n';
    }
}

namespace detail {
inline BlockKind kind_from_name(const std::string& name) {
    if (name == "dram" || name.rfind("dram_", 0) == 0)
        return BlockKind::dram;
    if (name.rfind("fill", 0) == 0)
        return BlockKind::fill;
    return BlockKind::core;
}
} // namespace detail

/// Parses a floorplan file written by write_flp (or HotSpot's 5-column
/// format). Block kinds are inferred from names; core sizes are not part of
/// the format and come back as 0.
inline Layer2D parse_flp(std::istream& in) {
    Layer2D layer;
    std::string line;
    int line_no = 0;
    double extent = 0.0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = detail::trim(line);
        if (text.empty() || text[0] == '#')
            continue;
        std::istringstream fields(text);
        Block b;
        if (!(fields >> b.name >> b.width >> b.height >> b.x >> b.y))
            throw std::invalid_argument("flp: malformed line " + std::to_string(line_no) +
                                        ": '" + text + "'");
        std::string extra;
        if (fields >> extra)
            throw std::invalid_argument("flp: trailing fields on line " + std::to_string(line_no));
        b.kind = detail::kind_from_name(b.name);
        extent = std::max({extent, b.x + b.width, b.y + b.height});
        layer.blocks.push_back(std::move(b));
    }
    layer.side = extent;
    return layer;
}

/// Stack manifest: one `<floorplan-file> <tab> <role>` line per layer,
/// bottom to top. Roles are "cmp" and "dram".
struct ManifestEntry {
    std::string flp_path;
    LayerRole role = LayerRole::cmp;
};

inline void write_manifest(std::ostream& os, const std::vector<ManifestEntry>& entries) {
    os << "# layer floorplans, bottom to top\n";
    for (const auto& e : entries)
        os << e.flp_path << '\t' << (e.role == LayerRole::cmp ? "cmp" : "dram") << '\n';
}

inline std::vector<ManifestEntry> parse_manifest(std::istream& in) {
    std::vector<ManifestEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = detail::trim(line);
        if (text.empty() || text[0] == '#')
            continue;
        std::istringstream fields(text);
        ManifestEntry e;
        std::string role;
        if (!(fields >> e.flp_path >> role) || (role != "cmp" && role != "dram"))
            throw std::invalid_argument("manifest: malformed line " + std::to_string(line_no));
        e.role = role == "cmp" ? LayerRole::cmp : LayerRole::dram;
        entries.push_back(std::move(e));
    }
    return entries;
}

/// Writes a HotSpot power trace: the first line names every block (layer
/// qualified, layer-major), each following line is one sampling interval.
/// Every phase emits ceil(duration / sample_interval) rows.
inline void write_ptrace(std::ostream& os, const PowerTrace& trace, double sample_interval_s) {
    if (!(sample_interval_s > 0.0))
        throw std::domain_error("ptrace: sample_interval must be > 0");
    for (size_t i = 0; i < trace.block_order.size(); ++i)
        os << (i ? "\t" : "") << trace.block_order[i];
    os << '\n';
    for (const PowerPhase& phase : trace.phases) {
        const long rows = static_cast<long>(std::ceil(phase.duration / sample_interval_s));
        std::string row;
        for (size_t i = 0; i < trace.block_order.size(); ++i) {
            if (i)
                row += '\t';
            row += detail::format_double(phase.block_power.at(trace.block_order[i]));
        }
        row += '\n';
        for (long k = 0; k < rows; ++k)
            os << row;
    }
}

struct ParsedPtrace {
    std::vector<std::string> block_names;
    std::vector<std::vector<double>> rows;
};

inline ParsedPtrace parse_ptrace(std::istream& in) {
    ParsedPtrace out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = detail::trim(line);
        if (text.empty() || text[0] == '#')
            continue;
        std::istringstream fields(text);
        if (out.block_names.empty()) {
            std::string name;
            while (fields >> name)
                out.block_names.push_back(name);
            if (out.block_names.empty())
                throw std::invalid_argument("ptrace: empty header line");
            continue;
        }
        std::vector<double> row;
        row.reserve(out.block_names.size());
        double v = 0.0;
        while (fields >> v)
            row.push_back(v);
        if (row.size() != out.block_names.size())
            throw std::invalid_argument("ptrace: line " + std::to_string(line_no) + " has " +
                                        std::to_string(row.size()) + " values, expected " +
                                        std::to_string(out.block_names.size()));
        out.rows.push_back(std::move(row));
    }
    return out;
}

} // namespace hotstack
