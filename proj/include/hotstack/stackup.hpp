#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hotstack/config.hpp"

namespace hotstack {

enum class MaterialRole { cmp_die, dram_die, tim, spreader, sink };

inline const char* material_role_name(MaterialRole role) {
    switch (role) {
    case MaterialRole::cmp_die: return "cmp_die";
    case MaterialRole::dram_die: return "dram_die";
    case MaterialRole::tim: return "tim";
    case MaterialRole::spreader: return "spreader";
    case MaterialRole::sink: return "sink";
    }
    return "?";
}

/// One homogeneous slab of the simulated stack.
struct MaterialLayer {
    MaterialRole role = MaterialRole::cmp_die;
    double thickness_m = 0.0;
    double conductivity_w_mk = 0.0;
    double vol_heat_capacity_j_m3k = 0.0;
    double extent_m = 0.0; ///< side length of the square footprint

    void validate() const {
        if (!(thickness_m > 0.0) || !(conductivity_w_mk > 0.0) ||
            !(vol_heat_capacity_j_m3k > 0.0) || !(extent_m > 0.0))
            throw std::domain_error(std::string("MaterialLayer(") + material_role_name(role) +
                                    "): all physical quantities must be > 0");
    }
};

/// Lumped package: all sink cells share a single convection path to ambient.
struct PackageSpec {
    double convection_resistance_k_w = 0.1;
    double convection_capacitance_j_k = 140.4;
    double ambient_c = 20.0;

    void validate() const {
        if (!(convection_resistance_k_w > 0.0))
            throw std::domain_error("PackageSpec: convection_resistance_k_w must be > 0");
        if (!(convection_capacitance_j_k > 0.0))
            throw std::domain_error("PackageSpec: convection_capacitance_j_k must be > 0");
    }
};

/// Canonical stack, bottom to top: cmp dies with bond layers between them,
/// the DRAM die, the die-to-spreader TIM, the spreader, and the sink. The
/// bottom face is adiabatic; heat leaves through the sink only.
inline std::vector<MaterialLayer> default_stack(const StackParams& p, double chip_side_m,
                                                int cmp_layers) {
    p.validate();
    if (cmp_layers < 1)
        throw std::domain_error("default_stack: cmp_layers must be >= 1");
    if (!(chip_side_m > 0.0))
        throw std::domain_error("default_stack: chip_side_m must be > 0");

    std::vector<MaterialLayer> stack;
    const MaterialLayer die{MaterialRole::cmp_die, p.die_thickness_m, p.si_conductivity_w_mk,
                            p.si_vol_heat_capacity_j_m3k, chip_side_m};
    const MaterialLayer bond{MaterialRole::tim, p.bond_thickness_m, p.bond_conductivity_w_mk,
                             p.bond_vol_heat_capacity_j_m3k, chip_side_m};
    for (int i = 0; i < cmp_layers; ++i) {
        stack.push_back(die);
        stack.push_back(bond); // bond above every die, the last one under the DRAM die
    }
    stack.push_back({MaterialRole::dram_die, p.die_thickness_m, p.si_conductivity_w_mk,
                     p.si_vol_heat_capacity_j_m3k, chip_side_m});
    stack.push_back({MaterialRole::tim, p.tim_thickness_m, p.tim_conductivity_w_mk,
                     p.tim_vol_heat_capacity_j_m3k, chip_side_m});
    stack.push_back({MaterialRole::spreader, p.spreader_thickness_m, p.metal_conductivity_w_mk,
                     p.metal_vol_heat_capacity_j_m3k, p.spreader_side_m});
    stack.push_back({MaterialRole::sink, p.sink_thickness_m, p.metal_conductivity_w_mk,
                     p.metal_vol_heat_capacity_j_m3k, p.sink_side_m});
    return stack;
}

inline PackageSpec make_package(const ExplorerConfig& cfg) {
    return PackageSpec{cfg.stack.convection_resistance_k_w,
                       cfg.stack.convection_capacitance_j_k, cfg.env.t_ambient_c};
}

} // namespace hotstack
