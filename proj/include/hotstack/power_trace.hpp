#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hotstack/floorplan.hpp"
#include "hotstack/perf.hpp"
#include "hotstack/power.hpp"

namespace hotstack {

enum class PhaseLabel { serial, parallel };

inline const char* phase_name(PhaseLabel label) {
    return label == PhaseLabel::serial ? "serial" : "parallel";
}

/// One execution phase: a duration plus the power of every floorplan block
/// (keyed by qualified name) during that phase.
struct PowerPhase {
    PhaseLabel label = PhaseLabel::parallel;
    double duration = 0.0; ///< seconds
    std::map<std::string, double> block_power;
};

struct PowerTrace {
    std::vector<PowerPhase> phases;         ///< in execution order, nonzero durations
    std::string floorplan_ref;              ///< identifier of the floorplan it drives
    std::vector<std::string> block_order;   ///< layer-major flattened qualified names
};

inline double total_power(const PowerPhase& phase) {
    double sum = 0.0;
    for (const auto& [name, watts] : phase.block_power)
        sum += watts;
    return sum;
}

inline std::string floorplan_ref(const Floorplan3D& fp) {
    return std::string(fp.topology == Topology::symmetric ? "symmetric" : "asymmetric") +
           ":r=" + std::to_string(fp.r) +
           ":layers=" + std::to_string(static_cast<int>(fp.layers.size()));
}

/// Builds the two-phase power trace for a design point. During the serial
/// phase one designated core runs at full power and every other core idles
/// at its own idle power; during the parallel phase all cores are active.
/// Phases of zero duration are dropped.
inline PowerTrace build_trace(const Floorplan3D& fp, const CmpConfig& config,
                              const WorkloadSpec& workload, const PowerLawParams& params,
                              const IdleModel& idle,
                              double perf_exponent = kDefaultPerfExponent) {
    config.validate();
    workload.validate();

    if (fp.r != config.r || fp.topology != config.topology ||
        static_cast<int>(fp.layers.size()) != config.cmp_layers + 1)
        throw std::invalid_argument("build_trace: floorplan does not match config");

    int n_cores_total = 0;
    for (const auto& layer : fp.layers)
        if (layer.role == LayerRole::cmp)
            for (const Block& b : layer.plan.blocks)
                if (b.kind == BlockKind::core)
                    ++n_cores_total;
    if (n_cores_total != config.cores_total())
        throw std::invalid_argument("build_trace: floorplan core count does not match config");

    const PhasePlan plan = phase_plan(workload, config.r, n_cores_total, perf_exponent);
    const auto [serial_layer, serial_name] = serial_block(fp);

    PowerTrace trace;
    trace.floorplan_ref = floorplan_ref(fp);
    for (size_t li = 0; li < fp.layers.size(); ++li)
        for (const Block& b : fp.layers[li].plan.blocks)
            trace.block_order.push_back(qualified_name(static_cast<int>(li), b.name));

    auto block_watts = [&](const Block& b, size_t layer_index, bool parallel) {
        switch (b.kind) {
        case BlockKind::dram:
            return config.dram_power_w;
        case BlockKind::fill:
            return 0.0;
        case BlockKind::core:
            break;
        }
        const double active = core_power(b.bce, params);
        if (parallel)
            return active;
        const bool is_serial_core =
            static_cast<int>(layer_index) == serial_layer && b.name == serial_name;
        return is_serial_core ? active : idle.k_idle * active;
    };

    auto make_phase = [&](PhaseLabel label, double duration) {
        PowerPhase phase;
        phase.label = label;
        phase.duration = duration;
        for (size_t li = 0; li < fp.layers.size(); ++li)
            for (const Block& b : fp.layers[li].plan.blocks)
                phase.block_power[qualified_name(static_cast<int>(li), b.name)] =
                    block_watts(b, li, label == PhaseLabel::parallel);
        return phase;
    };

    if (plan.serial_duration > 0.0)
        trace.phases.push_back(make_phase(PhaseLabel::serial, plan.serial_duration));
    if (plan.parallel_duration > 0.0)
        trace.phases.push_back(make_phase(PhaseLabel::parallel, plan.parallel_duration));
    return trace;
}

} // namespace hotstack
