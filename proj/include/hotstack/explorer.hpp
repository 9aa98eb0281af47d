#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hotstack/analytic.hpp"
#include "hotstack/config.hpp"
#include "hotstack/floorplan.hpp"
#include "hotstack/hotspot_io.hpp"
#include "hotstack/power_trace.hpp"
#include "hotstack/thermal.hpp"

namespace hotstack {

/// One row of a design-space sweep.
struct SweepPoint {
    int r = 0;
    int n_cores_total = 0;
    double f = 0.0;
    double serial_power_w = 0.0;   ///< 0 when the serial phase is absent (f = 1)
    double parallel_power_w = 0.0; ///< 0 when the parallel phase is absent (f = 0)
    double peak_c = 0.0;
    double cmp_peak_c = 0.0;
    double dram_peak_c = 0.0;
    double speedup = 0.0;
};

namespace detail {

/// Floorplan + thermal network for one core size; reused across f values.
struct PointContext {
    Floorplan3D fp;
    ThermalNetwork net;
};

inline PointContext make_point_context(const ExplorerConfig& base, int r) {
    ExplorerConfig cfg = base;
    cfg.cmp.r = r;
    cfg.validate();
    PointContext ctx;
    ctx.fp = build_floorplan(cfg.cmp);
    ctx.net = build_network(ctx.fp,
                            default_stack(cfg.stack, cfg.cmp.chip_side_m(), cfg.cmp.cmp_layers),
                            make_package(cfg), cfg.resolution);
    return ctx;
}

/// Evaluates one (r, f) pair. Single-phase traces (f = 0 or f = 1) settle by
/// assumption and use the steady solver; mixed traces are integrated through
/// the trace from ambient, since their phases can be far shorter than the
/// package time constants.
inline SweepPoint evaluate_point(const ExplorerConfig& base, const PointContext& ctx, int r,
                                 double f) {
    ExplorerConfig cfg = base;
    cfg.cmp.r = r;
    cfg.cmp.f = f;
    cfg.workload.f = f;

    const PowerTrace trace = build_trace(ctx.fp, cfg.cmp, cfg.workload, cfg.cmp.power_params(),
                                         cfg.cmp.idle_model(), cfg.perf_exponent);

    SweepPoint point;
    point.r = r;
    point.f = f;
    point.n_cores_total = cfg.cmp.cores_total();
    point.speedup = speedup(cfg.workload, r, point.n_cores_total, cfg.perf_exponent);
    for (const PowerPhase& phase : trace.phases) {
        if (phase.label == PhaseLabel::serial)
            point.serial_power_w = total_power(phase);
        else
            point.parallel_power_w = total_power(phase);
    }

    if (trace.phases.size() == 1) {
        const TraceSolveResult solved = solve_trace(ctx.net, trace);
        point.peak_c = solved.peak_c;
        point.cmp_peak_c = solved.cmp_peak_c;
        point.dram_peak_c = solved.dram_peak_c;
    } else {
        const TransientPeakResult solved = transient_trace_peak(ctx.net, trace);
        point.peak_c = solved.peak_c;
        point.cmp_peak_c = solved.cmp_peak_c;
        point.dram_peak_c = solved.dram_peak_c;
    }
    return point;
}

} // namespace detail

/// Sweeps the design space; rows come out ordered by ascending r, then
/// ascending f.
inline std::vector<SweepPoint> run_sweep(std::span<const int> r_values,
                                         std::span<const double> f_values,
                                         const ExplorerConfig& base) {
    std::vector<int> rs(r_values.begin(), r_values.end());
    std::vector<double> fs(f_values.begin(), f_values.end());
    std::sort(rs.begin(), rs.end());
    std::sort(fs.begin(), fs.end());

    std::vector<SweepPoint> points;
    points.reserve(rs.size() * fs.size());
    for (int r : rs) {
        const detail::PointContext ctx = detail::make_point_context(base, r);
        for (double f : fs)
            points.push_back(detail::evaluate_point(base, ctx, r, f));
    }
    return points;
}

struct ThermalLimitResult {
    bool feasible = false;
    int r = -1;                    ///< smallest core size meeting the limit
    double parallel_power_w = 0.0; ///< parallel-phase power at that core size
    double peak_c = 0.0;
};

/// Walks core sizes from the largest down while the peak stays within
/// limit_c and returns the smallest size that still met it. Infeasibility
/// (even the largest core violates the limit) is a result, not an error.
inline ThermalLimitResult find_thermal_limit(double f, double limit_c,
                                             const ExplorerConfig& base,
                                             std::span<const int> r_candidates_descending) {
    if (r_candidates_descending.empty())
        throw std::invalid_argument("find_thermal_limit: no candidates");
    for (size_t i = 0; i + 1 < r_candidates_descending.size(); ++i)
        if (r_candidates_descending[i] <= r_candidates_descending[i + 1])
            throw std::invalid_argument("find_thermal_limit: candidates must be descending");

    ThermalLimitResult best;
    for (int r : r_candidates_descending) {
        const detail::PointContext ctx = detail::make_point_context(base, r);
        const SweepPoint point = detail::evaluate_point(base, ctx, r, f);
        if (point.peak_c > limit_c)
            break;
        best.feasible = true;
        best.r = r;
        best.parallel_power_w = point.parallel_power_w;
        best.peak_c = point.peak_c;
    }
    return best;
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

inline void write_curves_csv(std::ostream& os, const std::vector<AnalyticCurve>& curves) {
    os << "alpha,r,temp_c\n";
    for (const AnalyticCurve& curve : curves)
        for (const CurvePoint& p : curve.points)
            os << detail::format_double(curve.alpha) << ',' << p.r << ','
               << detail::format_double(p.temp_c) << '\n';
}

/// Closed-form curves for both topologies over the configured grids.
inline void analytic_report(const ExplorerConfig& cfg, std::ostream& symmetric_csv,
                            std::ostream& asymmetric_csv) {
    cfg.validate();
    const PowerLawParams params = cfg.cmp.power_params();
    write_curves_csv(symmetric_csv,
                     curve_family(Topology::symmetric, cfg.alphas, cfg.r_values, params, cfg.env));
    write_curves_csv(asymmetric_csv, curve_family(Topology::asymmetric, cfg.alphas, cfg.r_values,
                                                  params, cfg.env));
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points) {
    os << "r,n_cores_total,f,serial_power_w,parallel_power_w,peak_c,cmp_peak_c,dram_peak_c,"
          "speedup\n";
    for (const SweepPoint& p : points) {
        os << p.r << ',' << p.n_cores_total << ',' << detail::format_double(p.f) << ','
           << detail::format_double(p.serial_power_w) << ','
           << detail::format_double(p.parallel_power_w) << ',' << detail::format_double(p.peak_c)
           << ',' << detail::format_double(p.cmp_peak_c) << ','
           << detail::format_double(p.dram_peak_c) << ',' << detail::format_double(p.speedup)
           << '\n';
    }
}

inline void write_field_csv(std::ostream& os, const ThermalNetwork& net,
                            const ThermalField& field) {
    os << "layer,row,col,x_m,y_m,temp_c\n";
    for (size_t gi = 0; gi < net.grids.size(); ++gi) {
        const auto& g = net.grids[gi];
        for (int row = 0; row < g.n; ++row) {
            for (int col = 0; col < g.n; ++col) {
                const int node = detail::node_index(g, row, col);
                os << gi << ',' << row << ',' << col << ','
                   << detail::format_double(detail::cell_center(g, col)) << ','
                   << detail::format_double(detail::cell_center(g, row)) << ','
                   << detail::format_double(field.temp_c[node]) << '\n';
            }
        }
    }
}

inline void write_summary_csv(std::ostream& os, const ThermalNetwork& net,
                              const PowerTrace& trace, const TraceSolveResult& solved) {
    os << "phase,total_power_w,peak_c,peak_layer,cmp_peak_c,dram_peak_c\n";
    for (size_t pi = 0; pi < trace.phases.size(); ++pi) {
        const ThermalField& field = solved.phase_fields[pi];
        os << phase_name(trace.phases[pi].label) << ','
           << detail::format_double(total_power(trace.phases[pi])) << ','
           << detail::format_double(field.peak_c) << ',' << net.grid_of(field.peak_node) << ','
           << detail::format_double(field.cmp_peak_c) << ','
           << detail::format_double(field.dram_peak_c) << '\n';
    }
}

// ---------------------------------------------------------------------------
// HotSpot export
// ---------------------------------------------------------------------------

struct HotspotExport {
    std::vector<std::filesystem::path> flp_files;
    std::filesystem::path manifest_file;
    std::filesystem::path ptrace_file;
};

/// Writes per-layer .flp files, the layer-stack manifest, and the .ptrace
/// for one design point into out_dir.
inline HotspotExport export_hotspot(const ExplorerConfig& cfg,
                                    const std::filesystem::path& out_dir) {
    cfg.validate();
    std::filesystem::create_directories(out_dir);

    const Floorplan3D fp = build_floorplan(cfg.cmp);
    const PowerTrace trace = build_trace(fp, cfg.cmp, cfg.workload, cfg.cmp.power_params(),
                                         cfg.cmp.idle_model(), cfg.perf_exponent);

    HotspotExport result;
    std::vector<ManifestEntry> manifest;
    for (size_t li = 0; li < fp.layers.size(); ++li) {
        const bool cmp = fp.layers[li].role == LayerRole::cmp;
        const std::string name =
            "layer" + std::to_string(li) + (cmp ? "_cmp.flp" : "_dram.flp");
        const std::filesystem::path path = out_dir / name;
        std::ofstream os(path);
        if (!os)
            throw std::runtime_error("export_hotspot: cannot write " + path.string());
        write_flp(os, fp.layers[li].plan);
        manifest.push_back({name, fp.layers[li].role});
        result.flp_files.push_back(path);
    }
    result.manifest_file = out_dir / "stack.manifest";
    {
        std::ofstream os(result.manifest_file);
        if (!os)
            throw std::runtime_error("export_hotspot: cannot write manifest");
        write_manifest(os, manifest);
    }
    result.ptrace_file = out_dir / "power.ptrace";
    {
        std::ofstream os(result.ptrace_file);
        if (!os)
            throw std::runtime_error("export_hotspot: cannot write ptrace");
        write_ptrace(os, trace, cfg.sample_interval_s);
    }
    return result;
}

} // namespace hotstack
