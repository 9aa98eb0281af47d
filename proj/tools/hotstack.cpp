// Command-line front end: design-space exploration of thermally constrained
// 3D chip multiprocessors. Subcommands emit CSV data files suitable for
// external plotting plus HotSpot-compatible floorplan/power-trace exports.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hotstack/explorer.hpp"

namespace fs = std::filesystem;
using namespace hotstack;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    int resolution = 0; // 0 = keep config value
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "flat key=value config file");
    cmd->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--resolution", opts.resolution, "grid cells per side");
    cmd->add_option("--set", opts.overrides, "override a config key, e.g. --set r=16")
        ->type_name("KEY=VALUE");
}

ExplorerConfig load_config(const CommonOpts& opts) {
    ExplorerConfig cfg;
    if (!opts.config_path.empty())
        cfg = parse_config_file(opts.config_path);
    for (const std::string& entry : opts.overrides) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got '" + entry + "'");
        apply_config_entry(cfg, entry.substr(0, eq), entry.substr(eq + 1));
    }
    if (opts.resolution > 0)
        cfg.resolution = opts.resolution;
    cfg.validate();
    return cfg;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot write " + path.string());
    return os;
}

void echo_resolved(const ExplorerConfig& cfg, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    auto os = open_out(out_dir / "config_resolved.txt");
    os << echo_config(cfg);
    std::cout << "resolved config -> " << (out_dir / "config_resolved.txt").string() << "\n";
}

int run_analytic(const CommonOpts& opts) {
    const ExplorerConfig cfg = load_config(opts);
    echo_resolved(cfg, opts.out_dir);
    auto sym = open_out(fs::path(opts.out_dir) / "analytic_symmetric.csv");
    auto asym = open_out(fs::path(opts.out_dir) / "analytic_asymmetric.csv");
    analytic_report(cfg, sym, asym);
    std::cout << "analytic curves -> " << opts.out_dir << "/analytic_{symmetric,asymmetric}.csv\n";
    return 0;
}

int run_simulate(const CommonOpts& opts) {
    const ExplorerConfig cfg = load_config(opts);
    echo_resolved(cfg, opts.out_dir);

    const Floorplan3D fp = build_floorplan(cfg.cmp);
    const auto violations = validate(fp);
    if (!violations.empty())
        throw std::runtime_error("floorplan validation failed: " + violations.front());
    const PowerTrace trace = build_trace(fp, cfg.cmp, cfg.workload, cfg.cmp.power_params(),
                                         cfg.cmp.idle_model(), cfg.perf_exponent);
    const ThermalNetwork net =
        build_network(fp, default_stack(cfg.stack, cfg.cmp.chip_side_m(), cfg.cmp.cmp_layers),
                      make_package(cfg), cfg.resolution);
    const TraceSolveResult solved = solve_trace(net, trace);

    for (size_t pi = 0; pi < trace.phases.size(); ++pi) {
        const std::string name = std::string("field_") + phase_name(trace.phases[pi].label) + ".csv";
        auto os = open_out(fs::path(opts.out_dir) / name);
        write_field_csv(os, net, solved.phase_fields[pi]);
    }
    auto os = open_out(fs::path(opts.out_dir) / "summary.csv");
    write_summary_csv(os, net, trace, solved);
    std::printf("peak %.3f C (cmp %.3f C, dram %.3f C) in the %s phase\n", solved.peak_c,
                solved.cmp_peak_c, solved.dram_peak_c,
                phase_name(trace.phases[solved.peak_phase].label));
    std::cout << "fields + summary -> " << opts.out_dir << "\n";
    return 0;
}

int run_sweep_cmd(const CommonOpts& opts) {
    const ExplorerConfig cfg = load_config(opts);
    echo_resolved(cfg, opts.out_dir);
    const std::vector<SweepPoint> points = run_sweep(cfg.r_values, cfg.f_values, cfg);
    auto os = open_out(fs::path(opts.out_dir) / "sweep.csv");
    write_sweep_csv(os, points);
    std::cout << points.size() << " design points -> " << opts.out_dir << "/sweep.csv\n";
    return 0;
}

int run_limit(const CommonOpts& opts, double limit_override) {
    const ExplorerConfig cfg = load_config(opts);
    echo_resolved(cfg, opts.out_dir);
    const double limit_c = limit_override > 0 ? limit_override : cfg.cmp.temp_limit_dram_c;

    std::vector<int> candidates = cfg.r_values;
    std::sort(candidates.rbegin(), candidates.rend());
    const ThermalLimitResult res = find_thermal_limit(cfg.cmp.f, limit_c, cfg, candidates);

    auto os = open_out(fs::path(opts.out_dir) / "limit.csv");
    os << "f,limit_c,feasible,r,parallel_power_w,peak_c\n";
    os << detail::format_double(cfg.cmp.f) << ',' << detail::format_double(limit_c) << ','
       << (res.feasible ? 1 : 0) << ',' << res.r << ','
       << detail::format_double(res.parallel_power_w) << ','
       << detail::format_double(res.peak_c) << '\n';
    if (res.feasible)
        std::printf("limit %.1f C at f=%g: smallest feasible r = %d BCE, "
                    "parallel power %.2f W, peak %.2f C\n",
                    limit_c, cfg.cmp.f, res.r, res.parallel_power_w, res.peak_c);
    else
        std::printf("limit %.1f C at f=%g: no feasible core size among candidates\n", limit_c,
                    cfg.cmp.f);
    return 0;
}

int run_export(const CommonOpts& opts) {
    const ExplorerConfig cfg = load_config(opts);
    echo_resolved(cfg, opts.out_dir);
    const HotspotExport files = export_hotspot(cfg, opts.out_dir);
    std::cout << files.flp_files.size() << " floorplans, " << files.manifest_file.filename().string()
              << ", " << files.ptrace_file.filename().string() << " -> " << opts.out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"thermal design-space explorer for 3D chip multiprocessors"};
    app.require_subcommand(1);

    CommonOpts analytic_opts, simulate_opts, sweep_opts, limit_opts, export_opts;
    double limit_c = 0.0;

    add_common(app.add_subcommand("analytic", "closed-form temperature curves"), analytic_opts);
    add_common(app.add_subcommand("simulate", "solve one design point"), simulate_opts);
    add_common(app.add_subcommand("sweep", "sweep core size and parallel fraction"), sweep_opts);
    CLI::App* limit_cmd = app.add_subcommand("limit", "find the thermal design-space limit");
    add_common(limit_cmd, limit_opts);
    limit_cmd->add_option("--limit", limit_c, "temperature limit in C (default: DRAM limit)");
    add_common(app.add_subcommand("export-hotspot", "write .flp/.ptrace/manifest files"),
               export_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("analytic"))
            return run_analytic(analytic_opts);
        if (app.got_subcommand("simulate"))
            return run_simulate(simulate_opts);
        if (app.got_subcommand("sweep"))
            return run_sweep_cmd(sweep_opts);
        if (app.got_subcommand("limit"))
            return run_limit(limit_opts, limit_c);
        if (app.got_subcommand("export-hotspot"))
            return run_export(export_opts);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
