#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hotstack/analytic.hpp"
#include "hotstack/perf.hpp"
#include "hotstack/power.hpp"

namespace hotstack {

/// One design point of the chip-level model.
struct CmpConfig {
    Topology topology = Topology::symmetric;
    int r = 64;           ///< core size in BCE
    int cmp_layers = 4;   ///< stacked core layers
    double f = 1.0;       ///< parallel fraction
    double k_idle = 0.2;
    double alpha = 0.875;
    double p_full = 25.0;
    int budget = 256;     ///< BCE per layer
    double chip_area_mm2 = 28.0;
    double dram_power_w = 0.0;
    double temp_limit_dram_c = 95.0;
    double temp_limit_package_c = 125.0;

    PowerLawParams power_params() const {
        return PowerLawParams{p_full, budget, alpha, chip_area_mm2};
    }
    IdleModel idle_model() const { return IdleModel{k_idle}; }

    /// Chip edge length in meters (layers are square).
    double chip_side_m() const { return std::sqrt(chip_area_mm2 * 1e-6); }

    int cores_per_layer() const {
        return topology == Topology::symmetric ? budget / r : budget - r + 1;
    }
    int cores_total() const { return cmp_layers * cores_per_layer(); }

    void validate() const {
        power_params().validate();
        idle_model().validate();
        if (r < 1 || r > budget)
            throw std::domain_error("CmpConfig: r outside [1, budget]");
        if (topology == Topology::symmetric && budget % r != 0)
            throw std::domain_error("CmpConfig: r must divide budget for symmetric chips");
        if (cmp_layers < 1)
            throw std::domain_error("CmpConfig: cmp_layers must be >= 1");
        if (f < 0.0 || f > 1.0)
            throw std::domain_error("CmpConfig: f must be in [0, 1]");
        if (dram_power_w < 0.0)
            throw std::domain_error("CmpConfig: dram_power_w must be >= 0");
    }
};

/// Geometry and material constants of the simulated die stack. Bond layers
/// sit between dies and are distinguished from the die-to-spreader TIM: a
/// TSV-laden Cu-Cu hybrid bond is metal-dominated and carries far more
/// vertical conductance than plain interface material.
struct StackParams {
    double die_thickness_m = 0.15e-3;
    double bond_thickness_m = 0.02e-3;
    double tim_thickness_m = 0.02e-3;
    double si_conductivity_w_mk = 100.0;
    double si_vol_heat_capacity_j_m3k = 1.75e6;
    double bond_conductivity_w_mk = 200.0;
    double bond_vol_heat_capacity_j_m3k = 2.5e6;
    double tim_conductivity_w_mk = 4.0;
    double tim_vol_heat_capacity_j_m3k = 4.0e6;
    double metal_conductivity_w_mk = 400.0;
    double metal_vol_heat_capacity_j_m3k = 3.55e6;
    double spreader_side_m = 30e-3;
    double spreader_thickness_m = 1e-3;
    double sink_side_m = 60e-3;
    double sink_thickness_m = 6.9e-3;
    double convection_resistance_k_w = 0.1;
    double convection_capacitance_j_k = 140.4;

    void validate() const {
        const double vals[] = {die_thickness_m, bond_thickness_m, tim_thickness_m,
                               si_conductivity_w_mk, si_vol_heat_capacity_j_m3k,
                               bond_conductivity_w_mk, bond_vol_heat_capacity_j_m3k,
                               tim_conductivity_w_mk, tim_vol_heat_capacity_j_m3k,
                               metal_conductivity_w_mk, metal_vol_heat_capacity_j_m3k,
                               spreader_side_m, spreader_thickness_m,
                               sink_side_m, sink_thickness_m,
                               convection_resistance_k_w, convection_capacitance_j_k};
        for (double v : vals)
            if (!(v > 0.0))
                throw std::domain_error("StackParams: all physical quantities must be > 0");
    }
};

/// Fully resolved tool configuration: design point, workload, environment,
/// stack constants, solver knobs, and default sweep grids.
struct ExplorerConfig {
    CmpConfig cmp;
    WorkloadSpec workload{1.0, 10.0};
    ThermalEnv env;
    StackParams stack;
    int resolution = 64;
    double sample_interval_s = 3.333e-4;
    double perf_exponent = kDefaultPerfExponent;
    std::vector<int> r_values = {1, 2, 4, 8, 16, 32, 64, 128, 256};
    std::vector<double> f_values = {0.5, 0.9, 0.99, 0.999, 1.0};
    std::vector<double> alphas = {0.75, 0.875, 1.0};

    void validate() const {
        cmp.validate();
        workload.validate();
        env.validate();
        stack.validate();
        if (resolution < 2)
            throw std::domain_error("ExplorerConfig: resolution must be >= 2");
        if (!(sample_interval_s > 0.0))
            throw std::domain_error("ExplorerConfig: sample_interval_s must be > 0");
        if (cmp.temp_limit_dram_c <= env.t_ambient_c ||
            cmp.temp_limit_package_c <= env.t_ambient_c)
            throw std::domain_error("ExplorerConfig: temperature limits must exceed ambient");
        for (int r : r_values) {
            if (r < 1 || r > cmp.budget)
                throw std::domain_error("ExplorerConfig: r_values must lie in [1, budget]");
            if (cmp.topology == Topology::symmetric && cmp.budget % r != 0)
                throw std::domain_error("ExplorerConfig: r_values must divide the budget");
        }
        for (double f : f_values)
            if (f < 0.0 || f > 1.0)
                throw std::domain_error("ExplorerConfig: f_values must lie in [0, 1]");
    }
};

namespace detail {

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v)
            return buf;
    }
    return buf;
}

inline double parse_double(const std::string& key, const std::string& text) {
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for " + key + ": '" + text + "'");
    }
    if (pos != text.size())
        throw std::invalid_argument("config: trailing junk in value for " + key + ": '" + text + "'");
    return v;
}

inline int parse_int(const std::string& key, const std::string& text) {
    const double v = parse_double(key, text);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw std::invalid_argument("config: value for " + key + " must be an integer");
    return i;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text,
                          T (*one)(const std::string&, const std::string&)) {
    std::vector<T> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ','))
        out.push_back(one(key, item));
    return out;
}

struct ConfigField {
    const char* name;
    std::function<void(ExplorerConfig&, const std::string&)> set;
    std::function<std::string(const ExplorerConfig&)> get;
};

inline std::string topology_name(Topology t) {
    return t == Topology::symmetric ? "symmetric" : "asymmetric";
}

inline const std::vector<ConfigField>& config_fields() {
    auto num = [](const char* name, auto accessor) {
        // accessor(cfg) -> reference to a double field nested in a sub-struct
        return ConfigField{
            name,
            [name, accessor](ExplorerConfig& c, const std::string& v) { accessor(c) = parse_double(name, v); },
            [accessor](const ExplorerConfig& c) {
                return format_double(accessor(const_cast<ExplorerConfig&>(c)));
            }};
    };
    auto integer = [](const char* name, auto accessor) {
        return ConfigField{
            name,
            [name, accessor](ExplorerConfig& c, const std::string& v) { accessor(c) = parse_int(name, v); },
            [accessor](const ExplorerConfig& c) {
                return std::to_string(accessor(const_cast<ExplorerConfig&>(c)));
            }};
    };
    static const std::vector<ConfigField> fields = {
        ConfigField{"topology",
                    [](ExplorerConfig& c, const std::string& v) {
                        if (v == "symmetric")
                            c.cmp.topology = Topology::symmetric;
                        else if (v == "asymmetric")
                            c.cmp.topology = Topology::asymmetric;
                        else
                            throw std::invalid_argument("config: topology must be symmetric or asymmetric, got '" + v + "'");
                    },
                    [](const ExplorerConfig& c) { return topology_name(c.cmp.topology); }},
        integer("r", [](ExplorerConfig& c) -> int& { return c.cmp.r; }),
        integer("cmp_layers", [](ExplorerConfig& c) -> int& { return c.cmp.cmp_layers; }),
        num("f", [](ExplorerConfig& c) -> double& { return c.cmp.f; }),
        num("k_idle", [](ExplorerConfig& c) -> double& { return c.cmp.k_idle; }),
        num("alpha", [](ExplorerConfig& c) -> double& { return c.cmp.alpha; }),
        num("p_full", [](ExplorerConfig& c) -> double& { return c.cmp.p_full; }),
        integer("budget", [](ExplorerConfig& c) -> int& { return c.cmp.budget; }),
        num("chip_area_mm2", [](ExplorerConfig& c) -> double& { return c.cmp.chip_area_mm2; }),
        num("dram_power_w", [](ExplorerConfig& c) -> double& { return c.cmp.dram_power_w; }),
        num("temp_limit_dram_c", [](ExplorerConfig& c) -> double& { return c.cmp.temp_limit_dram_c; }),
        num("temp_limit_package_c", [](ExplorerConfig& c) -> double& { return c.cmp.temp_limit_package_c; }),
        num("t_base", [](ExplorerConfig& c) -> double& { return c.workload.t_base; }),
        num("ambient_c", [](ExplorerConfig& c) -> double& { return c.env.t_ambient_c; }),
        num("r_th_mm2kw", [](ExplorerConfig& c) -> double& { return c.env.r_th_mm2kw; }),
        integer("resolution", [](ExplorerConfig& c) -> int& { return c.resolution; }),
        num("sample_interval_s", [](ExplorerConfig& c) -> double& { return c.sample_interval_s; }),
        num("perf_exponent", [](ExplorerConfig& c) -> double& { return c.perf_exponent; }),
        num("die_thickness_m", [](ExplorerConfig& c) -> double& { return c.stack.die_thickness_m; }),
        num("bond_thickness_m", [](ExplorerConfig& c) -> double& { return c.stack.bond_thickness_m; }),
        num("tim_thickness_m", [](ExplorerConfig& c) -> double& { return c.stack.tim_thickness_m; }),
        num("si_conductivity_w_mk", [](ExplorerConfig& c) -> double& { return c.stack.si_conductivity_w_mk; }),
        num("si_vol_heat_capacity_j_m3k", [](ExplorerConfig& c) -> double& { return c.stack.si_vol_heat_capacity_j_m3k; }),
        num("bond_conductivity_w_mk", [](ExplorerConfig& c) -> double& { return c.stack.bond_conductivity_w_mk; }),
        num("bond_vol_heat_capacity_j_m3k", [](ExplorerConfig& c) -> double& { return c.stack.bond_vol_heat_capacity_j_m3k; }),
        num("tim_conductivity_w_mk", [](ExplorerConfig& c) -> double& { return c.stack.tim_conductivity_w_mk; }),
        num("tim_vol_heat_capacity_j_m3k", [](ExplorerConfig& c) -> double& { return c.stack.tim_vol_heat_capacity_j_m3k; }),
        num("metal_conductivity_w_mk", [](ExplorerConfig& c) -> double& { return c.stack.metal_conductivity_w_mk; }),
        num("metal_vol_heat_capacity_j_m3k", [](ExplorerConfig& c) -> double& { return c.stack.metal_vol_heat_capacity_j_m3k; }),
        num("spreader_side_m", [](ExplorerConfig& c) -> double& { return c.stack.spreader_side_m; }),
        num("spreader_thickness_m", [](ExplorerConfig& c) -> double& { return c.stack.spreader_thickness_m; }),
        num("sink_side_m", [](ExplorerConfig& c) -> double& { return c.stack.sink_side_m; }),
        num("sink_thickness_m", [](ExplorerConfig& c) -> double& { return c.stack.sink_thickness_m; }),
        num("convection_resistance_k_w", [](ExplorerConfig& c) -> double& { return c.stack.convection_resistance_k_w; }),
        num("convection_capacitance_j_k", [](ExplorerConfig& c) -> double& { return c.stack.convection_capacitance_j_k; }),
        ConfigField{"r_values",
                    [](ExplorerConfig& c, const std::string& v) { c.r_values = parse_list<int>("r_values", v, parse_int); },
                    [](const ExplorerConfig& c) {
                        std::string out;
                        for (size_t i = 0; i < c.r_values.size(); ++i)
                            out += (i ? "," : "") + std::to_string(c.r_values[i]);
                        return out;
                    }},
        ConfigField{"f_values",
                    [](ExplorerConfig& c, const std::string& v) { c.f_values = parse_list<double>("f_values", v, parse_double); },
                    [](const ExplorerConfig& c) {
                        std::string out;
                        for (size_t i = 0; i < c.f_values.size(); ++i)
                            out += (i ? "," : "") + format_double(c.f_values[i]);
                        return out;
                    }},
        ConfigField{"alphas",
                    [](ExplorerConfig& c, const std::string& v) { c.alphas = parse_list<double>("alphas", v, parse_double); },
                    [](const ExplorerConfig& c) {
                        std::string out;
                        for (size_t i = 0; i < c.alphas.size(); ++i)
                            out += (i ? "," : "") + format_double(c.alphas[i]);
                        return out;
                    }},
    };
    return fields;
}

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

} // namespace detail

/// Applies one `key=value` assignment to a configuration. Unknown keys are
/// errors so that typos never silently fall back to defaults.
inline void apply_config_entry(ExplorerConfig& cfg, const std::string& key,
                               const std::string& value) {
    for (const auto& field : detail::config_fields()) {
        if (key == field.name) {
            field.set(cfg, value);
            return;
        }
    }
    throw std::invalid_argument("config: unknown key '" + key + "'");
}

/// Reads a flat key=value config. Blank lines and lines starting with '#'
/// are ignored; keys not present keep their defaults.
inline ExplorerConfig parse_config(std::istream& in) {
    ExplorerConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = detail::trim(line);
        if (text.empty() || text[0] == '#')
            continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " is not key=value: '" + text + "'");
        apply_config_entry(cfg, detail::trim(text.substr(0, eq)),
                           detail::trim(text.substr(eq + 1)));
    }
    return cfg;
}

inline ExplorerConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("config: cannot open '" + path + "'");
    return parse_config(in);
}

/// Fully-resolved echo of a configuration, one key=value per line, in a
/// fixed key order. Reparsing the echo reproduces the configuration.
inline std::string echo_config(const ExplorerConfig& cfg) {
    std::string out;
    for (const auto& field : detail::config_fields()) {
        out += field.name;
        out += '=';
        out += field.get(cfg);
        out += '\n';
    }
    return out;
}

} // namespace hotstack
