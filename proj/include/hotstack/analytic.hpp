#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

#include "hotstack/power.hpp"

namespace hotstack {

/// Lumped thermal environment of the closed-form model: an areal thermal
/// resistance (mm^2 K / W) plus an ambient temperature.
struct ThermalEnv {
    double r_th_mm2kw = 60.0;
    double t_ambient_c = 20.0;

    void validate() const {
        if (!(r_th_mm2kw > 0.0))
            throw std::domain_error("ThermalEnv: r_th_mm2kw must be > 0");
        if (!std::isfinite(t_ambient_c))
            throw std::domain_error("ThermalEnv: t_ambient_c must be finite");
    }
};

struct CurvePoint {
    int r = 1;
    double temp_c = 0.0;
};

/// One temperature-vs-core-size curve at a fixed power-law exponent.
struct AnalyticCurve {
    double alpha = 0.875;
    std::vector<CurvePoint> points;
};

enum class Topology { symmetric, asymmetric };

/// Absolute temperature of a fully parallel symmetric chip: the whole budget
/// split into budget/r active cores of size r. The power density is taken
/// over the physical chip area, so r_th * (W/mm^2) is a rise in kelvins.
inline double temp_symmetric(int r, const PowerLawParams& params, const ThermalEnv& env) {
    env.validate();
    return env.r_th_mm2kw * chip_power_symmetric(r, params) / params.chip_area_mm2 +
           env.t_ambient_c;
}

/// Absolute temperature of a fully parallel asymmetric chip: one serial core
/// of size r plus (budget - r) active unit cores.
inline double temp_asymmetric(int r, const PowerLawParams& params, const ThermalEnv& env) {
    env.validate();
    return env.r_th_mm2kw * chip_power_asymmetric(r, params) / params.chip_area_mm2 +
           env.t_ambient_c;
}

/// Evaluates one curve per exponent over the given core sizes. Points come
/// out with strictly increasing r regardless of input order.
inline std::vector<AnalyticCurve> curve_family(Topology kind, std::span<const double> alphas,
                                               std::span<const int> r_values,
                                               PowerLawParams params, const ThermalEnv& env) {
    std::vector<int> rs(r_values.begin(), r_values.end());
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());

    std::vector<AnalyticCurve> curves;
    curves.reserve(alphas.size());
    for (double a : alphas) {
        AnalyticCurve curve;
        curve.alpha = a;
        params.alpha = a;
        curve.points.reserve(rs.size());
        for (int r : rs) {
            const double t = kind == Topology::symmetric
                                 ? temp_symmetric(r, params, env)
                                 : temp_asymmetric(r, params, env);
            curve.points.push_back({r, t});
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

} // namespace hotstack
