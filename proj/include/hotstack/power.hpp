#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hotstack {

/// Parameters of the sublinear core-power law
///
///     p(r) = p_full * (r / budget)^alpha
///
/// where r is the core size in BCE (baseline core equivalents) and p_full is
/// the power of a core spanning the whole area budget.
struct PowerLawParams {
    double p_full = 25.0;        ///< watts consumed by the full-budget core
    int budget = 256;            ///< area budget in BCE
    double alpha = 0.875;        ///< power-law exponent, 0 < alpha <= 1
    double chip_area_mm2 = 28.0; ///< physical area of the full budget, mm^2

    void validate() const {
        if (!(p_full > 0.0))
            throw std::domain_error("PowerLawParams: p_full must be > 0");
        if (budget < 1)
            throw std::domain_error("PowerLawParams: budget must be >= 1");
        if (!(alpha > 0.0) || alpha > 1.0)
            throw std::domain_error("PowerLawParams: alpha must be in (0, 1]");
        if (!(chip_area_mm2 > 0.0))
            throw std::domain_error("PowerLawParams: chip_area_mm2 must be > 0");
    }
};

/// Idle cores dissipate a fixed fraction of their active power.
struct IdleModel {
    double k_idle = 0.2;

    void validate() const {
        if (k_idle < 0.0 || k_idle > 1.0)
            throw std::domain_error("IdleModel: k_idle must be in [0, 1]");
    }
};

namespace detail {
inline void check_core_size(int r, const PowerLawParams& params) {
    if (r < 1 || r > params.budget) {
        std::ostringstream msg;
        msg << "core size r = " << r << " outside [1, " << params.budget << "]";
        throw std::domain_error(msg.str());
    }
}
} // namespace detail

/// Dynamic power of a single active core of size r BCE.
inline double core_power(int r, const PowerLawParams& params) {
    params.validate();
    detail::check_core_size(r, params);
    return params.p_full *
           std::pow(static_cast<double>(r) / params.budget, params.alpha);
}

/// Power of an idle core of size r BCE.
inline double idle_power(int r, const PowerLawParams& params, const IdleModel& idle) {
    idle.validate();
    return idle.k_idle * core_power(r, params);
}

/// Total power of a symmetric chip: budget/r cores of size r, all active.
/// r must divide the budget evenly.
inline double chip_power_symmetric(int r, const PowerLawParams& params) {
    params.validate();
    detail::check_core_size(r, params);
    if (params.budget % r != 0) {
        std::ostringstream msg;
        msg << "core size r = " << r << " does not divide budget "
            << params.budget;
        throw std::domain_error(msg.str());
    }
    return static_cast<double>(params.budget / r) * core_power(r, params);
}

/// Total power of an asymmetric chip: one serial core of size r plus
/// (budget - r) unit cores, all active.
inline double chip_power_asymmetric(int r, const PowerLawParams& params) {
    params.validate();
    detail::check_core_size(r, params);
    return core_power(r, params) +
           static_cast<double>(params.budget - r) * core_power(1, params);
}

} // namespace hotstack
