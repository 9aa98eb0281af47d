#pragma once

#include <sstream>
#include <cmath>
#include <stdexcept>

namespace hotstack {

/// Workload description for the two-phase (serial + parallel) execution model.
/// t_base is the sequential execution time of the whole program on a single
/// 1-BCE core; all phase durations derive from it.
struct WorkloadSpec {
    double f = 1.0;      ///< parallel fraction in [0, 1]
    double t_base = 1.0; ///< 1-BCE sequential runtime, seconds

    void validate() const {
        if (f < 0.0 || f > 1.0)
            throw std::domain_error("WorkloadSpec: f must be in [0, 1]");
        if (!(t_base > 0.0))
            throw std::domain_error("WorkloadSpec: t_base must be > 0");
    }
};

/// Durations of the serial and parallel portions for one design point.
struct PhasePlan {
    double serial_duration = 0.0;
    double parallel_duration = 0.0;
    int n_cores_total = 1; ///< active cores in the parallel phase, all layers
    int r = 1;             ///< core size in BCE
};

constexpr double kDefaultPerfExponent = 0.5; // Pollack's rule

/// Single-core speed factor relative to a 1-BCE core: r^exponent.
inline double perf(int r, double exponent = kDefaultPerfExponent) {
    if (r < 1)
        throw std::domain_error("perf: core size must be >= 1");
    return std::pow(static_cast<double>(r), exponent);
}

inline PhasePlan phase_plan(const WorkloadSpec& workload, int r, int n_cores_total,
                            double exponent = kDefaultPerfExponent) {
    workload.validate();
    if (n_cores_total < 1) {
        std::ostringstream msg;
        msg << "phase_plan: n_cores_total = " << n_cores_total << " must be >= 1";
        throw std::domain_error(msg.str());
    }
    const double speed = perf(r, exponent);
    PhasePlan plan;
    plan.r = r;
    plan.n_cores_total = n_cores_total;
    plan.serial_duration = workload.t_base * (1.0 - workload.f) / speed;
    plan.parallel_duration = workload.t_base * workload.f / (n_cores_total * speed);
    return plan;
}

/// Amdahl-style speedup over the 1-BCE single-core baseline.
inline double speedup(const WorkloadSpec& workload, int r, int n_cores_total,
                      double exponent = kDefaultPerfExponent) {
    const PhasePlan plan = phase_plan(workload, r, n_cores_total, exponent);
    return workload.t_base / (plan.serial_duration + plan.parallel_duration);
}

} // namespace hotstack
