#pragma once

// Test-only reference path: assembles the conductance system densely from
// the network's edge list and solves it by Cholesky factorization. Kept
// independent of the production CSR + conjugate-gradient route on purpose.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hotstack/thermal.hpp"

namespace hotstack_test {

inline std::vector<double> dense_solve(const hotstack::ThermalNetwork& net,
                                       const std::vector<double>& p) {
    const int n = net.n_nodes;
    std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        a[static_cast<size_t>(i) * n + i] = net.ground_g[i];
    for (const auto& e : net.edges) {
        a[static_cast<size_t>(e.a) * n + e.a] += e.g;
        a[static_cast<size_t>(e.b) * n + e.b] += e.g;
        a[static_cast<size_t>(e.a) * n + e.b] -= e.g;
        a[static_cast<size_t>(e.b) * n + e.a] -= e.g;
    }
    for (int j = 0; j < n; ++j) {
        double d = a[static_cast<size_t>(j) * n + j];
        for (int k = 0; k < j; ++k)
            d -= a[static_cast<size_t>(j) * n + k] * a[static_cast<size_t>(j) * n + k];
        if (!(d > 0.0))
            throw std::runtime_error("dense oracle: matrix is not positive definite");
        d = std::sqrt(d);
        a[static_cast<size_t>(j) * n + j] = d;
        for (int i = j + 1; i < n; ++i) {
            double s = a[static_cast<size_t>(i) * n + j];
            for (int k = 0; k < j; ++k)
                s -= a[static_cast<size_t>(i) * n + k] * a[static_cast<size_t>(j) * n + k];
            a[static_cast<size_t>(i) * n + j] = s / d;
        }
    }
    std::vector<double> x(p);
    for (int i = 0; i < n; ++i) {
        double s = x[i];
        for (int k = 0; k < i; ++k)
            s -= a[static_cast<size_t>(i) * n + k] * x[k];
        x[i] = s / a[static_cast<size_t>(i) * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (int k = i + 1; k < n; ++k)
            s -= a[static_cast<size_t>(k) * n + i] * x[k];
        x[i] = s / a[static_cast<size_t>(i) * n + i];
    }
    return x;
}

} // namespace hotstack_test
