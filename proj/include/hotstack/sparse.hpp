#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace hotstack {

/// Compressed sparse row matrix, square, symmetric by construction here.
struct CsrMatrix {
    int n = 0;
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<double> val;

    void multiply(std::span<const double> x, std::span<double> y) const {
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
                acc += val[k] * x[col[k]];
            y[i] = acc;
        }
    }
};

struct CgResult {
    int iterations = 0;
    double residual_norm = 0.0;
    bool converged = false;
};

namespace detail {
inline double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        acc += a[i] * b[i];
    return acc;
}
} // namespace detail

/// Jacobi-preconditioned conjugate gradient for symmetric positive definite
/// systems. `x` holds the initial guess on entry and the solution on exit.
/// Converges when ||b - Ax||_2 <= rel_tol * ||b||_2.
inline CgResult cg_solve(const CsrMatrix& A, std::span<const double> b,
                         std::vector<double>& x, std::span<const double> inv_diag,
                         double rel_tol = 1e-11, int max_iter = 50000) {
    const int n = A.n;
    if (static_cast<int>(b.size()) != n || static_cast<int>(inv_diag.size()) != n)
        throw std::invalid_argument("cg_solve: dimension mismatch");
    x.resize(n, 0.0);

    const double b_norm = std::sqrt(detail::dot(b, b));
    if (b_norm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        return {0, 0.0, true};
    }
    const double target = rel_tol * b_norm;

    std::vector<double> r(n), z(n), p(n), q(n);
    A.multiply(x, r);
    for (int i = 0; i < n; ++i)
        r[i] = b[i] - r[i];
    double r_norm = std::sqrt(detail::dot(r, r));
    if (r_norm <= target)
        return {0, r_norm, true};

    for (int i = 0; i < n; ++i)
        z[i] = inv_diag[i] * r[i];
    p = z;
    double rho = detail::dot(r, z);

    CgResult result;
    for (int it = 1; it <= max_iter; ++it) {
        A.multiply(p, q);
        const double alpha = rho / detail::dot(p, q);
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        r_norm = std::sqrt(detail::dot(r, r));
        result.iterations = it;
        if (r_norm <= target) {
            result.converged = true;
            break;
        }
        for (int i = 0; i < n; ++i)
            z[i] = inv_diag[i] * r[i];
        const double rho_next = detail::dot(r, z);
        const double beta = rho_next / rho;
        rho = rho_next;
        for (int i = 0; i < n; ++i)
            p[i] = z[i] + beta * p[i];
    }
    result.residual_norm = r_norm;
    return result;
}

} // namespace hotstack
