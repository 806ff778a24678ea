#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "specforge/fd_grid.hpp"
#include "specforge/operator_assembly.hpp"
#include "specforge/rooms_passages.hpp"

namespace testutil {

constexpr double kPi = 3.14159265358979323846;

/// Single-cell grid oracle: independent of the secular-equation route.
inline std::vector<double> fd_cell_eigenvalues(double d, specforge::Strength q, double cutoff,
                                               double h) {
    specforge::Schedule schedule;
    schedule.a = 0.0;
    schedule.b = d;
    schedule.cells.push_back({0.0, 0.5 * d, d, d, q});
    std::vector<specforge::PathProblem> pieces = specforge::split_truncation(schedule, 1);
    std::vector<double> all;
    for (const auto& piece : pieces) {
        specforge::FdEigenvalues fd = specforge::fd_eigenvalues_below(piece, cutoff, h);
        all.insert(all.end(), fd.values.begin(), fd.values.end());
    }
    std::sort(all.begin(), all.end());
    return all;
}

/// Solve (T + I) x = b for symmetric tridiagonal T (Thomas algorithm).
inline std::vector<double> shifted_tridiag_solve(const specforge::Tridiagonal& t,
                                                 std::vector<double> b) {
    const std::size_t n = t.size();
    std::vector<double> diag(n), upper(n - 1);
    for (std::size_t i = 0; i < n; ++i) diag[i] = t.diag[i] + 1.0;
    upper = t.off;
    std::vector<double> c(n - 1);
    // forward elimination
    c[0] = upper[0] / diag[0];
    b[0] /= diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        double m = diag[i] - t.off[i - 1] * c[i - 1];
        if (i < n - 1) c[i] = upper[i] / m;
        b[i] = (b[i] - t.off[i - 1] * b[i - 1]) / m;
    }
    for (std::size_t i = n - 1; i-- > 0;) b[i] -= c[i] * b[i + 1];
    return b;
}

/// Spectral norm of (T1 + I)^-1 - (T2 + I)^-1 by power iteration.
inline double resolvent_difference_norm(const specforge::Tridiagonal& t1,
                                        const specforge::Tridiagonal& t2, int iterations = 300) {
    const std::size_t n = t1.size();
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> gauss;
    std::vector<double> v(n);
    for (double& x : v) x = gauss(rng);
    double norm = 0.0;
    for (int it = 0; it < iterations; ++it) {
        double sum = 0.0;
        for (double x : v) sum += x * x;
        sum = std::sqrt(sum);
        for (double& x : v) x /= sum;
        std::vector<double> a = shifted_tridiag_solve(t1, v);
        std::vector<double> b = shifted_tridiag_solve(t2, v);
        for (std::size_t i = 0; i < n; ++i) v[i] = a[i] - b[i];
        norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
    }
    return norm;
}

/// 2D midpoint quadrature oracle for the rooms-and-passages test-function
/// norms, refined until self-consistent to 1e-9.
struct QuadratureNorms {
    double l2_sq = 0.0;
    double grad_sq = 0.0;
};

inline double rp_midpoint_2d(double x_lo, double x_hi, double width, int nx,
                             const std::function<double(double)>& f) {
    const int ny = 4; // integrand constant in y
    double hx = (x_hi - x_lo) / nx;
    double hy = width / ny;
    double sum = 0.0;
    for (int i = 0; i < nx; ++i) {
        double fx = f(x_lo + (i + 0.5) * hx);
        for (int j = 0; j < ny; ++j) sum += fx;
    }
    return sum * hx * hy;
}

inline double rp_refine(double x_lo, double x_hi, double width,
                        const std::function<double(double)>& f) {
    int nx = 64;
    double prev = rp_midpoint_2d(x_lo, x_hi, width, nx, f);
    for (int round = 0; round < 16; ++round) {
        nx *= 2;
        double next = rp_midpoint_2d(x_lo, x_hi, width, nx, f);
        if (std::abs(next - prev) <= 1e-9 * std::max(1.0, std::abs(next))) return next;
        prev = next;
    }
    return prev;
}

inline QuadratureNorms rp_quadrature_norms(const specforge::RPSequences& seq, int k) {
    double d = seq.d[k - 1];
    double dh_prev = seq.dhat[k - 2];
    double dh = seq.dhat[k - 1];
    double b_prev = seq.beta[k - 2];
    double b = seq.beta[k - 1];
    double xk = seq.x[k - 1];
    double xk_prev = seq.x[k - 2];

    auto up = [&](double x) { return (x - xk_prev) / (d * dh_prev); };
    auto down = [&](double x) { return (xk + dh - x) / (d * dh); };

    QuadratureNorms q;
    q.l2_sq += rp_refine(xk_prev, xk_prev + dh_prev, b_prev,
                         [&](double x) { return up(x) * up(x); });
    q.l2_sq += rp_refine(xk - d, xk, d, [&](double) { return 1.0 / (d * d); });
    q.l2_sq += rp_refine(xk, xk + dh, b, [&](double x) { return down(x) * down(x); });

    double slope_up = 1.0 / (d * dh_prev);
    double slope_down = 1.0 / (d * dh);
    q.grad_sq += rp_refine(xk_prev, xk_prev + dh_prev, b_prev,
                           [&](double) { return slope_up * slope_up; });
    q.grad_sq += rp_refine(xk, xk + dh, b, [&](double) { return slope_down * slope_down; });
    return q;
}

} // namespace testutil
