#include "specforge/cell_spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "specforge/errors.hpp"

namespace specforge {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Residual in the half-angle theta = k*d/2: g(theta) = q*(2*theta/d)*sin(theta) - 2*cos(theta).
// The n-th odd mode is the unique zero with theta in (n*pi, n*pi + pi/2).
double residual_theta(double d, double q, double theta) {
    double k = 2.0 * theta / d;
    return q * k * std::sin(theta) - 2.0 * std::cos(theta);
}

double odd_mode_theta(double d, double q, int n) {
    double lo = n * kPi;
    double hi = n * kPi + kPi / 2.0;
    double flo = residual_theta(d, q, lo); // = -2*cos(n*pi) = -+2, never 0
    double fhi = residual_theta(d, q, hi);
    if (!(flo * fhi < 0.0))
        throw Error(ErrorCode::BracketFailure, "secular bracket lost its sign change");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        double fm = residual_theta(d, q, mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
        if (hi - lo <= 1e-15 * hi) break; // relative: the root can sit at any scale
    }
    return 0.5 * (lo + hi);
}

} // namespace

double secular_residual(double d, double q, double lambda) {
    double k = std::sqrt(lambda);
    double half = 0.5 * k * d;
    if (half < 1e-4) {
        // sin(half) ~ half*(1 - half^2/6) keeps the q*k*sin factor smooth
        // through lambda = 0 without cancellation.
        double h2 = half * half;
        return q * k * half * (1.0 - h2 / 6.0 + h2 * h2 / 120.0) - 2.0 * std::cos(half);
    }
    return q * k * std::sin(half) - 2.0 * std::cos(half);
}

double odd_mode_eigenvalue(double d, double q, int n) {
    double theta = odd_mode_theta(d, q, n);
    double k = 2.0 * theta / d;
    return k * k;
}

CellEigenvalues cell_eigenvalues(const CellSpec& cell, int count) {
    if (count < 1) throw Error(ErrorCode::InvalidProblem, "eigenvalue count must be >= 1");
    const double d = cell.d;
    if (!(d > 0.0)) throw Error(ErrorCode::InvalidProblem, "cell length must be positive");

    CellEigenvalues out;
    out.values.reserve(count);
    out.tags.reserve(count);

    auto even_mode = [&](int n) { return (2.0 * n * kPi / d) * (2.0 * n * kPi / d); };

    if (cell.q.is_zero()) {
        // Neumann cell: ((j-1)*pi/d)^2; alternating symmetric/antisymmetric.
        for (int j = 0; j < count; ++j) {
            double k = j * kPi / d;
            out.values.push_back(k * k);
            out.tags.push_back(j % 2 == 0 ? BranchTag::Even : BranchTag::Odd);
        }
        return out;
    }
    if (cell.q.is_infinite()) {
        // Two decoupled Neumann halves of length d/2: everything doubled.
        for (int n = 0; out.values.size() < static_cast<std::size_t>(count); ++n) {
            double v = even_mode(n);
            out.values.push_back(v);
            out.tags.push_back(BranchTag::Even);
            if (out.values.size() < static_cast<std::size_t>(count)) {
                out.values.push_back(v);
                out.tags.push_back(BranchTag::Odd);
            }
        }
        return out;
    }

    const double q = cell.q.value();
    // Interleaving is exact: even_n < odd_n < even_{n+1}.
    for (int n = 0; out.values.size() < static_cast<std::size_t>(count); ++n) {
        out.values.push_back(even_mode(n));
        out.tags.push_back(BranchTag::Even);
        if (out.values.size() < static_cast<std::size_t>(count)) {
            out.values.push_back(odd_mode_eigenvalue(d, q, n));
            out.tags.push_back(BranchTag::Odd);
        }
    }
    return out;
}

double tune_q(double d, double s, double rel_tol) {
    if (!(d > 0.0)) throw Error(ErrorCode::InvalidProblem, "cell length must be positive");
    const double neumann_top = (kPi / d) * (kPi / d);
    if (!(s > 0.0) || !(s < neumann_top))
        throw Error(ErrorCode::TargetOutOfRange,
                    "second-eigenvalue target must lie strictly inside (0, (pi/d)^2)");

    const double k = std::sqrt(s);
    const double theta = 0.5 * k * d; // in (0, pi/2)
    double q = 2.0 * std::cos(theta) / (k * std::sin(theta));

    auto lambda2 = [&](double qq) { return odd_mode_eigenvalue(d, qq, 0); };
    if (std::abs(lambda2(q) - s) <= rel_tol * s) return q;

    // The closed form is already the exact root of the secular equation;
    // fall back to monotone bisection only if floating evaluation drifted.
    double lo = q, hi = q;
    while (lambda2(lo) < s) lo *= 0.5;  // smaller q -> larger lambda2
    while (lambda2(hi) > s) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double v = lambda2(mid);
        if (std::abs(v - s) <= rel_tol * s) return mid;
        if (v > s)
            lo = mid;
        else
            hi = mid;
    }
    throw Error(ErrorCode::BracketFailure, "strength bisection failed to converge");
}

double resolvent_diff_bound(double d, double q, double q_hat) {
    if (!(d > 0.0) || !(q > 0.0) || !(q_hat > 0.0))
        throw Error(ErrorCode::InvalidProblem, "resolvent bound needs d > 0 and finite strengths");
    double c = std::max(d, 8.0 / d);
    return c * std::abs(1.0 / q_hat - 1.0 / q);
}

} // namespace specforge
