#pragma once

#include <functional>
#include <vector>

#include "specforge/operator_assembly.hpp"

namespace specforge {

/// Componentwise-monotone box problem: f maps the box prod [lo_k, hi_k]
/// into R^m, each component nondecreasing in each coordinate after the
/// sign-driven reflection, and the target lies inside the corner box
/// prod [F_k^-, F_k^+] with
///   F_k^- = f_k(hi_1, .., hi_{k-1}, lo_k, hi_{k+1}, .., hi_m),
///   F_k^+ = f_k(lo_1, .., lo_{k-1}, hi_k, lo_{k+1}, .., lo_m).
struct MonotoneBoxProblem {
    std::size_t dim = 0;
    std::vector<double> lo, hi;
    std::function<std::vector<double>(const std::vector<double>&)> map; // reflected, nondecreasing
    std::vector<double> target;
    std::vector<double> corner_lo, corner_hi; // F^-, F^+
    std::vector<int> coordinate_sign;         // applied reflection per coordinate

    /// Undo the internal reflection on a solution point.
    std::vector<double> to_original(const std::vector<double>& x) const;
};

/// Validates and normalizes. `signs` is per-(component, coordinate) in
/// {-1, 0, +1}; each coordinate column must carry a single sign (0 = no
/// dependence), which is resolved by reflecting that coordinate. Throws
/// InvalidProblem when the sign pattern is inconsistent, a corner pair is
/// not strictly ordered, or the target leaves the corner box.
MonotoneBoxProblem make_monotone_box_problem(
    std::vector<double> lo, std::vector<double> hi,
    std::function<std::vector<double>(const std::vector<double>&)> evaluator,
    std::vector<std::vector<int>> signs, std::vector<double> target);

struct SolveResult {
    std::vector<double> x;        // in reflected coordinates
    std::vector<double> values;   // f(x)
    double residual = 0.0;        // ||f(x) - target||_inf
    int sweeps = 0;
    std::vector<double> sweep_residuals;
};

/// Cyclic coordinate bisection (Gauss-Seidel): existence is guaranteed by
/// the corner hypothesis, convergence of this iteration is not; a stalled
/// run restarts once from the box center and then fails honestly with
/// NonConvergence (best point in the exception message).
SolveResult solve_box(const MonotoneBoxProblem& problem, double tol, int max_sweeps,
                      std::vector<std::size_t> sweep_order = {});

/// Chain tuning problem: pin eigenvalues m+1 .. 2m of an m-cell coupled
/// chain to the given targets by varying the midpoint strengths.
struct ChainTuneSpec {
    std::vector<double> targets;   // strictly increasing, positive
    double window_lo = 0.0;        // open interval holding all targets
    double window_hi = 0.0;        // must stay below min_k (2 pi / d_k)^2
    double coupling = 0.0;         // fixed junction strength p
    std::vector<double> lengths;   // per-cell d_k
};

struct ChainTuneReport {
    std::vector<double> achieved;  // eigenvalues m+1 .. 2m
    std::vector<double> strengths; // tuned q_k
    double residual = 0.0;
    int sweeps = 0;
};

/// Throws CouplingTooStrong when the strict corner inequalities fail, and
/// propagates NonConvergence from solve_box.
std::pair<Schedule, ChainTuneReport> tune_chain(const ChainTuneSpec& spec, double tol);

} // namespace specforge
