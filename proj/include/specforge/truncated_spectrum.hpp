#pragma once

#include <cstddef>
#include <vector>

#include "specforge/fd_grid.hpp"
#include "specforge/operator_assembly.hpp"

namespace specforge {

/// First n_cells cells of a schedule, Neumann at both outer ends.
struct TruncatedOperator {
    Schedule schedule;
    std::size_t n_cells = 0;
};

/// 2x2 propagation matrix acting on the state (u, u').
struct Mat2 {
    double a11 = 1.0, a12 = 0.0;
    double a21 = 0.0, a22 = 1.0;

    double det() const { return a11 * a22 - a12 * a21; }
};

/// Free propagation over length t at energy lambda:
/// [[cos kt, sin(kt)/k], [-k sin kt, cos kt]], k = sqrt(lambda),
/// with the smooth lambda -> 0 limit [[1, t], [0, 1]].
Mat2 transfer_state(double lambda, double t);

/// Interaction of strength beta: u' continuous, u jumps by beta * u'.
Mat2 jump_matrix(double beta);

/// Right-end Neumann defect of the state propagated from (1, 0): u'(x_N).
/// Zeros on [0, cutoff] are exactly the eigenvalues. Infinite strengths
/// split the operator; the returned value is then the product over the
/// independent pieces. Positive rescaling guards against overflow; the
/// accumulated ln(scale) is added to *log_scale when given, so the true
/// magnitude is value * exp(log_scale).
double shooting_function(const TruncatedOperator& op, double lambda, double* log_scale = nullptr);

/// Shooting function of one connected piece.
double shooting_function(const PathProblem& piece, double lambda, double* log_scale = nullptr);

enum class SpectrumMethod { Shooting, FdOracle };

struct EigenvalueRecord {
    double lambda = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    SpectrumMethod method = SpectrumMethod::Shooting;
};

struct Spectrum {
    std::vector<EigenvalueRecord> eigenvalues; // ascending
    std::size_t count = 0;                     // counting function at the cutoff

    std::vector<double> values() const;
};

/// Eigenvalues below the cutoff: grid Sturm counts isolate brackets, sign
/// changes of the shooting function pin the roots to 1e-11 * max(1, lambda).
/// Throws CountMismatch if brackets and shooting zeros cannot be reconciled
/// after one grid refinement.
Spectrum eigenvalues_below(const TruncatedOperator& op, double cutoff);

/// Grid Sturm-bisection eigenvalues with h, h/2 Richardson extrapolation
/// (the independent cross-check route).
Spectrum fd_oracle_spectrum(const TruncatedOperator& op, double cutoff);

struct PerturbationRow {
    std::size_t index = 0;
    double lambda_coupled = 0.0;
    double lambda_decoupled = 0.0;
    double shift = 0.0;
};

struct PerturbationScan {
    std::vector<PerturbationRow> rows;
    std::size_t coupled_count = 0;
    std::size_t decoupled_count = 0;
    double kappa_next = 0.0;     // kappa_{N+1}
    double tail_constant = 0.0;  // 4 kappa (b-a)^2 + 8 kappa over the truncated length
};

/// Per-eigenvalue shift between the coupled truncation and its decoupled
/// (all junctions infinite) counterpart, with the certified tail constant.
PerturbationScan coupling_perturbation_scan(const Schedule& schedule, std::size_t n_cells,
                                            double cutoff);

} // namespace specforge
