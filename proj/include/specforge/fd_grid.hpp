#pragma once

#include <cstddef>
#include <vector>

#include "specforge/operator_assembly.hpp"

namespace specforge {

/// Connected chain: free segments joined by finite jump strengths.
/// Infinite strengths never appear here; the schedule is split first.
struct PathProblem {
    std::vector<double> segments;        // lengths, left to right
    std::vector<double> jumps;           // size segments.size()-1, all > 0
    double total_length() const;
};

/// Split the first n_cells cells of a schedule at every infinite strength.
/// Zero midpoint strengths contribute an unbroken segment.
std::vector<PathProblem> split_truncation(const Schedule& schedule, std::size_t n_cells);

/// Symmetric tridiagonal pencil representative: C = B^{-1/2} K B^{-1/2}
/// for the 3-point stiffness K (ghost-point Neumann ends, jump penalties
/// coupling the duplicated interface nodes) and lumped mass B.
struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off; // size diag.size()-1
    std::size_t size() const { return diag.size(); }
};

struct FdMatrix {
    Tridiagonal matrix;
    double assembly_asymmetry = 0.0; // max |K_ij - K_ji| over the stamped pairs
};

/// Assemble with target grid step h (each segment gets at least one panel,
/// nodes landing exactly on the interaction points).
FdMatrix assemble_fd(const PathProblem& problem, double h);

/// Number of eigenvalues of C strictly below lambda (Sturm/LDL^T count).
std::size_t sturm_count(const Tridiagonal& tri, double lambda);

/// Eigenvalues of C below the cutoff, ascending, by Sturm bisection.
std::vector<double> sturm_eigenvalues_below(const Tridiagonal& tri, double cutoff);

struct FdEigenvalues {
    std::vector<double> values;       // Richardson-extrapolated over h, h/2
    std::vector<double> step_change;  // |value(h/2) - value(h)| per eigenvalue
    std::size_t count = 0;            // count at the cutoff on the fine grid
};

/// Grid eigenvalues below the cutoff with h, h/2 extrapolation.
FdEigenvalues fd_eigenvalues_below(const PathProblem& problem, double cutoff, double h);

} // namespace specforge
