#pragma once

#include <vector>

#include "specforge/errors.hpp"
#include "specforge/strength.hpp"

namespace specforge {

/// One interval cell of length d: free Laplacian, Neumann ends, and an
/// interaction of strength q at the midpoint. q = 0 is the plain Neumann
/// cell, q = inf the pair of decoupled Neumann halves.
struct CellSpec {
    double d = 1.0;
    Strength q = Strength::zero();
};

enum class BranchTag {
    Even, // symmetric about the midpoint; insensitive to q
    Odd,  // antisymmetric; moves with q
};

struct CellEigenvalues {
    std::vector<double> values; // nondecreasing
    std::vector<BranchTag> tags;
};

/// Residual whose positive zeros are the odd-branch eigenvalues:
///   r(lambda) = q*k*sin(k*d/2) - 2*cos(k*d/2),  k = sqrt(lambda),
/// continuous at lambda = 0 with value -2. Together with the even family
/// (2*n*pi/d)^2 the zeros enumerate the cell spectrum.
double secular_residual(double d, double q, double lambda);

/// First `count` eigenvalues of the cell, with branch tags.
CellEigenvalues cell_eigenvalues(const CellSpec& cell, int count);

/// n-th odd-branch eigenvalue (n = 0 is the lowest), for finite q > 0.
double odd_mode_eigenvalue(double d, double q, int n);

/// Strength q > 0 placing the second eigenvalue at s. Requires
/// 0 < s < (pi/d)^2; the closed-form candidate q = 2/(k*tan(k*d/2)) is
/// verified by recomputation and refined by monotone bisection if needed.
double tune_q(double d, double s, double rel_tol = 1e-12);

/// Certified bound max{d, 8/d} * |1/q_hat - 1/q| on the resolvent-difference
/// norm between strengths q and q_hat.
double resolvent_diff_bound(double d, double q, double q_hat);

} // namespace specforge
