#pragma once

#include <cstdint>
#include <vector>

#include "specforge/linalg.hpp"
#include "specforge/target_set.hpp"

namespace specforge {

/// Finite-dimensional extension model: a0 (n x n, symmetric, spread
/// spectrum standing in for a compact resolvent), the boundary parameter
/// xi (m x m, symmetric, acting on the first m coordinates), and an anchor
/// mu kept away from both spectra.
struct ExtensionModel {
    Matrix a0;
    Matrix xi;
    double mu = 0.0;

    std::size_t dim() const { return a0.rows(); }
    std::size_t boundary_dim() const { return xi.rows(); }
};

/// Validates symmetry (1e-13 relative) and mu-separation (1e-8).
ExtensionModel make_extension_model(Matrix a0, Matrix xi, double mu);

struct ExtensionResult {
    Matrix a;       // the extension
    Matrix r_mu;    // its resolvent at mu
    double symmetry_defect = 0.0;
    double weyl_defect = 0.0;     // resolvent-difference identity residual
    double boundary_defect = 0.0; // domain-condition residual (10 probe vectors)
};

/// R_mu = (a0 - mu)^-1 + blockdiag((xi - mu)^-1, 0), A = R_mu^-1 + mu.
/// Throws SingularRmu when R_mu is numerically singular (smallest singular
/// value below 1e-12 of the largest).
ExtensionResult build_extension(const ExtensionModel& model);

/// Residual of (A - mu)^-1 - blockdiag((xi - mu)^-1, 0) - (a0 - mu)^-1,
/// recomputing the resolvent of A from scratch.
double weyl_identity_check(const ExtensionModel& model, const ExtensionResult& result);

/// For random h: f0 = (a0-mu)^-1 h, f_mu = (xi-mu)^-1 P h; checks
/// (xi-mu) f_mu = P (a0-mu) f0 (both sides P h) and f0 + f_mu = R_mu h.
/// Returns the worst relative defect over the trials.
double boundary_condition_check(const ExtensionModel& model, const ExtensionResult& result,
                                int trials, std::uint64_t seed);

struct ClusterRow {
    std::size_t n = 0;
    std::size_t m = 0;
    double cluster_to_eigs = 0.0; // max over clusters of distance to nearest windowed eigenvalue
    double eigs_to_cluster = 0.0;
    double weyl_defect = 0.0;
};

/// Eigenvalues of xi accumulate at the clusters (c + 1/j); a0 = diag(3 i).
/// Reports how the windowed spectrum of A tracks the clusters as n grows.
/// Finite matrices have no essential spectrum; this is the desk-scale
/// shadow of the resolvent-difference argument, nothing more.
std::vector<ClusterRow> clustering_experiment(const std::vector<double>& clusters,
                                              const std::vector<std::pair<std::size_t, std::size_t>>& sizes,
                                              double mu, std::uint64_t seed);

} // namespace specforge
