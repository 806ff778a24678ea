#pragma once

#include <vector>

namespace specforge {

/// Rooms-and-passages data: room sides d_k, passage lengths dhat_k,
/// passage thicknesses beta_k, the constants tying them together, and the
/// room positions x_k = sum_{j<=k} (d_j + dhat_j) - dhat_k.
struct RPSequences {
    int K = 0;
    std::vector<double> d;
    std::vector<double> dhat;
    std::vector<double> beta;
    double c1 = 0.0;
    double c2 = 0.0;
    double alpha = 0.0;
    std::vector<double> x;
};

/// Admissible ceiling for c2: (1/c1) * max_dhat^(1-alpha).
double c2_bound(double c1, double max_dhat, double alpha);

/// d_k = (2k-1)^-2, dhat_k = (2k)^-2, c1 = 9/4, alpha = 3,
/// c2 = c2_bound(...). beta_k = c2 * dhat_k^(alpha+1): one power under the
/// recorded alpha ceiling, which keeps the gradient terms decaying (the
/// alpha-saturating choice would freeze them at a constant).
RPSequences default_sequences(int K);

/// Throws InvalidProblem if any of the sequence constraints fail.
void check_rp_invariants(const RPSequences& seq);

struct TestFunctionNorms {
    int k = 0;
    double l2_sq = 0.0;   // 1 + (beta_{k-1} dhat_{k-1} + beta_k dhat_k) / (3 d_k^2)
    double grad_sq = 0.0; // (beta_{k-1}/dhat_{k-1} + beta_k/dhat_k) / d_k^2
    double ratio = 0.0;   // l2 / (l2 + grad)
};

/// Closed-form norms of the k-th plateau-and-ramps test function,
/// 2 <= k <= K-1. Throws IndexOutOfRange.
TestFunctionNorms test_function_norms(const RPSequences& seq, int k);

/// ratio_k for k = 2 .. K-1; limsup lower-bounds the boundary-layer
/// concentration constant, so ratios drifting to 1 certify a non-compact
/// embedding.
std::vector<TestFunctionNorms> gamma_lower_bound_scan(const RPSequences& seq);

} // namespace specforge
