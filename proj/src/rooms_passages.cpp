#include "specforge/rooms_passages.hpp"

#include <algorithm>
#include <cmath>

#include "specforge/errors.hpp"

namespace specforge {

double c2_bound(double c1, double max_dhat, double alpha) {
    return (1.0 / c1) * std::pow(max_dhat, 1.0 - alpha);
}

RPSequences default_sequences(int K) {
    if (K < 2) throw Error(ErrorCode::InvalidProblem, "need at least two rooms");
    RPSequences seq;
    seq.K = K;
    seq.c1 = 9.0 / 4.0;
    seq.alpha = 3.0;
    seq.d.resize(K);
    seq.dhat.resize(K);
    seq.beta.resize(K);
    seq.x.resize(K);
    for (int k = 1; k <= K; ++k) {
        seq.d[k - 1] = 1.0 / ((2.0 * k - 1.0) * (2.0 * k - 1.0));
        seq.dhat[k - 1] = 1.0 / ((2.0 * k) * (2.0 * k));
    }
    double max_dhat = *std::max_element(seq.dhat.begin(), seq.dhat.end());
    seq.c2 = c2_bound(seq.c1, max_dhat, seq.alpha);
    for (int k = 0; k < K; ++k)
        seq.beta[k] = seq.c2 * std::pow(seq.dhat[k], seq.alpha + 1.0);
    double sum = 0.0;
    for (int k = 0; k < K; ++k) {
        sum += seq.d[k] + seq.dhat[k];
        seq.x[k] = sum - seq.dhat[k];
    }
    check_rp_invariants(seq);
    return seq;
}

void check_rp_invariants(const RPSequences& seq) {
    const int K = seq.K;
    if (K < 2 || static_cast<int>(seq.d.size()) != K || static_cast<int>(seq.dhat.size()) != K ||
        static_cast<int>(seq.beta.size()) != K || static_cast<int>(seq.x.size()) != K)
        throw Error(ErrorCode::InvalidProblem, "sequence lengths disagree");
    for (int k = 0; k < K; ++k)
        if (!(seq.d[k] > 0.0) || !(seq.dhat[k] > 0.0) || !(seq.beta[k] >= 0.0))
            throw Error(ErrorCode::InvalidProblem, "sequences must be positive");

    double max_dhat = *std::max_element(seq.dhat.begin(), seq.dhat.end());
    if (seq.c2 > c2_bound(seq.c1, max_dhat, seq.alpha) * (1.0 + 1e-14))
        throw Error(ErrorCode::InvalidProblem, "c2 exceeds its admissible ceiling");

    for (int k = 0; k + 1 < K; ++k) {
        double dmin = std::min(seq.d[k], seq.d[k + 1]);
        if (seq.dhat[k] > seq.c1 * dmin * (1.0 + 1e-14))
            throw Error(ErrorCode::InvalidProblem, "passage length exceeds c1 * min(room sides)");
        if (seq.beta[k] > dmin * (1.0 + 1e-14))
            throw Error(ErrorCode::InvalidProblem, "passage thicker than the adjacent rooms");
    }
    for (int k = 0; k < K; ++k)
        if (seq.beta[k] > seq.c2 * std::pow(seq.dhat[k], seq.alpha) * (1.0 + 1e-14))
            throw Error(ErrorCode::InvalidProblem, "passage thickness exceeds c2 * dhat^alpha");

    double sum = 0.0;
    for (int k = 0; k < K; ++k) {
        sum += seq.d[k] + seq.dhat[k];
        if (std::abs(seq.x[k] - (sum - seq.dhat[k])) > 1e-14 * std::max(1.0, sum))
            throw Error(ErrorCode::InvalidProblem, "room positions are inconsistent");
    }
}

TestFunctionNorms test_function_norms(const RPSequences& seq, int k) {
    if (k < 2 || k > seq.K - 1)
        throw Error(ErrorCode::IndexOutOfRange, "norms are defined for 2 <= k <= K-1");
    const double d = seq.d[k - 1];
    const double dh_prev = seq.dhat[k - 2];
    const double dh = seq.dhat[k - 1];
    const double b_prev = seq.beta[k - 2];
    const double b = seq.beta[k - 1];

    TestFunctionNorms norms;
    norms.k = k;
    norms.l2_sq = 1.0 + (b_prev * dh_prev + b * dh) / (3.0 * d * d);
    norms.grad_sq = (b_prev / dh_prev + b / dh) / (d * d);
    norms.ratio = norms.l2_sq / (norms.l2_sq + norms.grad_sq);
    return norms;
}

std::vector<TestFunctionNorms> gamma_lower_bound_scan(const RPSequences& seq) {
    if (seq.K < 4) throw Error(ErrorCode::InvalidProblem, "scan needs K >= 4");
    std::vector<TestFunctionNorms> rows;
    rows.reserve(seq.K - 2);
    for (int k = 2; k <= seq.K - 1; ++k) rows.push_back(test_function_norms(seq, k));
    return rows;
}

} // namespace specforge
