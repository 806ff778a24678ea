#pragma once

#include <vector>

#include "specforge/operator_assembly.hpp"
#include "specforge/truncated_spectrum.hpp"

namespace specforge {

struct VerifyEntry {
    int k = 0;
    double tuned_value = 0.0;     // second eigenvalue of cell k
    double nearest_lambda = 0.0;  // closest truncated-operator eigenvalue
    double distance = 0.0;
};

struct VerifyReport {
    bool pass = false;
    double threshold = 0.0;
    int skip_head = 0;
    std::size_t truncate = 0;
    double lambda_max = 0.0;
    bool decoupled = false;
    double max_distance = 0.0; // over k >= skip_head
    std::vector<VerifyEntry> entries;
    CoverageDistance coverage;
};

/// Compares the per-cell tuned values against the spectrum of the
/// truncation. Early cells carry the largest junction detuning, so the
/// pass criterion only scores k >= skip_head; cells whose tuned value
/// exceeds the cutoff are skipped (their eigenvalue is out of the window).
VerifyReport build_verify_report(const Schedule& schedule, const TargetSet& set,
                                 std::size_t truncate, double lambda_max, double threshold,
                                 int skip_head, bool decouple);

} // namespace specforge
