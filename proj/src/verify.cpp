#include "specforge/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>



namespace specforge {

VerifyReport build_verify_report(const Schedule& schedule, const TargetSet& set,
                                 std::size_t truncate, double lambda_max, double threshold,
                                 int skip_head, bool decouple) {
    if (truncate == 0 || truncate > schedule.cells.size())
        throw Error(ErrorCode::InvalidProblem, "truncation size out of range");

    TruncatedOperator op{decouple ? decoupled(schedule) : schedule, truncate};
    Spectrum spectrum = eigenvalues_below(op, lambda_max);
    std::vector<double> lambdas = spectrum.values();

    VerifyReport report;
    report.threshold = threshold;
    report.skip_head = skip_head;
    report.truncate = truncate;
    report.lambda_max = lambda_max;
    report.decoupled = decouple;

    auto nearest = [&](double x) {
        double best = std::numeric_limits<double>::infinity();
        double at = 0.0;
        for (double v : lambdas) {
            double d = std::abs(v - x);
            if (d < best) {
                best = d;
                at = v;
            }
        }
        return std::pair<double, double>(at, best);
    };

    // The scored values are re-sampled from the target set, not read off the
    // schedule: verification asks whether the operator realizes the set it
    // was requested to realize.
    SamplingSequence samples = sample_sequence(set, static_cast<int>(truncate));
    for (std::size_t k = 0; k < truncate; ++k) {
        double requested = samples.values[k];
        if (requested > lambda_max) continue;
        auto [at, dist] = nearest(requested);
        VerifyEntry entry;
        entry.k = static_cast<int>(k) + 1;
        entry.tuned_value = requested;
        entry.nearest_lambda = at;
        entry.distance = dist;
        report.entries.push_back(entry);
        if (entry.k >= skip_head) report.max_distance = std::max(report.max_distance, dist);
    }

    report.coverage = accumulation_distance(set, lambdas, lambda_max);
    report.pass = report.max_distance <= threshold;
    return report;
}

} // namespace specforge
