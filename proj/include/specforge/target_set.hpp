#pragma once

#include <vector>

#include "specforge/errors.hpp"

namespace specforge {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Closed target set: the origin, finitely many isolated points, and
/// finitely many disjoint closed intervals inside [0, lambda_max].
struct TargetSet {
    bool includes_zero = true;
    std::vector<double> points;      // sorted, strictly positive, outside all intervals
    std::vector<Interval> intervals; // sorted, disjoint, positive length
    double lambda_max = 0.0;

    /// False exactly when an interval reaches down to 0.
    bool zero_isolated() const;

    /// Distance from x >= 0 to the set.
    double distance_to(double x) const;

    bool is_zero_only() const { return points.empty() && intervals.empty(); }
};

struct SamplingSequence {
    std::vector<double> values;
    bool diverges = false;
};

/// Canonicalize a raw description: sort, merge overlapping intervals,
/// collapse zero-length intervals to points, deduplicate points, drop
/// points covered by intervals. Throws ZeroNotIncluded / MalformedSet.
TargetSet make_target_set(bool includes_zero, std::vector<double> points,
                          std::vector<Interval> intervals, double lambda_max);

/// Positive samples whose accumulation set reproduces the positive part of
/// the set as count grows: isolated points repeat, intervals are swept by
/// dyadic midpoint refinement, and a tail into 0 is emitted when 0 is not
/// isolated. For the bare-origin set the sequence is 1, 2, 3, ...
/// (divergent, empty accumulation set). eps_cover != 0 perturbs samples
/// within that radius (test knob).
SamplingSequence sample_sequence(const TargetSet& set, int count, double eps_cover = 0.0);

struct CoverageDistance {
    double set_to_values = 0.0; // sup over the set (below cutoff) of distance to nearest value
    double values_to_set = 0.0; // max over values (below cutoff) of distance to the set
};

/// One-sided Hausdorff pair between the set and a value list, both
/// restricted to [0, cutoff]. Throws EmptyInput when no value qualifies.
CoverageDistance accumulation_distance(const TargetSet& set, const std::vector<double>& values,
                                       double cutoff);

/// Same metric on two plain point lists (used for cluster tables).
CoverageDistance coverage_distance(const std::vector<double>& targets,
                                   const std::vector<double>& values);

} // namespace specforge
