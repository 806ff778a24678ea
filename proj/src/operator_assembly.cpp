#include "specforge/operator_assembly.hpp"

#include <algorithm>
#include <cmath>

#include "specforge/util.hpp"

namespace specforge {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::vector<double> Schedule::rho() const {
    std::vector<double> out;
    out.reserve(couplings.size());
    for (std::size_t k = 0; k < couplings.size(); ++k) {
        if (!couplings[k].p.is_finite()) {
            out.push_back(0.0);
            continue;
        }
        double p = couplings[k].p.value();
        double dk = cells[k].d;
        double dk1 = cells[k + 1].d;
        out.push_back(std::max(1.0 / (p * dk), 1.0 / (p * dk1)));
    }
    return out;
}

double Schedule::kappa(std::size_t n) const {
    std::vector<double> r = rho();
    if (r.empty()) return 0.0;
    if (n < 1) n = 1;
    if (n > r.size()) return r.back();
    double sup = 0.0;
    for (std::size_t k = n - 1; k < r.size(); ++k) sup = std::max(sup, r[k]);
    return sup;
}

void check_schedule(const Schedule& schedule) {
    if (schedule.cells.empty())
        throw Error(ErrorCode::InvalidProblem, "schedule has no cells");
    if (schedule.couplings.size() + 1 != schedule.cells.size())
        throw Error(ErrorCode::InvalidProblem, "schedule needs one junction between consecutive cells");
    double x = schedule.a;
    const double tol = 1e-14 * std::max(1.0, std::abs(schedule.b));
    for (std::size_t k = 0; k < schedule.cells.size(); ++k) {
        const ScheduleCell& c = schedule.cells[k];
        if (!(c.d > 0.0)) throw Error(ErrorCode::InvalidProblem, "cell length must be positive");
        if (std::abs(c.x_left - x) > tol || std::abs(c.x_right - (x + c.d)) > tol ||
            std::abs(c.y - (x + 0.5 * c.d)) > tol)
            throw Error(ErrorCode::InvalidProblem, "cell positions are inconsistent");
        if (k < schedule.couplings.size() &&
            std::abs(schedule.couplings[k].x - c.x_right) > tol)
            throw Error(ErrorCode::InvalidProblem, "junction position is inconsistent");
        x += c.d;
    }
    if (std::abs(x - schedule.b) > tol)
        throw Error(ErrorCode::InvalidProblem, "total length disagrees with b");
}

std::vector<double> choose_lengths(const SamplingSequence& samples) {
    if (samples.values.empty()) throw Error(ErrorCode::EmptyInput, "no samples");
    std::vector<double> lengths;
    lengths.reserve(samples.values.size());
    // The tiny shave keeps s_k * d_k^2 < pi^2/2 strict under rounding.
    const double shave = 1.0 - 1e-12;
    for (std::size_t k = 0; k < samples.values.size(); ++k) {
        double s = samples.values[k];
        double margin_branch = shave * kPi / std::sqrt(2.0 * s);
        double geometric_branch = std::ldexp(1.0, -static_cast<int>(k) - 1); // (1/2)^(k+1)
        lengths.push_back(std::min(margin_branch, geometric_branch));
    }
    return lengths;
}

std::vector<double> choose_couplings(const std::vector<double>& lengths) {
    if (lengths.size() < 2)
        throw Error(ErrorCode::InvalidProblem, "couplings need at least two cells");
    std::vector<double> couplings;
    couplings.reserve(lengths.size() - 1);
    for (std::size_t k = 1; k < lengths.size(); ++k) {
        double dmin = std::min(lengths[k - 1], lengths[k]);
        couplings.push_back(static_cast<double>(k) * static_cast<double>(k) / dmin);
    }
    return couplings;
}

std::pair<Schedule, DesignReport> design(const TargetSet& set, int count) {
    SamplingSequence samples = sample_sequence(set, count);
    std::vector<double> lengths = choose_lengths(samples);

    std::vector<double> strengths(lengths.size());
    parallel_for(lengths.size(), [&](std::size_t k) {
        try {
            strengths[k] = tune_q(lengths[k], samples.values[k]);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::TargetOutOfRange)
                // choose_lengths guarantees a factor-2 margin, so this is a bug
                throw Error(ErrorCode::Internal,
                            std::string("length margin violated: ") + e.what());
            throw;
        }
    });

    Schedule schedule;
    schedule.a = 0.0;
    double x = 0.0;
    for (std::size_t k = 0; k < lengths.size(); ++k) {
        ScheduleCell cell;
        cell.x_left = x;
        cell.d = lengths[k];
        cell.y = x + 0.5 * lengths[k];
        cell.x_right = x + lengths[k];
        cell.q = Strength::finite(strengths[k]);
        schedule.cells.push_back(cell);
        x = cell.x_right;
    }
    schedule.b = x;
    if (lengths.size() >= 2) {
        std::vector<double> ps = choose_couplings(lengths);
        for (std::size_t k = 0; k < ps.size(); ++k)
            schedule.couplings.push_back({schedule.cells[k].x_right, Strength::finite(ps[k])});
    }
    schedule.meta.source_set = set;
    schedule.meta.sample_count = count;
    check_schedule(schedule);

    DesignReport report;
    report.total_length = schedule.b;
    for (double r : schedule.rho()) report.max_rho = std::max(report.max_rho, r);
    for (std::size_t k = 0; k < lengths.size(); ++k) {
        DesignCellRecord rec;
        rec.k = static_cast<int>(k) + 1;
        rec.s = samples.values[k];
        rec.d = lengths[k];
        rec.q = strengths[k];
        rec.achieved_lambda2 = odd_mode_eigenvalue(lengths[k], strengths[k], 0);
        rec.tuning_residual = std::abs(rec.achieved_lambda2 - rec.s) / rec.s;
        report.cells.push_back(rec);
    }
    return {std::move(schedule), std::move(report)};
}

Schedule decoupled(const Schedule& schedule) {
    Schedule copy = schedule;
    for (ScheduleCoupling& c : copy.couplings) c.p = Strength::infinite();
    return copy;
}

} // namespace specforge
