#include "specforge/mivt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "specforge/errors.hpp"
#include "specforge/truncated_spectrum.hpp"

namespace specforge {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::vector<double> MonotoneBoxProblem::to_original(const std::vector<double>& x) const {
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
        out[j] = coordinate_sign[j] >= 0 ? x[j] : lo[j] + hi[j] - x[j];
    return out;
}

MonotoneBoxProblem make_monotone_box_problem(
    std::vector<double> lo, std::vector<double> hi,
    std::function<std::vector<double>(const std::vector<double>&)> evaluator,
    std::vector<std::vector<int>> signs, std::vector<double> target) {
    const std::size_t m = target.size();
    if (m == 0 || lo.size() != m || hi.size() != m || signs.size() != m)
        throw Error(ErrorCode::InvalidProblem, "box problem dimensions disagree");
    for (std::size_t k = 0; k < m; ++k) {
        if (!(lo[k] < hi[k]))
            throw Error(ErrorCode::InvalidProblem, "box must have positive extent per coordinate");
        if (signs[k].size() != m)
            throw Error(ErrorCode::InvalidProblem, "sign matrix must be m x m");
    }

    // A reflection acts on a whole coordinate, so each column must be
    // one-signed across components (zeros mean no dependence).
    std::vector<int> column_sign(m, 0);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            int s = signs[i][j];
            if (s == 0) continue;
            if (s != 1 && s != -1)
                throw Error(ErrorCode::InvalidProblem, "sign entries must be -1, 0 or 1");
            if (column_sign[j] == 0)
                column_sign[j] = s;
            else if (column_sign[j] != s)
                throw Error(ErrorCode::InvalidProblem,
                            "coordinate has mixed monotonicity across components");
        }
        if (column_sign[j] == 0) column_sign[j] = 1;
    }

    MonotoneBoxProblem problem;
    problem.dim = m;
    problem.lo = lo;
    problem.hi = hi;
    problem.coordinate_sign = column_sign;
    problem.target = std::move(target);
    problem.map = [lo, hi, column_sign, evaluator](const std::vector<double>& x) {
        std::vector<double> orig(x.size());
        for (std::size_t j = 0; j < x.size(); ++j)
            orig[j] = column_sign[j] >= 0 ? x[j] : lo[j] + hi[j] - x[j];
        return evaluator(orig);
    };

    problem.corner_lo.resize(m);
    problem.corner_hi.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        std::vector<double> at_lo = problem.hi;
        at_lo[k] = problem.lo[k];
        std::vector<double> at_hi = problem.lo;
        at_hi[k] = problem.hi[k];
        problem.corner_lo[k] = problem.map(at_lo)[k];
        problem.corner_hi[k] = problem.map(at_hi)[k];
        if (!(problem.corner_lo[k] < problem.corner_hi[k]))
            throw Error(ErrorCode::InvalidProblem, "corner values are not strictly ordered");
        if (problem.target[k] < problem.corner_lo[k] || problem.target[k] > problem.corner_hi[k])
            throw Error(ErrorCode::InvalidProblem, "target leaves the corner box");
    }
    return problem;
}

SolveResult solve_box(const MonotoneBoxProblem& problem, double tol, int max_sweeps,
                      std::vector<std::size_t> sweep_order) {
    const std::size_t m = problem.dim;
    if (sweep_order.empty()) {
        sweep_order.resize(m);
        std::iota(sweep_order.begin(), sweep_order.end(), 0);
    }
    if (sweep_order.size() != m)
        throw Error(ErrorCode::InvalidProblem, "sweep order must cover every coordinate");

    std::vector<double> x(m);
    for (std::size_t j = 0; j < m; ++j) x[j] = 0.5 * (problem.lo[j] + problem.hi[j]);

    auto residual_of = [&](const std::vector<double>& values) {
        double r = 0.0;
        for (std::size_t k = 0; k < m; ++k)
            r = std::max(r, std::abs(values[k] - problem.target[k]));
        return r;
    };

    SolveResult best;
    best.x = x;
    best.values = problem.map(x);
    best.residual = residual_of(best.values);

    SolveResult current = best;
    bool restarted = false;
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        for (std::size_t k : sweep_order) {
            // Scalar monotone bisection in coordinate k; a target outside
            // the reachable range clamps to the nearer endpoint (transient
            // no-bracket situation, later sweeps move it back).
            double lo = problem.lo[k];
            double hi = problem.hi[k];
            double goal = problem.target[k];
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                if (mid == lo || mid == hi) break;
                current.x[k] = mid;
                double fk = problem.map(current.x)[k];
                if (std::abs(fk - goal) <= 0.02 * tol) break;
                if (fk >= goal)
                    hi = mid;
                else
                    lo = mid;
            }
            current.x[k] = 0.5 * (lo + hi);
        }
        current.values = problem.map(current.x);
        current.residual = residual_of(current.values);
        current.sweeps = sweep;
        current.sweep_residuals.push_back(current.residual);
        if (current.residual < best.residual) {
            best = current;
        }
        if (current.residual <= tol) return current;

        std::size_t n = current.sweep_residuals.size();
        bool stalled = n >= 4 && current.sweep_residuals[n - 1] >
                                     0.9 * current.sweep_residuals[n - 4];
        if (stalled) {
            if (restarted) break;
            restarted = true;
            for (std::size_t j = 0; j < m; ++j) x[j] = 0.5 * (problem.lo[j] + problem.hi[j]);
            current.x = x;
        }
    }

    std::ostringstream msg;
    msg << "coordinate sweeps did not reach tol=" << tol << "; best residual " << best.residual
        << " at (";
    for (std::size_t j = 0; j < m; ++j) msg << (j ? ", " : "") << best.x[j];
    msg << ")";
    throw Error(ErrorCode::NonConvergence, msg.str());
}

namespace {

Schedule chain_schedule(const std::vector<double>& lengths, const std::vector<double>& strengths,
                        double coupling) {
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
        if (k + 1 < lengths.size())
            schedule.couplings.push_back({x, Strength::finite(coupling)});
    }
    schedule.b = x;
    return schedule;
}

} // namespace

std::pair<Schedule, ChainTuneReport> tune_chain(const ChainTuneSpec& spec, double tol) {
    const std::size_t m = spec.targets.size();
    if (m == 0) throw Error(ErrorCode::InvalidProblem, "no targets");
    if (spec.lengths.size() != m)
        throw Error(ErrorCode::InvalidProblem, "need one cell length per target");
    if (!(spec.coupling > 0.0) || !std::isfinite(spec.coupling))
        throw Error(ErrorCode::InvalidProblem, "coupling strength must be positive and finite");
    for (std::size_t k = 0; k + 1 < m; ++k)
        if (!(spec.targets[k] < spec.targets[k + 1]))
            throw Error(ErrorCode::InvalidProblem, "targets must be strictly increasing");
    if (!(spec.window_lo > 0.0) || !(spec.window_lo < spec.targets.front()) ||
        !(spec.window_hi > spec.targets.back()))
        throw Error(ErrorCode::InvalidProblem, "window must enclose the targets");
    double guard = std::numeric_limits<double>::infinity();
    double neumann_floor = std::numeric_limits<double>::infinity();
    for (double d : spec.lengths) {
        if (!(d > 0.0)) throw Error(ErrorCode::InvalidProblem, "cell lengths must be positive");
        guard = std::min(guard, (2.0 * kPi / d) * (2.0 * kPi / d));
        neumann_floor = std::min(neumann_floor, (kPi / d) * (kPi / d));
    }
    if (!(spec.window_hi < guard))
        throw Error(ErrorCode::InvalidProblem,
                    "window top must stay below the third-branch floor (2 pi / d)^2");
    if (!(spec.targets.back() < neumann_floor))
        throw Error(ErrorCode::InvalidProblem, "targets must stay below (pi/d)^2 for every cell");

    double gap = spec.targets.front() - spec.window_lo;
    gap = std::min(gap, spec.window_hi - spec.targets.back());
    for (std::size_t k = 0; k + 1 < m; ++k)
        gap = std::min(gap, spec.targets[k + 1] - spec.targets[k]);
    const double margin = 0.45 * gap;

    // Box in t = 1/q; the tuned eigenvalues are nondecreasing in t.
    std::vector<double> t_lo(m), t_hi(m);
    for (std::size_t k = 0; k < m; ++k) {
        t_lo[k] = 1.0 / tune_q(spec.lengths[k], spec.targets[k] - margin);
        t_hi[k] = 1.0 / tune_q(spec.lengths[k], spec.targets[k] + margin);
    }

    auto evaluate = [&](const std::vector<double>& t) {
        std::vector<double> strengths(m);
        for (std::size_t k = 0; k < m; ++k) strengths[k] = 1.0 / t[k];
        TruncatedOperator op{chain_schedule(spec.lengths, strengths, spec.coupling), m};
        Spectrum s = eigenvalues_below(op, spec.window_hi);
        if (s.eigenvalues.size() < 2 * m)
            throw Error(ErrorCode::CouplingTooStrong,
                        "fewer than 2m eigenvalues below the window top");
        std::vector<double> out(m);
        for (std::size_t k = 0; k < m; ++k) out[k] = s.eigenvalues[m + k].lambda;
        return out;
    };

    // Monotonicity audit on a 3-point grid per coordinate (min-max says the
    // map must be nondecreasing; this check catches wiring bugs, it is not
    // an assumption).
    {
        std::vector<double> center(m);
        for (std::size_t j = 0; j < m; ++j) center[j] = 0.5 * (t_lo[j] + t_hi[j]);
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<double> probe = center;
            probe[j] = t_lo[j];
            std::vector<double> at_lo = evaluate(probe);
            probe[j] = 0.5 * (t_lo[j] + t_hi[j]);
            std::vector<double> at_mid = evaluate(probe);
            probe[j] = t_hi[j];
            std::vector<double> at_hi = evaluate(probe);
            for (std::size_t i = 0; i < m; ++i) {
                double slack = 1e-10 * std::max(1.0, std::abs(at_hi[i]));
                if (at_mid[i] < at_lo[i] - slack || at_hi[i] < at_mid[i] - slack)
                    throw Error(ErrorCode::InvalidProblem,
                                "chain map failed the monotonicity audit");
            }
        }
    }

    MonotoneBoxProblem problem;
    try {
        problem = make_monotone_box_problem(
            t_lo, t_hi, evaluate,
            std::vector<std::vector<int>>(m, std::vector<int>(m, 1)), spec.targets);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidProblem)
            throw Error(ErrorCode::CouplingTooStrong,
                        std::string("corner inequalities failed: ") + e.what());
        throw;
    }

    SolveResult solved = solve_box(problem, tol, 200);

    std::vector<double> t = problem.to_original(solved.x);
    std::vector<double> strengths(m);
    for (std::size_t k = 0; k < m; ++k) strengths[k] = 1.0 / t[k];
    Schedule schedule = chain_schedule(spec.lengths, strengths, spec.coupling);

    // The window assertions: m eigenvalues below the window, the tuned ones
    // inside it, nothing else until past the top.
    TruncatedOperator op{schedule, m};
    Spectrum s = eigenvalues_below(op, spec.window_hi);
    if (s.count != 2 * m)
        throw Error(ErrorCode::Internal, "tuned chain does not isolate 2m eigenvalues in the window");
    std::size_t below = 0;
    for (const EigenvalueRecord& r : s.eigenvalues)
        if (r.lambda < spec.window_lo) ++below;
    if (below != m)
        throw Error(ErrorCode::Internal, "tuned chain leaks eigenvalues into the window bottom");

    ChainTuneReport report;
    report.achieved = solved.values;
    report.strengths = strengths;
    report.residual = solved.residual;
    report.sweeps = solved.sweeps;
    return {std::move(schedule), std::move(report)};
}

} // namespace specforge
