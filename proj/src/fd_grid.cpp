#include "specforge/fd_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specforge/errors.hpp"

namespace specforge {

double PathProblem::total_length() const {
    double sum = 0.0;
    for (double t : segments) sum += t;
    return sum;
}

std::vector<PathProblem> split_truncation(const Schedule& schedule, std::size_t n_cells) {
    if (n_cells == 0 || n_cells > schedule.cells.size())
        throw Error(ErrorCode::InvalidProblem, "truncation size out of range");

    std::vector<PathProblem> pieces;
    PathProblem current;
    bool pending_merge = false; // true right after a zero-strength junction
    auto push_segment = [&](double len) {
        if (pending_merge && !current.segments.empty()) {
            current.segments.back() += len; // zero strength = free point, segments concatenate
            pending_merge = false;
        } else {
            current.segments.push_back(len);
        }
    };
    auto push_jump = [&](double beta) {
        current.jumps.push_back(beta);
        pending_merge = false;
    };
    auto close = [&]() {
        if (!current.segments.empty()) pieces.push_back(std::move(current));
        current = PathProblem{};
        pending_merge = false;
    };

    for (std::size_t k = 0; k < n_cells; ++k) {
        const ScheduleCell& cell = schedule.cells[k];
        switch (cell.q.kind()) {
            case Strength::Kind::Zero:
                push_segment(cell.d);
                break;
            case Strength::Kind::Finite:
                push_segment(0.5 * cell.d);
                push_jump(cell.q.value());
                push_segment(0.5 * cell.d);
                break;
            case Strength::Kind::Infinite:
                push_segment(0.5 * cell.d);
                close();
                push_segment(0.5 * cell.d);
                break;
        }
        if (k + 1 < n_cells) {
            const Strength& p = schedule.couplings[k].p;
            if (p.is_infinite())
                close();
            else if (p.is_finite())
                push_jump(p.value());
            else
                pending_merge = true;
        }
    }
    close();
    return pieces;
}

FdMatrix assemble_fd(const PathProblem& problem, double h) {
    if (problem.segments.empty())
        throw Error(ErrorCode::InvalidProblem, "empty path problem");
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidProblem, "grid step must be positive");

    std::size_t total_nodes = 0;
    std::vector<std::size_t> panels(problem.segments.size());
    for (std::size_t s = 0; s < problem.segments.size(); ++s) {
        double len = problem.segments[s];
        if (!(len > 0.0)) throw Error(ErrorCode::InvalidProblem, "segment length must be positive");
        panels[s] = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(len / h)));
        total_nodes += panels[s] + 1;
    }

    std::vector<double> diag(total_nodes, 0.0);
    std::vector<double> upper(total_nodes - 1, 0.0);
    std::vector<double> lower(total_nodes - 1, 0.0);
    std::vector<double> mass(total_nodes, 0.0);

    std::size_t base = 0;
    for (std::size_t s = 0; s < problem.segments.size(); ++s) {
        std::size_t n = panels[s];
        double hs = problem.segments[s] / static_cast<double>(n);
        double w = 1.0 / hs;
        for (std::size_t e = 0; e < n; ++e) {
            std::size_t i = base + e;
            diag[i] += w;
            diag[i + 1] += w;
            upper[i] += -w;
            lower[i] += -w;
            mass[i] += 0.5 * hs;
            mass[i + 1] += 0.5 * hs;
        }
        if (s + 1 < problem.segments.size()) {
            // Duplicated interface nodes i (right trace) and i+1 (left trace)
            // coupled by the jump penalty (1/beta)|u(+)-u(-)|^2.
            std::size_t i = base + n;
            double beta = problem.jumps[s];
            if (!(beta > 0.0))
                throw Error(ErrorCode::InvalidProblem, "jump strengths must be positive after splitting");
            double w_jump = 1.0 / beta;
            diag[i] += w_jump;
            diag[i + 1] += w_jump;
            upper[i] += -w_jump;
            lower[i] += -w_jump;
        }
        base += n + 1;
    }

    FdMatrix out;
    for (std::size_t i = 0; i + 1 < total_nodes; ++i)
        out.assembly_asymmetry = std::max(out.assembly_asymmetry, std::abs(upper[i] - lower[i]));

    out.matrix.diag.resize(total_nodes);
    out.matrix.off.resize(total_nodes - 1);
    for (std::size_t i = 0; i < total_nodes; ++i)
        out.matrix.diag[i] = diag[i] / mass[i];
    for (std::size_t i = 0; i + 1 < total_nodes; ++i)
        out.matrix.off[i] = upper[i] / std::sqrt(mass[i] * mass[i + 1]);
    return out;
}

std::size_t sturm_count(const Tridiagonal& tri, double lambda) {
    // The pivot recurrence runs in extended precision: the entries scale
    // like 1/h^2 while the eigenvalues of interest are O(1), and double
    // accumulation would floor the resolution at eps * ||C||.
    std::size_t count = 0;
    long double lam = lambda;
    long double d = static_cast<long double>(tri.diag[0]) - lam;
    if (d == 0.0L) d = -std::numeric_limits<long double>::min();
    if (d < 0.0L) ++count;
    for (std::size_t i = 1; i < tri.size(); ++i) {
        long double e = tri.off[i - 1];
        d = (static_cast<long double>(tri.diag[i]) - lam) - e * e / d;
        if (d == 0.0L) d = -std::numeric_limits<long double>::min();
        if (d < 0.0L) ++count;
    }
    return count;
}

std::vector<double> sturm_eigenvalues_below(const Tridiagonal& tri, double cutoff) {
    std::size_t total = sturm_count(tri, cutoff);
    std::vector<double> values;
    values.reserve(total);
    double lo_floor = -1e-9 * std::max(1.0, std::abs(cutoff)); // pencil is PSD
    for (std::size_t j = 1; j <= total; ++j) {
        double lo = values.empty() ? lo_floor : values.back();
        double hi = cutoff;
        for (int it = 0; it < 120; ++it) {
            double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (sturm_count(tri, mid) >= j)
                hi = mid;
            else
                lo = mid;
        }
        values.push_back(0.5 * (lo + hi));
    }
    return values;
}

FdEigenvalues fd_eigenvalues_below(const PathProblem& problem, double cutoff, double h) {
    FdMatrix coarse = assemble_fd(problem, h);
    FdMatrix fine = assemble_fd(problem, 0.5 * h);
    std::vector<double> vc = sturm_eigenvalues_below(coarse.matrix, cutoff);
    std::vector<double> vf = sturm_eigenvalues_below(fine.matrix, cutoff);

    FdEigenvalues out;
    out.count = vf.size();
    std::size_t n = std::min(vc.size(), vf.size());
    for (std::size_t i = 0; i < n; ++i) {
        out.values.push_back(vf[i] + (vf[i] - vc[i]) / 3.0);
        out.step_change.push_back(std::abs(vf[i] - vc[i]));
    }
    for (std::size_t i = n; i < vf.size(); ++i) {
        out.values.push_back(vf[i]);
        out.step_change.push_back(std::abs(cutoff) * 1e-6 + 1e-12);
    }
    return out;
}

} // namespace specforge
