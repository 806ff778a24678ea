#include "specforge/truncated_spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "specforge/errors.hpp"
#include "specforge/util.hpp"

namespace specforge {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;

// State propagation with positive rescaling; zeros of u' are scale-invariant
// and the applied factor is kept as a log so callers can reconstruct
// magnitudes (junction strengths up to ~1e13 would overflow the raw
// product across a few dozen cells).
struct ShootState {
    double u = 1.0;
    double up = 0.0;
    double log_scale = 0.0; // sum of ln(factor) divided out

    void apply(const Mat2& m) {
        double nu = m.a11 * u + m.a12 * up;
        double nup = m.a21 * u + m.a22 * up;
        u = nu;
        up = nup;
        double mag = std::max(std::abs(u), std::abs(up));
        if (mag > 1e140 || (mag > 0.0 && mag < 1e-140)) {
            u /= mag;
            up /= mag;
            log_scale += std::log(mag);
        }
    }
};

double piece_shoot(const PathProblem& piece, double lambda, double* log_scale = nullptr) {
    ShootState state;
    for (std::size_t s = 0; s < piece.segments.size(); ++s) {
        state.apply(transfer_state(lambda, piece.segments[s]));
        if (s < piece.jumps.size()) state.apply(jump_matrix(piece.jumps[s]));
    }
    if (log_scale) *log_scale += state.log_scale;
    return state.up;
}

// Oscillation count. Eigenvalues below lambda correspond to interior
// zeros of u'(.; lambda): on a free segment starting from (u0, u0') the
// zeros sit at k*x = atan(u0'/(k u0)) mod pi, and jumps never create or
// destroy them (u' is untouched). Each segment's zero count is computed
// locally from the propagated state through the ratio u'/(k u), which
// keeps tiny angles at full relative precision even when cell sizes span
// fifteen orders of magnitude (a grid matrix with entries ~ 1/h^2, or any
// accumulated-phase scalar, loses exactly this information).
std::size_t phase_count_below(const PathProblem& piece, double lambda) {
    if (!(lambda > 0.0)) return 0;
    const double pi = 2.0 * kHalfPi;
    const double k = std::sqrt(lambda);
    ShootState state;
    long long crossings = 0;
    for (std::size_t s = 0; s < piece.segments.size(); ++s) {
        double sweep = k * piece.segments[s];
        double ratio = state.up / (k * state.u); // +-inf at u = 0 is fine
        double first = std::atan(ratio);
        if (!(first > 0.0)) first += pi; // first zero angle in (0, pi]
        if (first <= sweep)
            crossings += 1 + static_cast<long long>(std::floor((sweep - first) / pi));
        state.apply(transfer_state(lambda, piece.segments[s]));
        if (s < piece.jumps.size()) state.apply(jump_matrix(piece.jumps[s]));
    }
    return 1 + static_cast<std::size_t>(crossings);
}

double bisect_root(const PathProblem& piece, double lo, double hi, double flo) {
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        double fm = piece_shoot(piece, mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
        if (hi - lo <= 1e-11 * std::max(1.0, std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

std::vector<EigenvalueRecord> piece_eigenvalues(const PathProblem& piece, double cutoff) {
    const std::size_t m = phase_count_below(piece, cutoff);
    std::vector<EigenvalueRecord> records;
    if (m == 0) return records;

    // The constant mode sits at 0 for every Neumann-ended piece; the
    // propagated seed (1, 0) keeps u' = 0 identically there.
    if (piece_shoot(piece, 0.0) != 0.0)
        throw Error(ErrorCode::Internal, "shooting function does not vanish at 0");

    // j-th eigenvalue (j >= 2): count-bisection isolates it, then the
    // shooting function pins it inside the bracket.
    std::vector<EigenvalueRecord> slots(m);
    parallel_for(m - 1, [&](std::size_t idx) {
        std::size_t j = idx + 2; // eigenvalue index, 1-based
        double lo = 0.0, hi = cutoff;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (phase_count_below(piece, mid) >= j)
                hi = mid;
            else
                lo = mid;
            if (hi - lo <= 1e-9 * std::max(1e-6, hi) &&
                phase_count_below(piece, hi) - phase_count_below(piece, lo) == 1)
                break;
        }
        // [lo, hi] straddles the eigenvalue with count difference one;
        // D changes sign across a simple zero.
        double flo = piece_shoot(piece, lo);
        double fhi = piece_shoot(piece, hi);
        int widen = 0;
        while (flo == 0.0 || fhi == 0.0 || flo * fhi > 0.0) {
            if (++widen > 8)
                throw Error(ErrorCode::CountMismatch,
                            "phase count and shooting sign disagree near an eigenvalue");
            double width = hi - lo + 1e-300;
            lo = std::max(0.0, lo - width);
            hi = std::min(cutoff, hi + width);
            if (phase_count_below(piece, hi) - phase_count_below(piece, lo) != 1)
                throw Error(ErrorCode::CountMismatch,
                            "widened bracket no longer isolates one eigenvalue");
            flo = piece_shoot(piece, lo);
            fhi = piece_shoot(piece, hi);
        }
        EigenvalueRecord rec;
        rec.bracket_lo = lo;
        rec.bracket_hi = hi;
        rec.lambda = bisect_root(piece, lo, hi, flo);
        slots[j - 1] = rec;
    });

    {
        EigenvalueRecord zero;
        zero.lambda = 0.0;
        double eps = 1e-12;
        if (m > 1) eps = std::max(std::min(eps, 0.25 * slots[1].lambda), 1e-300);
        zero.bracket_lo = -eps;
        zero.bracket_hi = eps;
        records.push_back(zero);
    }
    for (std::size_t j = 1; j < m; ++j) records.push_back(slots[j]);
    for (std::size_t j = 1; j < records.size(); ++j)
        if (!(records[j].lambda > records[j - 1].lambda))
            throw Error(ErrorCode::CountMismatch, "eigenvalues failed to come out increasing");
    // Clip overlapping neighbor brackets at the midpoint between the roots;
    // each still isolates its own eigenvalue strictly.
    for (std::size_t j = 1; j < records.size(); ++j) {
        if (records[j].bracket_lo < records[j - 1].bracket_hi) {
            double mid = 0.5 * (records[j - 1].lambda + records[j].lambda);
            records[j - 1].bracket_hi = std::min(records[j - 1].bracket_hi, mid);
            records[j].bracket_lo = std::max(records[j].bracket_lo, mid);
        }
    }

    // Cross-check against the grid Sturm count where the grid matrix is
    // numerically meaningful (entries scale like 1/h^2; past ~1e12 the
    // count cannot resolve O(1) eigenvalues and is skipped).
    double h = 0.01 / std::sqrt(std::max(cutoff, 1.0));
    for (int attempt = 0; attempt < 2; ++attempt, h *= 0.5) {
        FdMatrix fd = assemble_fd(piece, h);
        double scale = 0.0;
        for (double v : fd.matrix.diag) scale = std::max(scale, std::abs(v));
        if (scale > 1e12) return records;
        std::size_t grid_count = sturm_count(fd.matrix, cutoff);
        if (grid_count == m) return records;
    }
    throw Error(ErrorCode::CountMismatch,
                "grid counting and shooting zeros disagree after refinement");
}

} // namespace

Mat2 transfer_state(double lambda, double t) {
    Mat2 m;
    double lam = std::max(lambda, 0.0);
    double k = std::sqrt(lam);
    double kt = k * t;
    double c, s; // s = sin(kt)/k, smooth through lambda = 0
    if (kt < 1e-4) {
        double kt2 = kt * kt;
        c = std::cos(kt);
        s = t * (1.0 - kt2 / 6.0 + kt2 * kt2 / 120.0);
    } else {
        c = std::cos(kt);
        s = std::sin(kt) / k;
    }
    m.a11 = c;
    m.a12 = s;
    m.a21 = -lam * s; // -k sin(kt)
    m.a22 = c;
    return m;
}

Mat2 jump_matrix(double beta) {
    Mat2 m;
    m.a12 = beta;
    return m;
}

double shooting_function(const PathProblem& piece, double lambda, double* log_scale) {
    return piece_shoot(piece, lambda, log_scale);
}

double shooting_function(const TruncatedOperator& op, double lambda, double* log_scale) {
    std::vector<PathProblem> pieces = split_truncation(op.schedule, op.n_cells);
    double product = 1.0;
    for (const PathProblem& piece : pieces) product *= piece_shoot(piece, lambda, log_scale);
    return product;
}

std::vector<double> Spectrum::values() const {
    std::vector<double> out;
    out.reserve(eigenvalues.size());
    for (const EigenvalueRecord& r : eigenvalues) out.push_back(r.lambda);
    return out;
}

Spectrum eigenvalues_below(const TruncatedOperator& op, double cutoff) {
    if (!(cutoff > 0.0)) throw Error(ErrorCode::InvalidProblem, "cutoff must be positive");
    std::vector<PathProblem> pieces = split_truncation(op.schedule, op.n_cells);

    Spectrum spectrum;
    for (const PathProblem& piece : pieces) {
        std::vector<EigenvalueRecord> recs = piece_eigenvalues(piece, cutoff);
        spectrum.eigenvalues.insert(spectrum.eigenvalues.end(), recs.begin(), recs.end());
    }
    std::stable_sort(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end(),
                     [](const EigenvalueRecord& a, const EigenvalueRecord& b) {
                         return a.lambda < b.lambda;
                     });
    spectrum.count = spectrum.eigenvalues.size();
    return spectrum;
}

Spectrum fd_oracle_spectrum(const TruncatedOperator& op, double cutoff) {
    if (!(cutoff > 0.0)) throw Error(ErrorCode::InvalidProblem, "cutoff must be positive");
    std::vector<PathProblem> pieces = split_truncation(op.schedule, op.n_cells);
    double h = 0.01 / std::sqrt(std::max(cutoff, 1.0));

    Spectrum spectrum;
    for (const PathProblem& piece : pieces) {
        FdEigenvalues fd = fd_eigenvalues_below(piece, cutoff, h);
        for (std::size_t j = 0; j < fd.values.size(); ++j) {
            EigenvalueRecord rec;
            rec.lambda = fd.values[j];
            double eps = std::max(3.0 * fd.step_change[j], 1e-12);
            rec.bracket_lo = fd.values[j] - eps;
            rec.bracket_hi = fd.values[j] + eps;
            rec.method = SpectrumMethod::FdOracle;
            spectrum.eigenvalues.push_back(rec);
        }
    }
    std::stable_sort(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end(),
                     [](const EigenvalueRecord& a, const EigenvalueRecord& b) {
                         return a.lambda < b.lambda;
                     });
    spectrum.count = spectrum.eigenvalues.size();
    return spectrum;
}

PerturbationScan coupling_perturbation_scan(const Schedule& schedule, std::size_t n_cells,
                                            double cutoff) {
    TruncatedOperator coupled{schedule, n_cells};
    TruncatedOperator free_ends{decoupled(schedule), n_cells};
    Spectrum sc = eigenvalues_below(coupled, cutoff);
    Spectrum sd = eigenvalues_below(free_ends, cutoff);

    PerturbationScan scan;
    scan.coupled_count = sc.count;
    scan.decoupled_count = sd.count;
    std::size_t n = std::min(sc.eigenvalues.size(), sd.eigenvalues.size());
    for (std::size_t i = 0; i < n; ++i) {
        PerturbationRow row;
        row.index = i + 1;
        row.lambda_coupled = sc.eigenvalues[i].lambda;
        row.lambda_decoupled = sd.eigenvalues[i].lambda;
        row.shift = std::abs(row.lambda_coupled - row.lambda_decoupled);
        scan.rows.push_back(row);
    }
    scan.kappa_next = schedule.kappa(n_cells + 1);
    double length = 0.0;
    for (std::size_t k = 0; k < n_cells; ++k) length += schedule.cells[k].d;
    scan.tail_constant = 4.0 * scan.kappa_next * length * length + 8.0 * scan.kappa_next;
    return scan;
}

} // namespace specforge
