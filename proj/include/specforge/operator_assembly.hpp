#pragma once

#include <optional>
#include <vector>

#include "specforge/cell_spectrum.hpp"
#include "specforge/strength.hpp"
#include "specforge/target_set.hpp"

namespace specforge {

struct ScheduleCell {
    double x_left = 0.0;
    double y = 0.0;
    double x_right = 0.0;
    double d = 0.0;
    Strength q = Strength::zero();
};

struct ScheduleCoupling {
    double x = 0.0;
    Strength p = Strength::infinite();
};

struct ScheduleMeta {
    std::optional<TargetSet> source_set;
    int sample_count = 0;
};

/// Full operator data on (a, b): cells with midpoint strengths q_k and
/// junction strengths p_k at the interior cell boundaries.
struct Schedule {
    double a = 0.0;
    double b = 0.0;
    std::vector<ScheduleCell> cells;
    std::vector<ScheduleCoupling> couplings; // size = cells.size() - 1
    ScheduleMeta meta;

    /// rho_k = max{ 1/(p_k d_k), 1/(p_k d_{k+1}) } for finite p_k (0 for inf).
    std::vector<double> rho() const;

    /// kappa_n = sup_{k >= n} rho_k over the stored junctions; the last
    /// stored value is used when n runs past the end (rho decays).
    double kappa(std::size_t n) const;
};

/// Consistency checks (positions to 1e-14, finite total length). Throws
/// InvalidProblem on violation.
void check_schedule(const Schedule& schedule);

struct DesignCellRecord {
    int k = 0;
    double s = 0.0;
    double d = 0.0;
    double q = 0.0;
    double achieved_lambda2 = 0.0;
    double tuning_residual = 0.0;
};

struct DesignReport {
    std::vector<DesignCellRecord> cells;
    double total_length = 0.0;
    double max_rho = 0.0;
};

/// Cell lengths d_k = min( pi/sqrt(2 s_k), (1/2)^k ): the first branch keeps
/// s_k below half the Neumann ceiling (pi/d_k)^2, the second certifies
/// sum d_k <= 1.
std::vector<double> choose_lengths(const SamplingSequence& samples);

/// Junction strengths p_k = k^2 / min{d_k, d_{k+1}}, so rho_k = 1/k^2 and
/// first-order detuning of the k-th tuned eigenvalue decays like k^-2.
std::vector<double> choose_couplings(const std::vector<double>& lengths);

/// Full pipeline: sample -> lengths -> per-cell strength tuning -> couplings.
std::pair<Schedule, DesignReport> design(const TargetSet& set, int count);

/// Truncation-friendly helper: same schedule with every junction strength
/// replaced by inf (the decoupled comparison operator).
Schedule decoupled(const Schedule& schedule);

} // namespace specforge
