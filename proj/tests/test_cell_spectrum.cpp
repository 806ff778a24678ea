#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "specforge/cell_spectrum.hpp"
#include "test_helpers.hpp"

using namespace specforge;
using testutil::kPi;

TEST_CASE("secular root matches the grid oracle at d=1, q=1") {
    double root = odd_mode_eigenvalue(1.0, 1.0, 0);
    std::vector<double> oracle =
        testutil::fd_cell_eigenvalues(1.0, Strength::finite(1.0), 10.0, 2e-4);
    REQUIRE(oracle.size() >= 2);
    CHECK(std::abs(root - oracle[1]) <= 1e-8);
    // The residual itself changes sign across the root.
    CHECK(secular_residual(1.0, 1.0, root * (1.0 - 1e-6)) *
              secular_residual(1.0, 1.0, root * (1.0 + 1e-6)) < 0.0);
}

TEST_CASE("large-strength asymptotics lambda2 ~ 4/(q d)") {
    for (double q : {1e3, 1e4}) {
        double root = odd_mode_eigenvalue(1.0, q, 0);
        CHECK(std::abs(root * q / 4.0 - 1.0) < 1e-3);
        std::vector<double> oracle =
            testutil::fd_cell_eigenvalues(1.0, Strength::finite(q), 1.0, 2e-4);
        REQUIRE(oracle.size() >= 2);
        CHECK(std::abs(root - oracle[1]) <= 1e-8);
    }
}

TEST_CASE("small-strength limit recovers the unbroken cell") {
    double root = odd_mode_eigenvalue(1.0, 1e-10, 0);
    CHECK(std::abs(root - kPi * kPi) < 1e-8);
}

TEST_CASE("closed-form spectra of the distinguished cells") {
    CellEigenvalues neumann = cell_eigenvalues({1.0, Strength::zero()}, 3);
    CHECK(neumann.values[0] == 0.0);
    CHECK(neumann.values[1] == doctest::Approx(kPi * kPi).epsilon(1e-14));
    CHECK(neumann.values[2] == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-14));

    CellEigenvalues halves = cell_eigenvalues({1.0, Strength::infinite()}, 3);
    CHECK(halves.values[0] == 0.0);
    CHECK(halves.values[1] == 0.0);
    CHECK(halves.values[2] == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-14));

    CellEigenvalues mid = cell_eigenvalues({1.0, Strength::finite(1.0)}, 2);
    CHECK(mid.values[0] == 0.0);
    CHECK(mid.tags[0] == BranchTag::Even);
    CHECK(mid.tags[1] == BranchTag::Odd);
    std::vector<double> oracle =
        testutil::fd_cell_eigenvalues(1.0, Strength::finite(1.0), 10.0, 2e-4);
    CHECK(std::abs(mid.values[1] - oracle[1]) <= 1e-8);
}

TEST_CASE("eigenvalue branches interleave and respect the floors") {
    for (double q : {0.05, 0.7, 3.0, 40.0}) {
        CellEigenvalues ev = cell_eigenvalues({1.3, Strength::finite(q)}, 6);
        CHECK(ev.values[0] == 0.0);
        CHECK(ev.values[2] >= (2.0 * kPi / 1.3) * (2.0 * kPi / 1.3) * (1.0 - 1e-14));
        CHECK(std::is_sorted(ev.values.begin(), ev.values.end()));
    }
    CellEigenvalues inf_ev = cell_eigenvalues({1.3, Strength::infinite()}, 3);
    CHECK(inf_ev.values[2] >= (2.0 * kPi / 1.3) * (2.0 * kPi / 1.3) * (1.0 - 1e-14));
}

TEST_CASE("monotone decrease of every branch in the strength") {
    std::vector<double> qs;
    for (int i = 0; i < 50; ++i) qs.push_back(std::pow(10.0, -4.0 + 8.0 * i / 49.0));
    std::vector<double> prev;
    for (double q : qs) {
        CellEigenvalues ev = cell_eigenvalues({1.0, Strength::finite(q)}, 6);
        if (!prev.empty())
            for (int j = 0; j < 6; ++j) CHECK(ev.values[j] <= prev[j] + 1e-12);
        prev = ev.values;
    }
}

TEST_CASE("strength-to-zero limit reaches the unbroken-cell spectrum monotonically") {
    CellEigenvalues neumann = cell_eigenvalues({1.0, Strength::zero()}, 4);
    std::vector<double> prev(4, -1.0);
    for (int e = 1; e <= 6; ++e) {
        double q = std::pow(10.0, -e);
        CellEigenvalues ev = cell_eigenvalues({1.0, Strength::finite(q)}, 4);
        for (int j = 0; j < 4; ++j) {
            CHECK(ev.values[j] >= prev[j] - 1e-12); // increases as q shrinks
            CHECK(ev.values[j] <= neumann.values[j] + 1e-12);
        }
        prev = ev.values;
    }
    for (int j = 0; j < 4; ++j) CHECK(std::abs(prev[j] - neumann.values[j]) < 1e-3);
}

TEST_CASE("random cells agree with the grid oracle") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> d_dist(0.1, 3.0);
    std::uniform_real_distribution<double> q_log(std::log(0.01), std::log(100.0));
    for (int trial = 0; trial < 20; ++trial) {
        double d = d_dist(rng);
        double q = std::exp(q_log(rng));
        CellEigenvalues ev = cell_eigenvalues({d, Strength::finite(q)}, 5);
        double cutoff = ev.values[4] * 1.05 + 1.0;
        double h = 0.01 / std::sqrt(cutoff);
        std::vector<double> oracle = testutil::fd_cell_eigenvalues(d, Strength::finite(q), cutoff, h);
        REQUIRE(oracle.size() >= 5);
        for (int j = 0; j < 5; ++j)
            CHECK(std::abs(ev.values[j] - oracle[j]) <= 1e-6 * std::max(1.0, ev.values[j]));
    }
}

TEST_CASE("tune_q hits its target and rejects the boundary") {
    CHECK_THROWS_AS(tune_q(1.0, kPi * kPi), Error);
    CHECK_THROWS_AS(tune_q(1.0, 0.0), Error);
    try {
        tune_q(1.0, kPi * kPi);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TargetOutOfRange);
    }

    double q = tune_q(1.0, 1.0);
    CHECK(std::abs(odd_mode_eigenvalue(1.0, q, 0) - 1.0) <= 1e-10);

    double near_top = kPi * kPi * (1.0 - 1e-12);
    double q_small = tune_q(1.0, near_top);
    CHECK(q_small > 0.0);
    CHECK(q_small < 1e-11);
    CHECK(std::abs(odd_mode_eigenvalue(1.0, q_small, 0) - near_top) <= 1e-10 * near_top);
}

TEST_CASE("tune_q round trip over random admissible pairs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d_dist(0.1, 3.0);
    std::uniform_real_distribution<double> frac(0.02, 0.98);
    for (int trial = 0; trial < 50; ++trial) {
        double d = d_dist(rng);
        double s = frac(rng) * (kPi / d) * (kPi / d);
        double q = tune_q(d, s);
        CHECK(std::abs(odd_mode_eigenvalue(d, q, 0) - s) <= 1e-10 * s);
    }
}

TEST_CASE("resolvent difference bound") {
    CHECK(resolvent_diff_bound(1.0, 1.0, 1.0) == 0.0);
    CHECK(resolvent_diff_bound(1.0, 1.0, 2.0) == doctest::Approx(4.0));

    // Dense grid resolvents stay below the certified bound.
    PathProblem p1{{0.5, 0.5}, {1.0}};
    PathProblem p2{{0.5, 0.5}, {1.1}};
    Tridiagonal t1 = assemble_fd(p1, 1e-3).matrix;
    Tridiagonal t2 = assemble_fd(p2, 1e-3).matrix;
    double measured = testutil::resolvent_difference_norm(t1, t2);
    double bound = resolvent_diff_bound(1.0, 1.0, 1.1);
    CHECK(measured > 0.0);
    CHECK(measured <= bound);
}

TEST_CASE("assembled grid matrix is symmetric to 1e-14") {
    PathProblem p{{0.5, 0.5, 0.7}, {0.3, 2.0}};
    FdMatrix fd = assemble_fd(p, 1e-3);
    CHECK(fd.assembly_asymmetry <= 1e-14);
}
