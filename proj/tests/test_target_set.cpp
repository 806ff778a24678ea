#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "specforge/io.hpp"
#include "specforge/target_set.hpp"

using namespace specforge;

TEST_CASE("canonicalization of a well-formed set") {
    TargetSet set = make_target_set(true, {1.0}, {{2.0, 3.0}}, 10.0);
    CHECK(set.points.size() == 1);
    CHECK(set.intervals.size() == 1);
    CHECK(set.points[0] == 1.0);
    CHECK(set.zero_isolated());
}

TEST_CASE("overlapping intervals merge, zero-length intervals become points") {
    TargetSet set = make_target_set(true, {}, {{1.0, 2.0}, {1.5, 3.0}, {5.0, 5.0}}, 10.0);
    CHECK(set.intervals.size() == 1);
    CHECK(set.intervals[0].lo == 1.0);
    CHECK(set.intervals[0].hi == 3.0);
    REQUIRE(set.points.size() == 1);
    CHECK(set.points[0] == 5.0);
}

TEST_CASE("points inside intervals are dropped, duplicates collapse") {
    TargetSet set = make_target_set(true, {2.5, 2.5, 4.0, 4.0}, {{2.0, 3.0}}, 10.0);
    CHECK(set.points == std::vector<double>{4.0});
}

TEST_CASE("rejections") {
    CHECK_THROWS_WITH_AS(make_target_set(true, {-1.0}, {}, 10.0), "negative point",
                         Error);
    CHECK_THROWS_AS(make_target_set(false, {1.0}, {}, 10.0), Error);
    try {
        make_target_set(false, {1.0}, {}, 10.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroNotIncluded);
        CHECK(e.exit_code() == 2);
    }
    CHECK_THROWS_AS(make_target_set(true, {}, {{3.0, 2.0}}, 10.0), Error);
    CHECK_THROWS_AS(make_target_set(true, {std::nan("")}, {}, 10.0), Error);
    CHECK_THROWS_AS(make_target_set(true, {11.0}, {}, 10.0), Error);
    CHECK_THROWS_AS(make_target_set(true, {}, {}, -1.0), Error);
}

TEST_CASE("json round trip and unknown-field rejection") {
    nlohmann::json j = {{"includes_zero", true},
                        {"points", {1.0}},
                        {"intervals", {{2.0, 3.0}}},
                        {"lambda_max", 10.0}};
    TargetSet set = target_set_from_json(j);
    nlohmann::json back = target_set_to_json(set);
    TargetSet again = target_set_from_json(back);
    CHECK(again.points == set.points);
    CHECK(again.lambda_max == set.lambda_max);

    j["surprise"] = 1;
    CHECK_THROWS_AS(target_set_from_json(j), Error);
}

TEST_CASE("sampling a single point repeats it") {
    TargetSet set = make_target_set(true, {1.0}, {}, 10.0);
    SamplingSequence seq = sample_sequence(set, 4);
    CHECK(seq.values == std::vector<double>{1.0, 1.0, 1.0, 1.0});
    CHECK_FALSE(seq.diverges);
}

TEST_CASE("bare origin forces the divergent sequence") {
    TargetSet set = make_target_set(true, {}, {}, 10.0);
    SamplingSequence seq = sample_sequence(set, 3);
    CHECK(seq.diverges);
    CHECK(seq.values == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("dyadic sweep is an eps-net of the interval") {
    TargetSet set = make_target_set(true, {}, {{1.0, 2.0}}, 10.0);
    SamplingSequence seq = sample_sequence(set, 64);
    std::vector<double> sorted = seq.values;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i <= 1000; ++i) {
        double x = 1.0 + i / 1000.0;
        double best = 1e300;
        for (double v : sorted) best = std::min(best, std::abs(v - x));
        CHECK(best <= 2.0 / 64.0);
    }
}

TEST_CASE("non-isolated origin gets a tail into zero") {
    TargetSet set = make_target_set(true, {}, {{0.0, 1.0}}, 10.0);
    CHECK_FALSE(set.zero_isolated());
    double prev_min = 1e300;
    for (int j = 3; j <= 9; j += 2) {
        SamplingSequence seq = sample_sequence(set, 1 << j);
        double mn = *std::min_element(seq.values.begin(), seq.values.end());
        CHECK(mn > 0.0);
        CHECK(mn <= prev_min);
        prev_min = mn;
    }
    CHECK(prev_min < 1e-2);
}

TEST_CASE("samples stay inside the eps_cover neighborhood") {
    TargetSet set = make_target_set(true, {1.0}, {{2.0, 3.0}}, 10.0);
    double eps = 1e-3;
    SamplingSequence seq = sample_sequence(set, 40, eps);
    for (double v : seq.values) CHECK(set.distance_to(v) <= eps + 1e-15);
}

TEST_CASE("accumulation distance worked examples") {
    TargetSet a = make_target_set(true, {1.0}, {}, 10.0);
    CoverageDistance d1 = accumulation_distance(a, {0.0, 1.0, 1.0001}, 2.0);
    CHECK(d1.set_to_values <= 1e-4);
    CHECK(d1.values_to_set <= 1.0001e-4);

    TargetSet b = make_target_set(true, {}, {{1.0, 2.0}}, 10.0);
    std::vector<double> grid{0.0};
    for (int i = 0; i <= 100; ++i) grid.push_back(1.0 + i * 0.01);
    CoverageDistance d2 = accumulation_distance(b, grid, 2.0);
    CHECK(d2.set_to_values <= 0.005 + 1e-4);
    CHECK(d2.values_to_set == 0.0);

    TargetSet c = make_target_set(true, {5.0}, {}, 10.0);
    CoverageDistance d3 = accumulation_distance(c, {0.0, 3.0}, 6.0);
    CHECK(d3.set_to_values == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d3.values_to_set == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(accumulation_distance(a, {}, 2.0), Error);
    CHECK_THROWS_AS(accumulation_distance(a, {9.0}, 2.0), Error);
}

TEST_CASE("sampling coverage improves with the sample count") {
    // Isolated 0 floors the coverage at dist(0, S \ {0}); monotone decrease
    // is still required.
    TargetSet iso = make_target_set(true, {0.5}, {{1.0, 2.0}}, 10.0);
    double prev = 1e300;
    for (int count : {16, 64, 256}) {
        SamplingSequence seq = sample_sequence(iso, count);
        CoverageDistance d = accumulation_distance(iso, seq.values, 5.0);
        CHECK(d.set_to_values <= prev);
        CHECK(d.values_to_set <= 1e-12);
        prev = d.set_to_values;
    }
    CHECK(prev <= 0.5 + 1e-12); // the floor from covering 0 with positive samples

    // Non-isolated 0: coverage genuinely converges to 0.
    TargetSet touching = make_target_set(true, {}, {{0.0, 2.0}}, 10.0);
    prev = 1e300;
    for (int count : {16, 64, 256}) {
        SamplingSequence seq = sample_sequence(touching, count);
        CoverageDistance d = accumulation_distance(touching, seq.values, 5.0);
        CHECK(d.set_to_values <= prev);
        prev = d.set_to_values;
    }
    CHECK(prev < 0.05);
}
