#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "driftwalk/exact_solver.hpp"
#include "driftwalk/simulator.hpp"

#include <cmath>

using namespace driftwalk;

TEST_CASE("walks are reproducible per seed") {
    const LineEnvironment env =
        LineEnvironment::ceil_construction(Probability::parse("3/4"), kHalf);
    const WalkSummary a = run_walk(env, 0, 5000, 1234, /*record_path=*/true);
    const WalkSummary b = run_walk(env, 0, 5000, 1234, /*record_path=*/true);
    CHECK(a.final_pos == b.final_pos);
    CHECK(a.path == b.path);
    REQUIRE(a.path.size() == 5001);

    const WalkSummary c = run_walk(env, 0, 5000, 1235);
    CHECK(c.path.empty());  // paths only on request
    CHECK((c.final_pos != a.final_pos || c.min_pos != a.min_pos || c.max_pos != a.max_pos));
}

TEST_CASE("walk moves by one per step and respects extremes") {
    const LineEnvironment env = LineEnvironment::driftless();
    const WalkSummary w = run_walk(env, 0, 2000, 99, /*record_path=*/true);
    for (size_t i = 0; i + 1 < w.path.size(); ++i)
        CHECK(std::abs(w.path[i + 1] - w.path[i]) == 1);
    CHECK(w.min_pos == *std::min_element(w.path.begin(), w.path.end()));
    CHECK(w.max_pos == *std::max_element(w.path.begin(), w.path.end()));
}

TEST_CASE("an everywhere-drifting deterministic environment moves at speed one") {
    const LineEnvironment all = LineEnvironment::periodic(1, {0}, Probability::parse("1"));
    const WalkSummary w = run_walk(all, 0, 1000, 5);
    CHECK(w.final_pos == 1000);
    const SpeedEstimate est = estimate_speed(all, 1000, 4, 5);
    CHECK(est.mean == 1.0);
    CHECK(est.stderr_ == 0.0);
}

TEST_CASE("deterministic segment hits in exactly N steps") {
    // Reflection at 0 forces a right step; p = 1 drifts force the rest.
    const FiniteEnvironment env(2, Probability::parse("1"), {1});
    for (uint64_t seed : {1ULL, 2ULL, 3ULL})
        CHECK(sample_hitting_time(env, seed) == 2);
}

TEST_CASE("segment walk freezes at absorption") {
    const FiniteEnvironment env(2, Probability::parse("1"), {1});
    const WalkSummary w = run_walk(env, 0, 50, 9, /*record_path=*/true);
    CHECK(w.final_pos == 2);
    CHECK(w.steps_taken == 2);
    CHECK(w.path == std::vector<int64_t>{0, 1, 2});
}

TEST_CASE("hitting-time aggregation matches the exact solver") {
    const FiniteEnvironment env(6, Probability::parse("3/4"), {2, 4});
    const Rational exact = solve_expected_hitting(env).v[0];
    const HittingTimeStats stats = sample_hitting_times(env, 20000, 424242);
    CHECK(stats.completed == stats.reps);
    CHECK(stats.capped == 0);
    CHECK(std::abs(stats.mean - to_double(exact)) <= 4.0 * stats.stderr_);

    // The aggregate is a pure function of the per-rep streams.
    const HittingTimeStats again = sample_hitting_times(env, 20000, 424242);
    CHECK(again.samples == stats.samples);
    CHECK(again.mean == stats.mean);
}

TEST_CASE("threading does not change the samples") {
    const FiniteEnvironment env(6, Probability::parse("3/4"), {2, 4});
    const HittingTimeStats one = sample_hitting_times(env, 4000, 77, kDefaultCap, 1);
    const HittingTimeStats four = sample_hitting_times(env, 4000, 77, kDefaultCap, 4);
    CHECK(one.samples == four.samples);
    CHECK(one.mean == four.mean);
}

TEST_CASE("caps are reported, not errors") {
    // A driftless line walk almost never covers 10^4 sites in 100 steps.
    const LineEnvironment env = LineEnvironment::driftless();
    CHECK_FALSE(sample_hitting_time(env, 0, 10000, 3, /*cap=*/100).has_value());

    const FiniteEnvironment seg(40, Probability::parse("3/4"), {20});
    const HittingTimeStats stats = sample_hitting_times(seg, 50, 5, /*cap=*/3);
    CHECK(stats.capped == 50);
    CHECK(stats.completed == 0);
    for (int64_t s : stats.samples) CHECK(s == -1);
}

TEST_CASE("line hitting times from a moved start") {
    const LineEnvironment all = LineEnvironment::periodic(1, {0}, Probability::parse("1"));
    CHECK(sample_hitting_time(all, 3, 10, 1) == 7);
    CHECK(sample_hitting_time(all, 10, 10, 1) == 0);
}

TEST_CASE("coupling identical environments gives identical paths") {
    const LineEnvironment env =
        LineEnvironment::ceil_construction(Probability::parse("3/4"), kHalf);
    const CoupledRun run = coupled_run(env, env, 2000, 31);
    CHECK(run.lower_path == run.upper_path);
    CHECK(run.dominated);
    CHECK(run.first_violation == -1);
}

TEST_CASE("coupling dominates across ordered environments") {
    const LineEnvironment lower = LineEnvironment::driftless();
    const LineEnvironment upper =
        LineEnvironment::ceil_construction(Probability::parse("3/4"), kHalf);
    for (uint64_t seed = 0; seed < 10; ++seed) {
        const CoupledRun run = coupled_run(lower, upper, 5000, seed);
        CHECK(run.dominated);
        REQUIRE(run.lower_path.size() == run.upper_path.size());
        for (size_t i = 0; i < run.lower_path.size(); ++i)
            CHECK(run.upper_path[i] >= run.lower_path[i]);
    }
}

TEST_CASE("coupling rejects environments that are not pointwise ordered") {
    const LineEnvironment drifted =
        LineEnvironment::ceil_construction(Probability::parse("3/4"), kHalf);
    CHECK_THROWS_AS(coupled_run(drifted, LineEnvironment::driftless(), 100, 1),
                    std::invalid_argument);
}

TEST_CASE("escape diagnostic on canonical environments") {
    CHECK(transience_stat(LineEnvironment::driftless(), 500).verdict ==
          TransienceVerdict::DivergentLooking);

    // A deterministic drift kills every later product.
    const LineEnvironment wall = LineEnvironment::explicit_sites(
        {{3, Rational(1)}}, Probability::parse("1"));
    const TransienceReport rep = transience_stat(wall, 200);
    CHECK(rep.verdict == TransienceVerdict::FiniteLooking);
    CHECK(rep.partial_sums.back() == rep.partial_sums[50]);

    const TransienceReport spaced =
        transience_stat(LineEnvironment::equally_spaced(2, Probability::parse("3/4")), 400);
    CHECK(spaced.verdict == TransienceVerdict::FiniteLooking);
    CHECK(spaced.partial_sums.back() < 10.0);
}

TEST_CASE("speed estimates concentrate as walks lengthen") {
    const LineEnvironment env = LineEnvironment::equally_spaced(4, Probability::parse("3/4"));
    const SpeedEstimate coarse = estimate_speed(env, 1000, 30, 6);
    const SpeedEstimate fine = estimate_speed(env, 50000, 30, 6);
    CHECK(fine.stderr_ < coarse.stderr_);
    CHECK(std::abs(fine.mean - 0.125) < 0.01);
}

TEST_CASE("iid placement speed estimates near the closed form") {
    const SpeedEstimate est =
        estimate_iid_speed(Probability::parse("3/4"), kHalf, 20000, 40, 13);
    CHECK(std::abs(est.mean - 0.2) <= 4.0 * est.stderr_);
}
