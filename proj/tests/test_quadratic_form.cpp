#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "driftwalk/quadratic_form.hpp"
#include "driftwalk/rng.hpp"

#include <cmath>

using namespace driftwalk;

TEST_CASE("hessian entries at small sizes") {
    const RationalMatrix h1 = build_hessian(1, Probability::parse("1"));
    CHECK(h1[0][0] == 4);

    const RationalMatrix h2 = build_hessian(2, Probability::parse("1"));
    CHECK(h2[0][0] == 4);
    CHECK(h2[0][1] == -2);
    CHECK(h2[1][0] == -2);

    const RationalMatrix g2 = build_hessian(2, Probability::parse("3/4"));
    CHECK(g2[0][0] == Rational(8, 3));
    CHECK(g2[0][1] == Rational(-8, 9));

    const RationalMatrix g3 = build_hessian(3, Probability::parse("3/4"));
    CHECK(g3[0][2] == Rational(-8, 27));  // off-diagonals decay geometrically
}

TEST_CASE("determinants agree three ways and match hand values") {
    CHECK(hessian_determinant(1, Probability::parse("1")).closed_form == 4);
    CHECK(hessian_determinant(2, Probability::parse("1")).closed_form == 12);
    CHECK(hessian_determinant(3, Probability::parse("3/4")).closed_form ==
          Rational(10240, 729));

    for (const char* ps : {"3/5", "3/4", "1"})
        for (int64_t k = 1; k <= 12; ++k) {
            const DeterminantReport rep = hessian_determinant(k, Probability::parse(ps));
            CHECK(rep.closed_form == rep.recursion);
            CHECK(rep.closed_form == rep.elimination);
            CHECK(rep.closed_form > 0);
        }
}

TEST_CASE("leading principal minors are positive") {
    for (const char* ps : {"3/5", "9/10"}) {
        const auto minors =
            leading_principal_minors(build_hessian(10, Probability::parse(ps)));
        REQUIRE(minors.size() == 10);
        for (const Rational& m : minors) CHECK(m > 0);
    }
}

TEST_CASE("real minimizer positions") {
    CHECK(optimal_b(Rational(2), Probability::parse("1"), 1) ==
          std::vector<Rational>{Rational(1)});
    CHECK(optimal_b(Rational(4), Probability::parse("1"), 1) ==
          std::vector<Rational>{Rational(2)});
    CHECK(optimal_b(Rational(8), Probability::parse("3/4"), 2) ==
          std::vector<Rational>{Rational(3), Rational(5)});
}

TEST_CASE("integer feasibility") {
    CHECK(integer_feasible(2, Probability::parse("1"), 1));
    CHECK(integer_feasible(8, Probability::parse("3/4"), 2));
    CHECK_FALSE(integer_feasible(3, Probability::parse("1"), 1));
}

TEST_CASE("minimum value and the completed square") {
    CHECK(quadratic_minimum(Rational(4), Probability::parse("1"), 1) == 8);
    CHECK(quadratic_minimum(Rational(8), Probability::parse("3/4"), 2) == 32);

    const auto at_min =
        evaluate_quadratic_identity(Rational(4), Probability::parse("1"), {Rational(2)});
    CHECK(at_min.direct == 8);
    CHECK(at_min.via_form == 8);
    CHECK(at_min.residual == 0);

    // One step off the minimizer: the form contributes (1/2) * 4 * 1 = 2.
    const auto off =
        evaluate_quadratic_identity(Rational(4), Probability::parse("1"), {Rational(1)});
    CHECK(off.direct == 10);
    CHECK(off.via_form == 10);
    CHECK(off.residual == 0);

    const auto two =
        evaluate_quadratic_identity(Rational(8), Probability::parse("3/4"),
                                    {Rational(3), Rational(5)});
    CHECK(two.direct == 32);
    CHECK(two.residual == 0);
}

TEST_CASE("identity residual vanishes on random rational placements") {
    Xoshiro256pp rng = Xoshiro256pp::seeded(19);
    for (const char* ps : {"3/5", "3/4", "9/10", "1"}) {
        const Probability p = Probability::parse(ps);
        for (int rep = 0; rep < 25; ++rep) {
            const int64_t N = 5 + static_cast<int64_t>(rng.next() % 40);
            const int64_t k = 1 + static_cast<int64_t>(rng.next() % 4);
            std::vector<Rational> l;
            for (int64_t i = 0; i < k; ++i)
                l.push_back(Rational(1 + static_cast<int64_t>(rng.next() % 100), 101) +
                            i * Rational(N, k + 1));
            const auto id = evaluate_quadratic_identity(Rational(N), p, l);
            CHECK(id.residual == 0);
            CHECK(id.direct >= quadratic_minimum(Rational(N), p, k));
        }
    }
}

TEST_CASE("norm bound and power iteration") {
    CHECK(hessian_norm_bound(Probability::parse("1")) == 8);
    CHECK(hessian_norm_bound(Probability::parse("3/4")) == Rational(16, 3));

    const NormReport k1 = hessian_norm_report(1, Probability::parse("1"));
    CHECK(k1.estimate == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(k1.within_bound);

    // k = 2, p = 1: eigenvalues 2 and 6; the alternating start must find 6.
    const NormReport k2 = hessian_norm_report(2, Probability::parse("1"));
    CHECK(k2.estimate == doctest::Approx(6.0).epsilon(1e-8));

    const NormReport big = hessian_norm_report(200, Probability::parse("1"));
    CHECK(big.estimate < 8.0);
    CHECK(big.estimate > 7.0);  // the bound is asymptotically sharp
    CHECK(big.within_bound);

    const NormReport mid = hessian_norm_report(50, Probability::parse("3/4"));
    CHECK(mid.within_bound);
    CHECK(mid.estimate <= 16.0 / 3.0 + 1e-9);
}

TEST_CASE("rebalance descent flattens the gaps") {
    const Probability one = Probability::parse("1");

    const auto a = rebalance_descent(FiniteEnvironment::from_interval_lengths(one, {1, 5}));
    REQUIRE(a.moves.size() == 2);
    CHECK(a.moves[0].before - a.moves[0].after == 6);
    CHECK(a.moves[1].before - a.moves[1].after == 2);
    CHECK(a.initial_expectation == 26);
    CHECK(a.final_expectation == 18);
    CHECK(a.env.interval_lengths() == std::vector<int64_t>{3, 3});

    const auto b = rebalance_descent(FiniteEnvironment::from_interval_lengths(one, {2, 4}));
    REQUIRE(b.moves.size() == 1);
    CHECK(b.moves[0].before - b.moves[0].after == 2);
    CHECK(b.env.interval_lengths() == std::vector<int64_t>{3, 3});

    const auto c = rebalance_descent(FiniteEnvironment::from_interval_lengths(one, {3, 3}));
    CHECK(c.moves.empty());
    CHECK(c.initial_expectation == c.final_expectation);
}

TEST_CASE("rebalance prefers the leftmost eligible receiver") {
    const Probability one = Probability::parse("1");
    const auto res = rebalance_descent(FiniteEnvironment::from_interval_lengths(one, {3, 1, 5}));
    REQUIRE_FALSE(res.moves.empty());
    CHECK(res.moves[0].donor == 2);
    CHECK(res.moves[0].receiver == 0);  // index 0 already qualifies (3 <= 5 - 2)
    const auto lens = res.env.interval_lengths();
    const int64_t lo = *std::min_element(lens.begin(), lens.end());
    const int64_t hi = *std::max_element(lens.begin(), lens.end());
    CHECK(hi - lo <= 1);
}

TEST_CASE("rebalance terminal state is near-equal gaps") {
    Xoshiro256pp rng = Xoshiro256pp::seeded(8);
    const Probability one = Probability::parse("1");
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<int64_t> lens;
        const int64_t k = 2 + static_cast<int64_t>(rng.next() % 4);
        for (int64_t i = 0; i < k; ++i)
            lens.push_back(1 + static_cast<int64_t>(rng.next() % 9));
        const auto res = rebalance_descent(FiniteEnvironment::from_interval_lengths(one, lens));
        const auto out = res.env.interval_lengths();
        const int64_t lo = *std::min_element(out.begin(), out.end());
        const int64_t hi = *std::max_element(out.begin(), out.end());
        CHECK(hi - lo <= 1);
        CHECK(res.final_expectation <= res.initial_expectation);
    }
}

TEST_CASE("rebalance requires deterministic drifts") {
    CHECK_THROWS_AS(rebalance_descent(FiniteEnvironment(6, Probability::parse("3/4"), {1})),
                    std::invalid_argument);
}
