#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "driftwalk/environment.hpp"
#include "driftwalk/rng.hpp"

#include <cmath>

using namespace driftwalk;

TEST_CASE("probability validates and parses") {
    CHECK(Probability::parse("3/4").value() == Rational(3, 4));
    CHECK(Probability::parse("1").value() == 1);
    CHECK(Probability(Rational(1, 2)).value() == kHalf);
    CHECK_THROWS_AS(Probability(Rational(5, 4)), std::invalid_argument);
    CHECK_THROWS_AS(Probability(Rational(-1, 4)), std::invalid_argument);
    CHECK_THROWS_AS(Probability::parse("0.75"), std::invalid_argument);
}

TEST_CASE("finite environment basics") {
    FiniteEnvironment env(8, Probability::parse("3/4"), {3, 5});
    CHECK(env.N() == 8);
    CHECK(env.right_prob(0) == 1);
    CHECK(env.right_prob(3) == Rational(3, 4));
    CHECK(env.right_prob(4) == kHalf);
    CHECK(env.is_drift(5));
    CHECK_FALSE(env.is_drift(6));
    CHECK_THROWS_AS(env.right_prob(8), std::out_of_range);
    CHECK(env.interval_lengths() == std::vector<int64_t>{3, 2, 3});

    const auto round = FiniteEnvironment::from_interval_lengths(env.p(), {3, 2, 3});
    CHECK(round.drifts() == env.drifts());
    CHECK(round.N() == env.N());
}

TEST_CASE("finite environment validation") {
    const Probability p = Probability::parse("3/4");
    CHECK_THROWS_AS(FiniteEnvironment(0, p, {}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteEnvironment(4, Probability::parse("1/2"), {}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteEnvironment(4, p, {0}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteEnvironment(4, p, {4}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteEnvironment(4, p, {2, 2}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteEnvironment(4, p, {3, 1}), std::invalid_argument);
    CHECK_NOTHROW(FiniteEnvironment(1, Probability::parse("1"), {}));
}

TEST_CASE("ceil construction drift positions") {
    CHECK(ceil_drift_positions(Probability::parse("1"), Rational(1, 3), 4) ==
          std::vector<int64_t>{3, 6, 9, 12});
    CHECK(ceil_drift_positions(Probability::parse("3/4"), Rational(1, 2), 4) ==
          std::vector<int64_t>{3, 5, 7, 9});
    CHECK(ceil_drift_positions(Probability::parse("1"), Rational(2, 5), 4) ==
          std::vector<int64_t>{3, 5, 8, 10});
}

TEST_CASE("ceil membership agrees with the position list") {
    const Probability p = Probability::parse("3/4");
    const Rational lam(2, 5);
    const LineEnvironment env = LineEnvironment::ceil_construction(p, lam);
    const std::vector<int64_t> pos = ceil_drift_positions(p, lam, 40);
    size_t next = 0;
    for (int64_t x = -5; x <= pos.back(); ++x) {
        const bool expect = next < pos.size() && pos[next] == x;
        CHECK(env.is_drift(x) == expect);
        if (expect) ++next;
        CHECK(env.right_prob(x) == (expect ? p.value() : kHalf));
    }
    CHECK(next == pos.size());
}

TEST_CASE("equally spaced density and membership") {
    const LineEnvironment env = LineEnvironment::equally_spaced(4, Probability::parse("3/4"));
    CHECK(env.lambda() == Rational(1, 4));
    CHECK(env.is_drift(0));
    CHECK(env.is_drift(4));
    CHECK(env.is_drift(-8));
    CHECK_FALSE(env.is_drift(2));
    CHECK(density_prefix(env, 3) == Rational(1, 4));
    CHECK(density_prefix(env, 7) == Rational(1, 4));
}

TEST_CASE("prefix density examples") {
    const LineEnvironment half =
        LineEnvironment::periodic(2, {0}, Probability::parse("3/4"));
    CHECK(density_prefix(half, 3) == kHalf);  // drifts at 0, 2 among 4 sites

    const LineEnvironment ceil =
        LineEnvironment::ceil_construction(Probability::parse("3/4"), Rational(1, 2));
    CHECK(density_prefix(ceil, 9) == Rational(4, 10));  // drifts at 3, 5, 7, 9
}

TEST_CASE("prefix density converges to the declared density") {
    const LineEnvironment env =
        LineEnvironment::ceil_construction(Probability::parse("1"), Rational(2, 5));
    for (int64_t n : {100, 1000, 10000}) {
        const double err =
            std::abs(to_double(density_prefix(env, n)) - to_double(env.lambda()));
        CHECK(err <= 4.0 / static_cast<double>(n));
    }
}

TEST_CASE("upsilon interval lengths and pattern") {
    CHECK(upsilon_interval_lengths(2, Rational(2, 5)) == std::vector<int64_t>{2, 3});
    CHECK(upsilon_interval_lengths(2, Rational(1, 2)) == std::vector<int64_t>{2});
    CHECK(upsilon_interval_lengths(3, Rational(2, 7)) == std::vector<int64_t>{3, 4});

    const LineEnvironment env = LineEnvironment::upsilon(2, Rational(2, 5));
    CHECK(env.period() == 5);
    const std::vector<bool> expect{true, false, true, false, false};
    for (int64_t x = 0; x < 5; ++x) {
        CHECK(env.is_drift(x) == expect[static_cast<size_t>(x)]);
        CHECK(env.is_drift(x + 5) == expect[static_cast<size_t>(x)]);
        CHECK(env.is_drift(x - 10) == expect[static_cast<size_t>(x)]);
    }
    CHECK(density_prefix(env, 4) == Rational(2, 5));
    CHECK_THROWS_AS(LineEnvironment::upsilon(2, Rational(1, 4)), std::invalid_argument);
    CHECK_THROWS_AS(LineEnvironment::upsilon(2, Rational(3, 5)), std::invalid_argument);
}

TEST_CASE("shift relabels sites additively") {
    const LineEnvironment base =
        LineEnvironment::ceil_construction(Probability::parse("3/4"), Rational(1, 2));
    const LineEnvironment moved = base.shifted(4);
    for (int64_t x = -10; x <= 20; ++x) CHECK(moved.is_drift(x) == base.is_drift(x + 4));
    const LineEnvironment back = moved.shifted(-4);
    CHECK(back == base);
}

TEST_CASE("iid sample density and window behaviour") {
    const LineEnvironment env =
        LineEnvironment::iid_sample(Probability::parse("3/4"), kHalf, 20000, 77);
    int64_t drifts = 0;
    for (int64_t x = 0; x < 20000; ++x)
        if (env.is_drift(x)) ++drifts;
    const double freq = static_cast<double>(drifts) / 20000.0;
    const double sigma = std::sqrt(0.5 * 0.5 / 20000.0);
    CHECK(std::abs(freq - 0.5) <= 3.0 * sigma);
    CHECK(env.right_prob(-20000) >= kHalf);  // window is symmetric about 0
    CHECK_THROWS_AS(env.right_prob(20001), std::out_of_range);
    CHECK_THROWS_AS(env.right_prob(-20001), std::out_of_range);

    const LineEnvironment same =
        LineEnvironment::iid_sample(Probability::parse("3/4"), kHalf, 20000, 77);
    for (int64_t x = 0; x < 200; ++x) CHECK(same.is_drift(x) == env.is_drift(x));
}

TEST_CASE("structured density decomposition") {
    const auto d = StructuredDensity::decompose(Rational(2, 5));
    REQUIRE(d.has_value());
    CHECK(d->n == 2);
    CHECK(d->m == 2);
    CHECK(d->l == 1);
    CHECK(d->lambda() == Rational(2, 5));

    const auto quarter = StructuredDensity::decompose(Rational(1, 4));
    CHECK_FALSE(quarter.has_value());  // unit numerator: no interior offset
    CHECK_FALSE(StructuredDensity::decompose(Rational(3, 2)).has_value());

    const auto d2 = StructuredDensity::decompose(Rational(5, 11));
    REQUIRE(d2.has_value());
    CHECK(Rational(d2->n, d2->m * d2->n + d2->l) == Rational(5, 11));
}

TEST_CASE("stream seeds differ across indices and masters") {
    CHECK(derive_stream_seed(1, 0) != derive_stream_seed(1, 1));
    CHECK(derive_stream_seed(1, 0) != derive_stream_seed(2, 0));
    CHECK(derive_stream_seed(7, 3) == derive_stream_seed(7, 3));
}

TEST_CASE("exact bernoulli thresholds") {
    // u < num/den * 2^64 decides a success; check the boundary exactly at 1/2.
    CHECK(bernoulli_exact(0, 1, 2));
    CHECK(bernoulli_exact((1ULL << 63) - 1, 1, 2));
    CHECK_FALSE(bernoulli_exact(1ULL << 63, 1, 2));
    CHECK(bernoulli_exact(~0ULL, 1, 1));
    CHECK_FALSE(bernoulli_exact(0, 0, 1));
}
