#pragma once

#include "driftwalk/environment.hpp"
#include "driftwalk/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace driftwalk {

/// Ceiling of the almost-sure speed over every environment with drift
/// strength p and density lambda: (2p-1) * lambda, exact.
Rational speed_upper_bound(const Probability& p, const Rational& lambda);

/// Almost-sure speed of the upsilon layout at p = 1:
/// 1 / (2m + 1 - m(m+1) lambda).  Needs lambda in [1/(m+1), 1/m].
Rational upsilon_speed(int64_t m, const Rational& lambda);

/// How far the upsilon speed falls short of the ceiling (2p-1)lambda = lambda
/// at p = 1, for lambda = n/(mn+l).  The subtraction is authoritative; the
/// two rearrangements are carried along because only one of them agrees with
/// it (see GapReport field comments).
struct GapReport {
    int64_t n = 0, m = 0, l = 0;
    Rational lambda;
    Rational gap;          // lambda - upsilon_speed, exact subtraction
    Rational closed_form;  // l(n-l) / ((mn+l)(m^2 n + 2ml + l)); equals gap
    /// lambda^3 (l(n-l)/n^2) / (1 + l(n-l)/(mn+l)^2); equals gap.
    Rational corrected_rearrangement;
    /// Same with a minus in the denominator.  Does NOT equal the gap
    /// (n=2, m=2, l=1: 1/60 against the true 1/65); kept so the discrepancy
    /// stays visible and tested instead of silently papered over.
    Rational printed_rearrangement;
    Rational lower_bound;  // lambda^3 (1/n - 1/n^2) / 2, always <= gap
};
GapReport tightness_gap(int64_t n, int64_t m, int64_t l);

/// The competing annealed bound: S(p,lambda) and its reciprocal.
/// S = p^-lambda 2^(1-lambda) r^lambda/(1-r^lambda) + lambda/p + 2(1-lambda)
/// with r = (1-p)/p; the geometric term vanishes at p = 1.
struct JensenBound {
    double S = 0.0;
    double bound = 0.0;  // 1/S
};
JensenBound jensen_rwre_bound(const Probability& p, const Rational& lambda);

/// Speed of the walk when every site drifts independently with probability
/// lambda: (2p-1) lambda / (lambda + 2p(1-lambda)), exact.  Strictly below
/// speed_upper_bound for 0 < lambda < 1.
Rational iid_rwre_speed(const Probability& p, const Rational& lambda);

/// Everything about one (p, lambda) point in one record.
struct BoundReport {
    Rational p;
    Rational lambda;
    Rational main_bound;   // (2p-1) lambda
    double jensen_bound = 0.0;
    Rational iid_speed;
    std::string winner;    // "main" or "jensen", whichever is smaller
};
BoundReport compare_bounds(const Probability& p, const Rational& lambda);

/// One cell of the bound-difference scan.
struct GridCell {
    Rational p;
    Rational lambda;
    double main = 0.0;
    double jensen = 0.0;
    double diff = 0.0;  // main - jensen; negative where the main bound wins
};

/// (resolution+1)^2 cells over [p_min, p_max] x [lambda_min, lambda_max],
/// both ends included, row-major with p varying slowest.  Ranges must stay
/// inside (1/2, 1) x (0, 1].
std::vector<GridCell> bound_diff_grid(const Rational& p_min, const Rational& p_max,
                                      const Rational& lambda_min, const Rational& lambda_max,
                                      int64_t resolution);

}  // namespace driftwalk
