#pragma once

#include "driftwalk/environment.hpp"
#include "driftwalk/rational.hpp"

#include <optional>
#include <vector>

namespace driftwalk {

/// Exact absorption moments for a finite segment.  v[x] is the expected time
/// to reach N from x; w[x] (when requested) is the second moment of that time.
struct HittingSolution {
    std::vector<Rational> v;                  // size N+1, v[N] = 0
    std::optional<std::vector<Rational>> w;   // size N+1 when computed
};

/// Expected absorption time from every site, solved in O(N) exact arithmetic:
/// the one-step relations collapse to a first-order sweep over the decrements
/// d(x) = v(x) - v(x+1), with d(0) = 1 pinned by the reflecting wall.
HittingSolution solve_expected_hitting(const FiniteEnvironment& env);

/// Same solve including second moments (same sweep applied twice).
HittingSolution solve_second_moment(const FiniteEnvironment& env);

/// Double-precision view of v for large N where exact output is not needed.
std::vector<double> solve_expected_hitting_f(const FiniteEnvironment& env);

/// Sanity report for the driftless segment: the expected absorption time from
/// 0 must equal N^2 exactly, and its second moment must be <= (5/3) N^4.
struct MomentCheckReport {
    int64_t N = 0;
    Rational mean;
    Rational second_moment;
    bool mean_is_n_squared = false;
    bool second_moment_bounded = false;
};
MomentCheckReport reflected_srw_moment_check(int64_t N);

/// Between consecutive drift sites the expectation is the quadratic
/// v(x) = -x^2 + C_j x + D_j on [l_{j-1}, l_j] (piece j = 1..k+1, with
/// l_0 = 0, l_{k+1} = N).  Coefficients are O(k) closed forms in the drift
/// positions; drift positions may be any rationals 0 < l_1 < ... < l_k < N.
struct PiecewiseQuadratic {
    std::vector<Rational> C;  // C[j-1] holds C_j, j = 1..k+1
    std::vector<Rational> D;
};
PiecewiseQuadratic closed_form_coeffs(const Rational& N, const Probability& p,
                                      const std::vector<Rational>& drifts);

/// f(l) = expected absorption time from 0 as a function of the drift
/// positions: the D_1 coefficient alone, evaluated in O(k).
Rational closed_form_expectation(const Rational& N, const Probability& p,
                                 const std::vector<Rational>& drifts);

}  // namespace driftwalk
