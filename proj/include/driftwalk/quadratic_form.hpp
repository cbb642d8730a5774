#pragma once

#include "driftwalk/environment.hpp"
#include "driftwalk/rational.hpp"

#include <cstdint>
#include <vector>

namespace driftwalk {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Hessian of the expected absorption time f(l) in the k drift positions:
/// H(i,i) = 4(2p-1)/p, H(i,j) = -2((2p-1)/p)^2 * ((1-p)/p)^(|i-j|-1).
/// Constant in l because f is exactly quadratic.
RationalMatrix build_hessian(int64_t k, const Probability& p);

/// H divided by -2((2p-1)/p)^2: ones-adjacent Toeplitz form with
/// -2p/(2p-1) on the diagonal and ((1-p)/p)^(|i-j|-1) off it.
RationalMatrix build_scaled_hessian(int64_t k, const Probability& p);

/// Exact determinant by fraction Gaussian elimination with partial pivoting.
Rational determinant(RationalMatrix a);

/// Determinants of the top-left 1x1 .. nxn blocks (positive-definiteness check).
std::vector<Rational> leading_principal_minors(const RationalMatrix& a);

/// det H_k three independent ways; any disagreement throws InternalError.
struct DeterminantReport {
    int64_t k = 0;
    Rational closed_form;  // 2^k (2p-1)^k (k(2p-1)+1) / p^(2k)
    Rational recursion;    // two-term recurrence on the scaled form, rescaled
    Rational elimination;  // Gaussian elimination on the built matrix
};
DeterminantReport hessian_determinant(int64_t k, const Probability& p);

/// Minimum of f over real drift positions: N^2 / ((2p-1)k + 1).
Rational quadratic_minimum(const Rational& N, const Probability& p, int64_t k);

/// Real minimizer: b_i = ((2p-1)i + (1-p)) N / ((2p-1)k + 1), i = 1..k.
std::vector<Rational> optimal_b(const Rational& N, const Probability& p, int64_t k);

/// Whether the real minimizer has all-integer coordinates, i.e. whether the
/// unconstrained optimum is attainable by an actual site layout.  Equivalent
/// to (2p-1)N and pN both divisible by (2p-1)k + 1 (as rationals).
bool integer_feasible(int64_t N, const Probability& p, int64_t k);

/// f(l) computed directly versus through the completed square
/// N^2/((2p-1)k+1) + (1/2) <H (l-b), (l-b)>.  The residual is exact and must
/// be zero; it is returned rather than asserted so callers can display it.
struct QuadraticIdentity {
    Rational direct;
    Rational via_form;
    Rational residual;
};
QuadraticIdentity evaluate_quadratic_identity(const Rational& N, const Probability& p,
                                              const std::vector<Rational>& drifts);

/// Row-sum bound on the spectral norm: ||H_k||_2 <= 8(2p-1)/p for every k.
Rational hessian_norm_bound(const Probability& p);

/// Spectral norm estimate by power iteration (O(k) matvec via the geometric
/// structure of the off-diagonals).  The start vector alternates signs --
/// the top eigenvector oscillates, and sign-constant vectors can be exactly
/// orthogonal to it (k = 2 is (1, -1)) -- which guarantees a nonzero
/// component along it.  The estimate is a lower bound on the true norm.
struct NormReport {
    int64_t k = 0;
    double estimate = 0.0;
    double bound = 0.0;  // 8(2p-1)/p as a double
    int64_t iterations = 0;
    bool within_bound = false;
};
NormReport hessian_norm_report(int64_t k, const Probability& p);

/// One step of the deterministic-drift (p = 1) balancing descent: a unit of
/// length moved from the donor gap to the receiver gap.
struct RebalanceMove {
    int64_t donor = 0;     // leftmost gap of maximal length
    int64_t receiver = 0;  // leftmost gap at least two shorter than the donor
    int64_t donor_len = 0;
    int64_t receiver_len = 0;
    Rational before;  // exact expected absorption time before / after the move
    Rational after;
};

/// Rebalances gaps until they differ by at most one, which is optimal for
/// p = 1 where the expected absorption time is the sum of squared gaps.
/// Every move is re-solved exactly and must drop the expectation by exactly
/// 2(donor_len - receiver_len - 1); any other drop throws InternalError.
struct RebalanceResult {
    FiniteEnvironment env;
    std::vector<RebalanceMove> moves;
    Rational initial_expectation;
    Rational final_expectation;
};
RebalanceResult rebalance_descent(const FiniteEnvironment& start);

}  // namespace driftwalk
