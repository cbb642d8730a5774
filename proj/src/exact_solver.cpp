#include "driftwalk/exact_solver.hpp"

namespace driftwalk {

namespace {

// Right-step probabilities for interior sites, walked in order without
// repeated binary searches.
class InteriorProbs {
public:
    explicit InteriorProbs(const FiniteEnvironment& env)
        : p_(env.p().value()), drifts_(env.drifts()) {}

    // q at site x; call with x strictly increasing.
    const Rational& at(int64_t x) {
        if (next_ < drifts_.size() && drifts_[next_] == x) {
            ++next_;
            return p_;
        }
        return kHalf;
    }

private:
    Rational p_;
    const std::vector<int64_t>& drifts_;
    size_t next_ = 0;
};

}  // namespace

HittingSolution solve_expected_hitting(const FiniteEnvironment& env) {
    const int64_t N = env.N();
    // d(x) = v(x) - v(x+1).  The reflecting wall pins d(0) = 1, and the
    // one-step relation at interior x gives q d(x) = (1-q) d(x-1) + 1.
    std::vector<Rational> d(static_cast<size_t>(N));
    d[0] = 1;
    InteriorProbs probs(env);
    for (int64_t x = 1; x < N; ++x) {
        const Rational& q = probs.at(x);
        d[static_cast<size_t>(x)] = ((1 - q) * d[static_cast<size_t>(x - 1)] + 1) / q;
    }
    std::vector<Rational> v(static_cast<size_t>(N) + 1);
    v[static_cast<size_t>(N)] = 0;
    for (int64_t x = N - 1; x >= 0; --x)
        v[static_cast<size_t>(x)] = v[static_cast<size_t>(x + 1)] + d[static_cast<size_t>(x)];
    return {std::move(v), std::nullopt};
}

HittingSolution solve_second_moment(const FiniteEnvironment& env) {
    HittingSolution sol = solve_expected_hitting(env);
    const int64_t N = env.N();
    const std::vector<Rational>& v = sol.v;
    // Same collapse for the second moment: with e(x) = w(x) - w(x+1),
    // conditioning on the first step gives q e(x) = (1-q) e(x-1) + g(x) where
    // g(x) = 1 + 2 (q v(x+1) + (1-q) v(x-1)), and e(0) = 1 + 2 v(1).
    std::vector<Rational> e(static_cast<size_t>(N));
    e[0] = 1 + 2 * v[1];
    InteriorProbs probs(env);
    for (int64_t x = 1; x < N; ++x) {
        const Rational& q = probs.at(x);
        const Rational g =
            1 + 2 * (q * v[static_cast<size_t>(x + 1)] + (1 - q) * v[static_cast<size_t>(x - 1)]);
        e[static_cast<size_t>(x)] = ((1 - q) * e[static_cast<size_t>(x - 1)] + g) / q;
    }
    std::vector<Rational> w(static_cast<size_t>(N) + 1);
    w[static_cast<size_t>(N)] = 0;
    for (int64_t x = N - 1; x >= 0; --x)
        w[static_cast<size_t>(x)] = w[static_cast<size_t>(x + 1)] + e[static_cast<size_t>(x)];
    sol.w = std::move(w);
    return sol;
}

std::vector<double> solve_expected_hitting_f(const FiniteEnvironment& env) {
    const int64_t N = env.N();
    std::vector<double> d(static_cast<size_t>(N));
    d[0] = 1.0;
    const std::vector<double> table = env.prob_table();
    for (int64_t x = 1; x < N; ++x) {
        const double q = table[static_cast<size_t>(x)];
        d[static_cast<size_t>(x)] = ((1.0 - q) * d[static_cast<size_t>(x - 1)] + 1.0) / q;
    }
    std::vector<double> v(static_cast<size_t>(N) + 1);
    v[static_cast<size_t>(N)] = 0.0;
    for (int64_t x = N - 1; x >= 0; --x)
        v[static_cast<size_t>(x)] = v[static_cast<size_t>(x + 1)] + d[static_cast<size_t>(x)];
    return v;
}

MomentCheckReport reflected_srw_moment_check(int64_t N) {
    const FiniteEnvironment srw(N, Probability(Rational(1)), {});
    const HittingSolution sol = solve_second_moment(srw);
    MomentCheckReport rep;
    rep.N = N;
    rep.mean = sol.v[0];
    rep.second_moment = (*sol.w)[0];
    rep.mean_is_n_squared = (rep.mean == Rational(N) * N);
    rep.second_moment_bounded =
        (3 * rep.second_moment <= 5 * Rational(N) * N * Rational(N) * N);
    return rep;
}

PiecewiseQuadratic closed_form_coeffs(const Rational& N, const Probability& p,
                                      const std::vector<Rational>& drifts) {
    if (p.value() <= kHalf || p.value() > 1)
        throw std::invalid_argument("drift strength must satisfy 1/2 < p <= 1");
    Rational prev = 0;
    for (const Rational& l : drifts) {
        if (l <= prev || l >= N)
            throw std::invalid_argument("drift positions must be strictly increasing in (0, N)");
        prev = l;
    }
    const size_t k = drifts.size();
    const Rational r = (1 - p.value()) / p.value();
    const Rational c2 = 2 * (2 * p.value() - 1) / p.value();

    // G_j = sum_{i<j} r^(j-1-i) l_i via the first-order recurrence; all the
    // geometric sums in the coefficients reduce to these prefixes.
    std::vector<Rational> G(k + 1);
    G[0] = 0;  // G_1
    for (size_t j = 1; j <= k; ++j) G[j] = r * G[j - 1] + drifts[j - 1];

    Rational sum_sq = 0, cross = 0;
    for (size_t i = 0; i < k; ++i) {
        sum_sq += drifts[i] * drifts[i];
        cross += drifts[i] * G[i];
    }

    PiecewiseQuadratic pq;
    pq.C.resize(k + 1);
    pq.D.resize(k + 1);
    for (size_t j = 0; j <= k; ++j) pq.C[j] = c2 * G[j];
    pq.D[0] = N * N - c2 * N * G[k] + c2 * sum_sq - c2 * (2 * p.value() - 1) / p.value() * cross;
    for (size_t j = 0; j + 1 <= k; ++j)
        pq.D[j + 1] = pq.D[j] + (pq.C[j] - pq.C[j + 1]) * drifts[j];
    // The last piece must vanish at N; anything else means the closed forms
    // above have drifted from the defining equations.
    if (pq.D[k] != N * N - pq.C[k] * N)
        throw InternalError("piecewise coefficients fail the boundary condition at N");
    return pq;
}

Rational closed_form_expectation(const Rational& N, const Probability& p,
                                 const std::vector<Rational>& drifts) {
    return closed_form_coeffs(N, p, drifts).D[0];
}

}  // namespace driftwalk
