#include "driftwalk/quadratic_form.hpp"

#include "driftwalk/exact_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace driftwalk {

namespace {

void require_drift_strength(const Probability& p) {
    if (p.value() <= kHalf || p.value() > 1)
        throw std::invalid_argument("drift strength must satisfy 1/2 < p <= 1");
}

void require_k(int64_t k) {
    if (k < 1) throw std::invalid_argument("need at least one drift site");
}

}  // namespace

RationalMatrix build_hessian(int64_t k, const Probability& p) {
    require_k(k);
    require_drift_strength(p);
    const Rational t = 2 * p.value() - 1;
    const Rational diag = 4 * t / p.value();
    const Rational off = -2 * t * t / (p.value() * p.value());
    const Rational r = (1 - p.value()) / p.value();
    RationalMatrix h(static_cast<size_t>(k), std::vector<Rational>(static_cast<size_t>(k)));
    for (size_t i = 0; i < h.size(); ++i) {
        h[i][i] = diag;
        Rational pow = off;  // off * r^(|i-j|-1)
        for (size_t j = i + 1; j < h.size(); ++j) {
            h[i][j] = pow;
            h[j][i] = pow;
            pow *= r;
        }
    }
    return h;
}

RationalMatrix build_scaled_hessian(int64_t k, const Probability& p) {
    require_k(k);
    require_drift_strength(p);
    const Rational t = 2 * p.value() - 1;
    const Rational scale = -2 * t * t / (p.value() * p.value());
    RationalMatrix m = build_hessian(k, p);
    for (auto& row : m)
        for (auto& x : row) x /= scale;
    return m;
}

Rational determinant(RationalMatrix a) {
    const size_t n = a.size();
    for (const auto& row : a)
        if (row.size() != n) throw std::invalid_argument("determinant needs a square matrix");
    Rational det = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) return Rational(0);
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (size_t row = col + 1; row < n; ++row) {
            if (a[row][col] == 0) continue;
            const Rational factor = a[row][col] / a[col][col];
            for (size_t j = col; j < n; ++j) a[row][j] -= factor * a[col][j];
        }
    }
    return det;
}

std::vector<Rational> leading_principal_minors(const RationalMatrix& a) {
    std::vector<Rational> minors;
    minors.reserve(a.size());
    for (size_t n = 1; n <= a.size(); ++n) {
        RationalMatrix block(n, std::vector<Rational>(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) block[i][j] = a[i][j];
        minors.push_back(determinant(std::move(block)));
    }
    return minors;
}

DeterminantReport hessian_determinant(int64_t k, const Probability& p) {
    require_k(k);
    require_drift_strength(p);
    const Rational t = 2 * p.value() - 1;
    const Rational p2 = p.value() * p.value();

    DeterminantReport rep;
    rep.k = k;

    Rational pow2t = 1;  // (2t)^k
    Rational powp2 = 1;  // p^(2k)
    for (int64_t i = 0; i < k; ++i) {
        pow2t *= 2 * t;
        powp2 *= p2;
    }
    rep.closed_form = pow2t * (k * t + 1) / powp2;

    // Scaled-form determinants obey d_j = -(2/t) d_{j-1} - (1/t^2) d_{j-2}
    // (double root -1/t in the characteristic polynomial); rescale at the end.
    Rational d_prev = 1;                          // j = 0
    Rational d = -2 * p.value() / t;              // j = 1
    for (int64_t j = 2; j <= k; ++j) {
        const Rational d_next = -(2 / t) * d - d_prev / (t * t);
        d_prev = d;
        d = d_next;
    }
    const Rational scale = -2 * t * t / p2;       // H = scale * M
    Rational pow_scale = 1;
    for (int64_t i = 0; i < k; ++i) pow_scale *= scale;
    rep.recursion = pow_scale * d;

    rep.elimination = determinant(build_hessian(k, p));

    if (rep.closed_form != rep.recursion || rep.closed_form != rep.elimination)
        throw InternalError("determinant routes disagree at k=" + std::to_string(k) +
                            ", p=" + rational_str(p.value()));
    return rep;
}

Rational quadratic_minimum(const Rational& N, const Probability& p, int64_t k) {
    require_k(k);
    require_drift_strength(p);
    const Rational t = 2 * p.value() - 1;
    return N * N / (k * t + 1);
}

std::vector<Rational> optimal_b(const Rational& N, const Probability& p, int64_t k) {
    require_k(k);
    require_drift_strength(p);
    const Rational t = 2 * p.value() - 1;
    const Rational denom = k * t + 1;
    std::vector<Rational> b(static_cast<size_t>(k));
    for (int64_t i = 1; i <= k; ++i)
        b[static_cast<size_t>(i - 1)] = (i * t + (1 - p.value())) * N / denom;
    return b;
}

bool integer_feasible(int64_t N, const Probability& p, int64_t k) {
    require_k(k);
    require_drift_strength(p);
    const Rational t = 2 * p.value() - 1;
    const Rational denom = k * t + 1;
    // b_1 = pN/denom and every spacing b_{i+1} - b_i = tN/denom, so all of b
    // is integer exactly when those two are.
    return is_integer(t * N / denom) && is_integer(p.value() * N / denom);
}

QuadraticIdentity evaluate_quadratic_identity(const Rational& N, const Probability& p,
                                              const std::vector<Rational>& drifts) {
    const int64_t k = static_cast<int64_t>(drifts.size());
    require_k(k);
    QuadraticIdentity out;
    out.direct = closed_form_expectation(N, p, drifts);

    const RationalMatrix h = build_hessian(k, p);
    const std::vector<Rational> b = optimal_b(N, p, k);
    std::vector<Rational> delta(drifts.size());
    for (size_t i = 0; i < drifts.size(); ++i) delta[i] = drifts[i] - b[i];
    Rational quad = 0;
    for (size_t i = 0; i < delta.size(); ++i)
        for (size_t j = 0; j < delta.size(); ++j) quad += h[i][j] * delta[i] * delta[j];

    out.via_form = quadratic_minimum(N, p, k) + quad / 2;
    out.residual = out.direct - out.via_form;
    return out;
}

Rational hessian_norm_bound(const Probability& p) {
    require_drift_strength(p);
    return 8 * (2 * p.value() - 1) / p.value();
}

NormReport hessian_norm_report(int64_t k, const Probability& p) {
    require_k(k);
    require_drift_strength(p);
    const double pd = p.as_double();
    const double t = 2.0 * pd - 1.0;
    const double diag = 4.0 * t / pd;
    const double off = 2.0 * t * t / (pd * pd);  // magnitude; sign applied below
    const double r = (1.0 - pd) / pd;
    const size_t n = static_cast<size_t>(k);

    // (Hx)_i = diag*x_i - off*(u_i + w_i) with the geometric prefixes
    // u_i = sum_{j<i} r^(i-1-j) x_j and w_i the mirror suffix, both O(k).
    std::vector<double> x(n), y(n), u(n), w(n);
    for (size_t i = 0; i < n; ++i)
        x[i] = ((i % 2 == 0) ? 1.0 : -1.0) * (1.0 + static_cast<double>(i) / static_cast<double>(n));

    const auto norm2 = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double a : v) s += a * a;
        return std::sqrt(s);
    };

    NormReport rep;
    rep.k = k;
    rep.bound = to_double(hessian_norm_bound(p));

    double est = 0.0;
    const int64_t max_iter = 100000;
    for (rep.iterations = 1; rep.iterations <= max_iter; ++rep.iterations) {
        const double xn = norm2(x);
        for (auto& a : x) a /= xn;
        u[0] = 0.0;
        for (size_t i = 1; i < n; ++i) u[i] = r * u[i - 1] + x[i - 1];
        w[n - 1] = 0.0;
        for (size_t i = n - 1; i-- > 0;) w[i] = r * w[i + 1] + x[i + 1];
        for (size_t i = 0; i < n; ++i) y[i] = diag * x[i] - off * (u[i] + w[i]);
        const double next = norm2(y);
        const bool settled = std::abs(next - est) <= 1e-10 * std::max(1.0, next);
        est = next;
        x.swap(y);
        if (settled) break;
    }
    rep.estimate = est;
    rep.within_bound = est <= rep.bound * (1.0 + 1e-12);
    return rep;
}

RebalanceResult rebalance_descent(const FiniteEnvironment& start) {
    if (start.p().value() != 1)
        throw std::invalid_argument("rebalancing assumes deterministic drifts (p = 1)");
    std::vector<int64_t> lengths = start.interval_lengths();

    const auto expectation = [&](const std::vector<int64_t>& ls) {
        return solve_expected_hitting(FiniteEnvironment::from_interval_lengths(start.p(), ls))
            .v[0];
    };

    RebalanceResult out{start, {}, expectation(lengths), Rational(0)};
    Rational current = out.initial_expectation;
    for (;;) {
        const int64_t max_len = *std::max_element(lengths.begin(), lengths.end());
        // Leftmost interval short enough that taking a unit from a longest one
        // is a strict improvement; the longest interval itself is the donor.
        const auto receiver = std::find_if(lengths.begin(), lengths.end(),
                                           [&](int64_t l) { return l <= max_len - 2; });
        if (receiver == lengths.end()) break;
        const auto donor = std::find(lengths.begin(), lengths.end(), max_len);
        RebalanceMove move;
        move.donor = donor - lengths.begin();
        move.receiver = receiver - lengths.begin();
        move.donor_len = *donor;
        move.receiver_len = *receiver;
        move.before = current;
        --*donor;
        ++*receiver;
        move.after = expectation(lengths);
        // Moving one unit between gaps of lengths j > i changes the sum of
        // squared gaps by exactly -2(j - i - 1); the exact solve must agree.
        if (move.before - move.after != 2 * (move.donor_len - move.receiver_len - 1))
            throw InternalError("rebalance move dropped the expectation by the wrong amount");
        current = move.after;
        out.moves.push_back(std::move(move));
    }
    out.final_expectation = current;
    out.env = FiniteEnvironment::from_interval_lengths(start.p(), lengths);
    return out;
}

}  // namespace driftwalk
