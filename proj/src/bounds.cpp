#include "driftwalk/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace driftwalk {

namespace {

void require_density(const Rational& lambda, bool allow_zero) {
    if (lambda < 0 || lambda > 1 || (!allow_zero && lambda == 0))
        throw std::invalid_argument("density out of range: " + rational_str(lambda));
}

void require_drift_strength(const Probability& p) {
    if (p.value() <= kHalf || p.value() > 1)
        throw std::invalid_argument("drift strength must satisfy 1/2 < p <= 1");
}

}  // namespace

Rational speed_upper_bound(const Probability& p, const Rational& lambda) {
    require_drift_strength(p);
    require_density(lambda, /*allow_zero=*/true);
    return (2 * p.value() - 1) * lambda;
}

Rational upsilon_speed(int64_t m, const Rational& lambda) {
    if (m < 1) throw std::invalid_argument("interval scale m must be >= 1");
    if (lambda < Rational(1, m + 1) || lambda > Rational(1, m))
        throw std::invalid_argument("density " + rational_str(lambda) + " not in [1/" +
                                    std::to_string(m + 1) + ", 1/" + std::to_string(m) + "]");
    return 1 / (2 * m + 1 - m * (m + 1) * lambda);
}

GapReport tightness_gap(int64_t n, int64_t m, int64_t l) {
    if (n <= 1) throw std::invalid_argument("numerator n must exceed 1");
    if (m < 1) throw std::invalid_argument("interval scale m must be >= 1");
    if (l <= 0 || l >= n) throw std::invalid_argument("offset l must satisfy 0 < l < n");

    GapReport rep;
    rep.n = n;
    rep.m = m;
    rep.l = l;
    rep.lambda = Rational(n, m * n + l);
    rep.gap = rep.lambda - upsilon_speed(m, rep.lambda);

    const Rational q = m * Rational(n) + l;               // mn + l
    const Rational spread = Rational(l) * (n - l);        // l(n-l)
    rep.closed_form = spread / (q * (m * m * Rational(n) + 2 * m * l + l));
    const Rational lam3 = rep.lambda * rep.lambda * rep.lambda;
    const Rational core = lam3 * spread / (Rational(n) * n);
    rep.corrected_rearrangement = core / (1 + spread / (q * q));
    rep.printed_rearrangement = core / (1 - spread / (q * q));
    rep.lower_bound = lam3 * (Rational(1, n) - Rational(1, Rational(n) * n)) / 2;

    if (rep.gap != rep.closed_form || rep.gap != rep.corrected_rearrangement)
        throw InternalError("gap forms disagree at n=" + std::to_string(n) +
                            ", m=" + std::to_string(m) + ", l=" + std::to_string(l));
    if (rep.gap <= 0 || rep.gap < rep.lower_bound)
        throw InternalError("gap fell outside its proven range");
    return rep;
}

JensenBound jensen_rwre_bound(const Probability& p, const Rational& lambda) {
    require_drift_strength(p);
    require_density(lambda, /*allow_zero=*/false);
    const double pd = p.as_double();
    const double lam = to_double(lambda);
    JensenBound out;
    if (p.value() == 1) {
        out.S = lam + 2.0 * (1.0 - lam);  // geometric term is exactly 0
    } else {
        const double r = (1.0 - pd) / pd;
        const double rl = std::pow(r, lam);
        out.S = std::pow(pd, -lam) * std::pow(2.0, 1.0 - lam) * (rl / (1.0 - rl)) +
                lam / pd + 2.0 * (1.0 - lam);
    }
    out.bound = 1.0 / out.S;
    return out;
}

Rational iid_rwre_speed(const Probability& p, const Rational& lambda) {
    require_drift_strength(p);
    require_density(lambda, /*allow_zero=*/true);
    if (lambda == 0) return Rational(0);
    return (2 * p.value() - 1) * lambda / (lambda + 2 * p.value() * (1 - lambda));
}

BoundReport compare_bounds(const Probability& p, const Rational& lambda) {
    BoundReport rep;
    rep.p = p.value();
    rep.lambda = lambda;
    rep.main_bound = speed_upper_bound(p, lambda);
    rep.jensen_bound = jensen_rwre_bound(p, lambda).bound;
    rep.iid_speed = iid_rwre_speed(p, lambda);
    rep.winner = to_double(rep.main_bound) <= rep.jensen_bound ? "main" : "jensen";
    return rep;
}

std::vector<GridCell> bound_diff_grid(const Rational& p_min, const Rational& p_max,
                                      const Rational& lambda_min, const Rational& lambda_max,
                                      int64_t resolution) {
    if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
    if (p_min > p_max || lambda_min > lambda_max)
        throw std::invalid_argument("empty scan range");
    if (p_min <= kHalf || p_max >= 1)
        throw std::invalid_argument("p range must stay inside (1/2, 1)");
    if (lambda_min <= 0 || lambda_max > 1)
        throw std::invalid_argument("lambda range must stay inside (0, 1]");

    std::vector<GridCell> cells;
    cells.reserve(static_cast<size_t>((resolution + 1) * (resolution + 1)));
    const Rational dp = (p_max - p_min) / resolution;
    const Rational dl = (lambda_max - lambda_min) / resolution;
    for (int64_t i = 0; i <= resolution; ++i) {
        const Probability p(p_min + i * dp);
        for (int64_t j = 0; j <= resolution; ++j) {
            GridCell cell;
            cell.p = p.value();
            cell.lambda = lambda_min + j * dl;
            cell.main = to_double(speed_upper_bound(p, cell.lambda));
            cell.jensen = jensen_rwre_bound(p, cell.lambda).bound;
            cell.diff = cell.main - cell.jensen;
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

}  // namespace driftwalk
