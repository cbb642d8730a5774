#pragma once

#include "driftwalk/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace driftwalk {

inline const Rational kHalf{1, 2};

/// A right-step probability, kept as an exact rational in [0, 1].
/// The double view is computed once so hot loops never touch bignum code.
class Probability {
public:
    explicit Probability(Rational value);
    static Probability parse(const std::string& text) { return Probability(parse_rational(text)); }

    const Rational& value() const noexcept { return value_; }
    double as_double() const noexcept { return value_f_; }

    bool operator==(const Probability& o) const { return value_ == o.value_; }
    bool operator!=(const Probability& o) const { return value_ != o.value_; }

private:
    Rational value_;
    double value_f_;
};

/// Walk segment [0, N]: site 0 reflects (always steps right), site N absorbs,
/// interior sites step right with probability 1/2 except the listed drift
/// sites, which step right with probability p.
class FiniteEnvironment {
public:
    FiniteEnvironment(int64_t N, Probability p, std::vector<int64_t> drifts);

    /// Rebuilds the segment from the k+1 gaps between consecutive marked
    /// points of 0 = l_0 < l_1 < ... < l_k < l_{k+1} = N.  All gaps must be >= 1.
    static FiniteEnvironment from_interval_lengths(const Probability& p,
                                                   const std::vector<int64_t>& lengths);

    int64_t N() const noexcept { return n_; }
    const Probability& p() const noexcept { return p_; }
    const std::vector<int64_t>& drifts() const noexcept { return drifts_; }
    int64_t drift_count() const noexcept { return static_cast<int64_t>(drifts_.size()); }

    bool is_drift(int64_t x) const;
    /// Right-step probability at x in [0, N-1].  (N itself is absorbing and
    /// has no step distribution; querying it is a caller bug.)
    Rational right_prob(int64_t x) const;

    /// Dense double table, entry x in [0, N-1]; built once per simulation batch.
    std::vector<double> prob_table() const;

    /// The k+1 gaps l_1-0, l_2-l_1, ..., N-l_k.
    std::vector<int64_t> interval_lengths() const;

    bool operator==(const FiniteEnvironment& o) const {
        return n_ == o.n_ && p_ == o.p_ && drifts_ == o.drifts_;
    }

private:
    int64_t n_;
    Probability p_;
    std::vector<int64_t> drifts_;
};

enum class EnvKind { Explicit, Periodic, Ceil, Upsilon, IidSample };

/// Two-valued environment on all of Z: every site steps right with probability
/// 1/2 or with the environment's drift strength p > 1/2 (Explicit windows may
/// hold arbitrary probabilities).  Site lookups are O(1); nothing unbounded is
/// materialized, so the same object supports walks of any length except for
/// the deliberately windowed i.i.d. sample.
class LineEnvironment {
public:
    // -- factories ---------------------------------------------------------
    /// Finitely many overridden sites; everything else is 1/2.
    static LineEnvironment explicit_sites(std::map<int64_t, Rational> sites,
                                          Probability p = Probability(Rational(1)));
    static LineEnvironment driftless() { return explicit_sites({}); }
    /// Drifts at sites congruent to one of `offsets` mod `period`.
    static LineEnvironment periodic(int64_t period, std::vector<int64_t> offsets, Probability p);
    /// Drifts exactly at multiples of m (density 1/m); m = 1 drifts everywhere.
    static LineEnvironment equally_spaced(int64_t m, Probability p);
    /// Drift sites ceil((i + s)/lambda) for i = 1, 2, ... with s = (1-p)/(2p-1).
    /// Realizes density lambda and is eventually periodic, so lookups stay O(1).
    static LineEnvironment ceil_construction(Probability p, Rational lambda);
    /// Per period: r_m gaps of length m then r_{m+1} of length m+1, a drift at
    /// the start of each gap.  Requires lambda in [1/(m+1), 1/m].
    static LineEnvironment upsilon(int64_t m, Rational lambda,
                                   Probability p = Probability(Rational(1)));
    /// Each site in [-window, window] drifts independently with probability
    /// lambda (one Bernoulli per site, drawn left to right from `seed`).
    /// Sites outside the window throw: walks must stay inside it.
    static LineEnvironment iid_sample(Probability p, Rational lambda, int64_t window,
                                      uint64_t seed);

    // -- parameters --------------------------------------------------------
    EnvKind kind() const noexcept { return kind_; }
    const Probability& p() const noexcept { return p_; }
    /// Drift density (exact).  0 for Explicit windows.
    const Rational& lambda() const noexcept { return lambda_; }
    int64_t shift_offset() const noexcept { return shift_; }
    int64_t period() const noexcept { return period_; }
    const std::vector<int64_t>& offsets() const noexcept { return offsets_; }
    int64_t upsilon_m() const noexcept { return m_; }
    int64_t window() const noexcept { return window_; }
    uint64_t seed() const noexcept { return seed_; }
    const std::map<int64_t, Rational>& sites() const noexcept { return sites_; }
    int64_t first_drift() const noexcept { return first_drift_; }

    /// The environment seen from x: shifted(x) looks up site n in this
    /// environment at n + x.  Shifts compose additively.
    LineEnvironment shifted(int64_t x) const;

    // -- site oracle -------------------------------------------------------
    bool is_drift(int64_t site) const;
    Rational right_prob(int64_t site) const;
    double right_prob_f(int64_t site) const;  // hot path, doubles only

    bool operator==(const LineEnvironment& o) const;

private:
    LineEnvironment() = default;

    int64_t mod_period(int64_t x) const noexcept {
        int64_t r = x % period_;
        return r < 0 ? r + period_ : r;
    }
    void check_window(int64_t x) const;

    EnvKind kind_ = EnvKind::Explicit;
    Probability p_ = Probability(Rational(1));
    double p_f_ = 1.0;  // p_.as_double(), cached next to the pattern tables
    Rational lambda_ = Rational(0);
    int64_t shift_ = 0;

    int64_t period_ = 1;                  // Periodic / Upsilon / Ceil
    std::vector<uint8_t> pattern_;        // drift indicator per residue
    std::vector<int64_t> offsets_;        // Periodic only (serialization form)
    int64_t m_ = 0;                       // Upsilon only
    int64_t first_drift_ = 0;             // Ceil only: smallest drift site
    int64_t window_ = 0;                  // IidSample only
    uint64_t seed_ = 0;                   // IidSample only
    std::vector<uint8_t> bits_;           // IidSample indicator, index x + window
    std::map<int64_t, Rational> sites_;   // Explicit only
    std::unordered_map<int64_t, double> sites_f_;
};

inline double LineEnvironment::right_prob_f(int64_t site) const {
    const int64_t x = site + shift_;
    switch (kind_) {
        case EnvKind::Explicit: {
            auto it = sites_f_.find(x);
            return it == sites_f_.end() ? 0.5 : it->second;
        }
        case EnvKind::Periodic:
        case EnvKind::Upsilon:
            return pattern_[static_cast<size_t>(mod_period(x))] ? p_f_ : 0.5;
        case EnvKind::Ceil:
            return (x >= first_drift_ && pattern_[static_cast<size_t>(mod_period(x))])
                       ? p_f_
                       : 0.5;
        case EnvKind::IidSample:
            check_window(x);
            return bits_[static_cast<size_t>(x + window_)] ? p_f_ : 0.5;
    }
    return 0.5;
}

/// First `count` drift positions of the ceil construction, in order.
std::vector<int64_t> ceil_drift_positions(const Probability& p, const Rational& lambda,
                                          int64_t count);

/// Per-period gap lengths of the upsilon layout: r_m copies of m, then
/// r_{m+1} copies of m+1, where r_m = (m+1)a - b and r_{m+1} = b - ma for
/// lambda = a/b in lowest terms.
std::vector<int64_t> upsilon_interval_lengths(int64_t m, const Rational& lambda);

/// Fraction of drift sites among 0..n inclusive, exact.
Rational density_prefix(const LineEnvironment& env, int64_t n);

/// Density written as lambda = n / (m*n + l) with n > 1, m >= 1, 0 < l < n.
/// Every rational in (0,1) whose reduced numerator exceeds 1 decomposes
/// uniquely this way; numerator-1 densities (1/m) do not.
struct StructuredDensity {
    int64_t n = 0;
    int64_t m = 0;
    int64_t l = 0;

    Rational lambda() const { return Rational(n, m * n + l); }
    static std::optional<StructuredDensity> decompose(const Rational& lam);
};

}  // namespace driftwalk
