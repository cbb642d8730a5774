#include "driftwalk/environment.hpp"

#include "driftwalk/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace driftwalk {

Probability::Probability(Rational value) : value_(std::move(value)) {
    if (value_ < 0 || value_ > 1)
        throw std::invalid_argument("probability outside [0,1]: " + rational_str(value_));
    value_f_ = to_double(value_);
}

namespace {

void require_drift_strength(const Probability& p) {
    if (p.value() <= kHalf || p.value() > 1)
        throw std::invalid_argument("drift strength must satisfy 1/2 < p <= 1, got " +
                                    rational_str(p.value()));
}

}  // namespace

FiniteEnvironment::FiniteEnvironment(int64_t N, Probability p, std::vector<int64_t> drifts)
    : n_(N), p_(std::move(p)), drifts_(std::move(drifts)) {
    if (n_ < 1) throw std::invalid_argument("segment endpoint must be >= 1");
    require_drift_strength(p_);
    int64_t prev = 0;
    for (int64_t l : drifts_) {
        if (l <= prev || l >= n_)
            throw std::invalid_argument(
                "drift sites must be strictly increasing and lie strictly between 0 and N");
        prev = l;
    }
}

FiniteEnvironment FiniteEnvironment::from_interval_lengths(const Probability& p,
                                                           const std::vector<int64_t>& lengths) {
    if (lengths.empty()) throw std::invalid_argument("need at least one interval");
    std::vector<int64_t> drifts;
    drifts.reserve(lengths.size() - 1);
    int64_t pos = 0;
    for (size_t i = 0; i < lengths.size(); ++i) {
        if (lengths[i] < 1) throw std::invalid_argument("interval lengths must be >= 1");
        pos += lengths[i];
        if (i + 1 < lengths.size()) drifts.push_back(pos);
    }
    return FiniteEnvironment(pos, p, std::move(drifts));
}

bool FiniteEnvironment::is_drift(int64_t x) const {
    return std::binary_search(drifts_.begin(), drifts_.end(), x);
}

Rational FiniteEnvironment::right_prob(int64_t x) const {
    if (x < 0 || x >= n_)
        throw std::out_of_range("right_prob: site outside [0, N-1]");
    if (x == 0) return Rational(1);  // reflecting wall
    return is_drift(x) ? p_.value() : kHalf;
}

std::vector<double> FiniteEnvironment::prob_table() const {
    std::vector<double> t(static_cast<size_t>(n_), 0.5);
    t[0] = 1.0;
    for (int64_t l : drifts_) t[static_cast<size_t>(l)] = p_.as_double();
    return t;
}

std::vector<int64_t> FiniteEnvironment::interval_lengths() const {
    std::vector<int64_t> lengths;
    lengths.reserve(drifts_.size() + 1);
    int64_t prev = 0;
    for (int64_t l : drifts_) {
        lengths.push_back(l - prev);
        prev = l;
    }
    lengths.push_back(n_ - prev);
    return lengths;
}

// ---------------------------------------------------------------------------

LineEnvironment LineEnvironment::explicit_sites(std::map<int64_t, Rational> sites,
                                                Probability p) {
    LineEnvironment env;
    env.kind_ = EnvKind::Explicit;
    env.p_ = std::move(p);
    env.p_f_ = env.p_.as_double();
    env.sites_ = std::move(sites);
    for (const auto& [site, prob] : env.sites_) {
        if (prob < 0 || prob > 1)
            throw std::invalid_argument("site probability outside [0,1] at " +
                                        std::to_string(site));
        env.sites_f_.emplace(site, to_double(prob));
    }
    return env;
}

LineEnvironment LineEnvironment::periodic(int64_t period, std::vector<int64_t> offsets,
                                          Probability p) {
    if (period < 1) throw std::invalid_argument("period must be >= 1");
    require_drift_strength(p);
    LineEnvironment env;
    env.kind_ = EnvKind::Periodic;
    env.p_ = std::move(p);
    env.p_f_ = env.p_.as_double();
    env.period_ = period;
    env.pattern_.assign(static_cast<size_t>(period), 0);
    std::sort(offsets.begin(), offsets.end());
    offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
    for (int64_t off : offsets) {
        if (off < 0 || off >= period)
            throw std::invalid_argument("offsets must lie in [0, period)");
        env.pattern_[static_cast<size_t>(off)] = 1;
    }
    env.offsets_ = std::move(offsets);
    env.lambda_ = Rational(static_cast<int64_t>(env.offsets_.size()), period);
    return env;
}

LineEnvironment LineEnvironment::equally_spaced(int64_t m, Probability p) {
    if (m < 1) throw std::invalid_argument("spacing must be >= 1");
    return periodic(m, {0}, std::move(p));
}

LineEnvironment LineEnvironment::ceil_construction(Probability p, Rational lambda) {
    require_drift_strength(p);
    if (lambda <= 0 || lambda > 1)
        throw std::invalid_argument("density must satisfy 0 < lambda <= 1");
    LineEnvironment env;
    env.kind_ = EnvKind::Ceil;
    env.p_ = std::move(p);
    env.p_f_ = env.p_.as_double();
    env.lambda_ = std::move(lambda);
    env.period_ = to_int64(denominator(env.lambda_));
    const Rational s = (1 - env.p_.value()) / (2 * env.p_.value() - 1);
    env.first_drift_ = to_int64(ceil_rational((1 + s) / env.lambda_));
    // Site x is some ceil((i+s)/lambda) iff the half-open interval
    // (lambda*(x-1)-s, lambda*x-s] contains an integer; with lambda <= 1 it
    // contains at most one, and the indicator only depends on x mod den(lambda).
    // The index-i >= 1 restriction is exactly x >= first drift.
    env.pattern_.assign(static_cast<size_t>(env.period_), 0);
    for (int64_t r = 0; r < env.period_; ++r) {
        BigInt hi = floor_rational(env.lambda_ * r - s);
        BigInt lo = floor_rational(env.lambda_ * (r - 1) - s);
        env.pattern_[static_cast<size_t>(r)] = (hi - lo >= 1) ? 1 : 0;
    }
    return env;
}

LineEnvironment LineEnvironment::upsilon(int64_t m, Rational lambda, Probability p) {
    if (m < 1) throw std::invalid_argument("interval scale m must be >= 1");
    require_drift_strength(p);
    const std::vector<int64_t> lengths = upsilon_interval_lengths(m, lambda);
    LineEnvironment env;
    env.kind_ = EnvKind::Upsilon;
    env.p_ = std::move(p);
    env.p_f_ = env.p_.as_double();
    env.lambda_ = std::move(lambda);
    env.m_ = m;
    env.period_ = to_int64(denominator(env.lambda_));
    env.pattern_.assign(static_cast<size_t>(env.period_), 0);
    int64_t pos = 0;
    for (int64_t len : lengths) {  // a drift starts each gap
        env.pattern_[static_cast<size_t>(pos)] = 1;
        pos += len;
    }
    if (pos != env.period_)
        throw InternalError("upsilon gaps do not tile the period");
    return env;
}

LineEnvironment LineEnvironment::iid_sample(Probability p, Rational lambda, int64_t window,
                                            uint64_t seed) {
    require_drift_strength(p);
    if (lambda < 0 || lambda > 1)
        throw std::invalid_argument("density must lie in [0,1]");
    if (window < 0) throw std::invalid_argument("window must be >= 0");
    LineEnvironment env;
    env.kind_ = EnvKind::IidSample;
    env.p_ = std::move(p);
    env.p_f_ = env.p_.as_double();
    env.lambda_ = std::move(lambda);
    env.window_ = window;
    env.seed_ = seed;
    const uint64_t num = to_int64(numerator(env.lambda_));
    const uint64_t den = to_int64(denominator(env.lambda_));
    Xoshiro256pp rng = Xoshiro256pp::seeded(seed);
    env.bits_.assign(static_cast<size_t>(2 * window + 1), 0);
    for (auto& b : env.bits_) b = bernoulli_exact(rng.next(), num, den) ? 1 : 0;
    return env;
}

LineEnvironment LineEnvironment::shifted(int64_t x) const {
    LineEnvironment env = *this;
    env.shift_ += x;
    return env;
}

void LineEnvironment::check_window(int64_t x) const {
    if (x < -window_ || x > window_)
        throw std::out_of_range("site " + std::to_string(x) +
                                " outside the materialized i.i.d. window");
}

bool LineEnvironment::is_drift(int64_t site) const {
    const int64_t x = site + shift_;
    switch (kind_) {
        case EnvKind::Explicit: {
            auto it = sites_.find(x);
            return it != sites_.end() && it->second > kHalf;
        }
        case EnvKind::Periodic:
        case EnvKind::Upsilon:
            return pattern_[static_cast<size_t>(mod_period(x))] != 0;
        case EnvKind::Ceil:
            return x >= first_drift_ && pattern_[static_cast<size_t>(mod_period(x))] != 0;
        case EnvKind::IidSample:
            check_window(x);
            return bits_[static_cast<size_t>(x + window_)] != 0;
    }
    return false;
}

Rational LineEnvironment::right_prob(int64_t site) const {
    if (kind_ == EnvKind::Explicit) {
        auto it = sites_.find(site + shift_);
        return it == sites_.end() ? kHalf : it->second;
    }
    return is_drift(site) ? p_.value() : kHalf;
}

bool LineEnvironment::operator==(const LineEnvironment& o) const {
    if (kind_ != o.kind_ || shift_ != o.shift_ || p_ != o.p_) return false;
    switch (kind_) {
        case EnvKind::Explicit: return sites_ == o.sites_;
        case EnvKind::Periodic: return period_ == o.period_ && offsets_ == o.offsets_;
        case EnvKind::Ceil: return lambda_ == o.lambda_;
        case EnvKind::Upsilon: return m_ == o.m_ && lambda_ == o.lambda_;
        case EnvKind::IidSample:
            return lambda_ == o.lambda_ && window_ == o.window_ && seed_ == o.seed_;
    }
    return false;
}

// ---------------------------------------------------------------------------

std::vector<int64_t> ceil_drift_positions(const Probability& p, const Rational& lambda,
                                          int64_t count) {
    require_drift_strength(p);
    if (lambda <= 0 || lambda > 1)
        throw std::invalid_argument("density must satisfy 0 < lambda <= 1");
    if (count < 0) throw std::invalid_argument("count must be >= 0");
    const Rational s = (1 - p.value()) / (2 * p.value() - 1);
    std::vector<int64_t> out;
    out.reserve(static_cast<size_t>(count));
    for (int64_t i = 1; i <= count; ++i)
        out.push_back(to_int64(ceil_rational((i + s) / lambda)));
    return out;
}

std::vector<int64_t> upsilon_interval_lengths(int64_t m, const Rational& lambda) {
    if (m < 1) throw std::invalid_argument("interval scale m must be >= 1");
    const BigInt a = numerator(lambda);
    const BigInt b = denominator(lambda);
    const BigInt r_lo = (m + 1) * a - b;  // gaps of length m
    const BigInt r_hi = b - m * a;        // gaps of length m+1
    if (a <= 0 || r_lo < 0 || r_hi < 0)
        throw std::invalid_argument("density " + rational_str(lambda) +
                                    " not in [1/" + std::to_string(m + 1) + ", 1/" +
                                    std::to_string(m) + "]");
    std::vector<int64_t> lengths;
    lengths.reserve(static_cast<size_t>(to_int64(r_lo + r_hi)));
    for (BigInt i = 0; i < r_lo; ++i) lengths.push_back(m);
    for (BigInt i = 0; i < r_hi; ++i) lengths.push_back(m + 1);
    return lengths;
}

Rational density_prefix(const LineEnvironment& env, int64_t n) {
    if (n < 0) throw std::invalid_argument("prefix endpoint must be >= 0");
    int64_t hits = 0;
    for (int64_t x = 0; x <= n; ++x)
        if (env.is_drift(x)) ++hits;
    return Rational(hits, n + 1);
}

std::optional<StructuredDensity> StructuredDensity::decompose(const Rational& lam) {
    if (lam <= 0 || lam >= 1) return std::nullopt;
    const BigInt a = numerator(lam);
    const BigInt b = denominator(lam);
    if (a <= 1) return std::nullopt;  // 1/m densities have no l in (0, n)
    StructuredDensity d;
    d.n = to_int64(a);
    d.m = to_int64(b / a);
    d.l = to_int64(b - BigInt(d.m) * a);
    return d;
}

}  // namespace driftwalk
