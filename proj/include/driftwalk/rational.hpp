#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace driftwalk {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Thrown when an internal cross-check fails (e.g. two independent ways of
/// computing the same determinant disagree).  Distinct from invalid_argument:
/// this one means the library itself is broken, not the caller's input.
struct InternalError : std::runtime_error {
    explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline BigInt floor_rational(const Rational& r) {
    BigInt num = numerator(r);
    BigInt den = denominator(r);  // canonical form keeps den > 0
    BigInt q = num / den;         // truncates toward zero
    if (num < 0 && q * den != num) --q;
    return q;
}

inline BigInt ceil_rational(const Rational& r) { return -floor_rational(Rational(-r)); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

/// Canonical text form "num/den", denominator always present ("3/4", "-1/2", "5/1").
inline std::string rational_str(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

/// Accepts "a/b" or a bare integer "a" (optionally negative).  Anything else --
/// decimals in particular -- is rejected so imprecise inputs can't sneak in.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    if (text.find_first_not_of("-0123456789/") != std::string::npos)
        throw std::invalid_argument("rational literal must be 'a/b' or an integer: " + text);
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text));
        if (text.find('/', slash + 1) != std::string::npos)
            throw std::invalid_argument("more than one '/' in rational literal: " + text);
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator: " + text);
        return Rational(num, den);
    } catch (const std::runtime_error&) {  // cpp_int parse failure
        throw std::invalid_argument("bad rational literal: " + text);
    }
}

inline int64_t to_int64(const BigInt& v) {
    if (v < std::numeric_limits<int64_t>::min() || v > std::numeric_limits<int64_t>::max())
        throw std::overflow_error("value does not fit in int64: " + v.str());
    return v.convert_to<int64_t>();
}

}  // namespace driftwalk
