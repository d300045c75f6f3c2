#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nucad {

// Arbitrary-precision integers and rationals. mpq_class keeps values
// canonical: gcd(num, den) == 1 and den > 0.
using Integer = mpz_class;
using Rational = mpq_class;

inline int sign_of(const Integer& z) { return mpz_sgn(z.get_mpz_t()); }
inline int sign_of(const Rational& q) { return mpq_sgn(q.get_mpq_t()); }

inline Integer abs_of(const Integer& z) { return Integer(abs(z)); }

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (sign_of(den) == 0) throw std::invalid_argument("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Largest integer <= q.
inline Integer floor_of(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

// Smallest integer >= q.
inline Integer ceil_of(const Rational& q) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline std::string to_string(const Integer& z) { return z.get_str(); }

// Canonical text form: "p/q", or just "p" when q == 1.
inline std::string to_string(const Rational& q) { return q.get_str(); }

// Parses "p" or "p/q". Throws on malformed input.
inline Rational parse_rational(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    std::string s(text);
    Rational r;
    if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0)
        throw std::invalid_argument("malformed rational literal: " + s);
    if (sign_of(Integer(r.get_den())) == 0)
        throw std::invalid_argument("rational with zero denominator: " + s);
    r.canonicalize();
    return r;
}

// Simplicity order used by sample selection: fewer denominator digits first,
// then smaller |numerator|, then negative preferred.
inline bool simpler_than(const Rational& a, const Rational& b) {
    int c = cmp(a.get_den(), b.get_den());
    if (c != 0) return c < 0;
    Integer an = abs_of(Integer(a.get_num())), bn = abs_of(Integer(b.get_num()));
    c = cmp(an, bn);
    if (c != 0) return c < 0;
    return sign_of(a) < sign_of(b);
}

}  // namespace nucad
