#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace clploop {

/// Exact arbitrary-precision rational. Always kept in lowest terms with a
/// positive denominator; no floating point is used anywhere in the analyzer.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Parses a non-negative decimal integer literal.
inline Rational rational_from_digits(std::string_view digits) {
    mpz_class z;
    if (z.set_str(std::string(digits), 10) != 0)
        throw std::invalid_argument("bad integer literal: " + std::string(digits));
    return Rational(z);
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline Rational floor(const Rational& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(r);
}

inline Rational ceil(const Rational& q) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(r);
}

} // namespace clploop
