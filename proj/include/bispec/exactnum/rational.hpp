#pragma once

#include <gmpxx.h>

#include <string>

#include "bispec/errors.hpp"

namespace bispec {

using Rational = mpq_class;
using Integer = mpz_class;

inline bool is_zero(const Rational &q) { return sgn(q) == 0; }
inline bool is_one(const Rational &q) { return q == 1; }

inline Rational make_rational(long num, long den = 1)
{
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Parses "p", "-p", "p/q"; throws SyntaxError otherwise.
inline Rational parse_rational(const std::string &text)
{
    Rational q;
    std::string t;
    for (char ch : text)
        if (ch != ' ')
            t.push_back(ch);
    if (t.empty() || q.set_str(t, 10) != 0 || q.get_den() == 0)
        fail(ErrorCode::SyntaxError, "bad rational literal '" + text + "'");
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational &q) { return q.get_str(); }

inline bool is_integer(const Rational &q) { return q.get_den() == 1; }

// Floor of a rational as a long; the caller guarantees it fits.
inline long floor_long(const Rational &q)
{
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f.get_si();
}

// C(n, k) for any integer n (generalized binomial for n < 0), k >= 0.
inline Integer binomial(long n, long k)
{
    if (k < 0)
        return 0;
    Integer r, nn(n);
    mpz_bin_ui(r.get_mpz_t(), nn.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
}

} // namespace bispec
