#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace polya {

using BigInt = mpz_class;
using Rational = mpq_class;

// "p/q" in lowest terms with q > 0, or "p" when q == 1.
inline std::string to_string(const Rational &q)
{
    return q.get_str();
}

inline std::string to_string(const BigInt &z)
{
    return z.get_str();
}

Rational parse_rational(std::string_view text);

// Nearest double; exact rationals stay exact everywhere else.
inline double to_double(const Rational &q)
{
    return q.get_d();
}

} // namespace polya
