#pragma once

// Exact integer/rational helpers on top of GMP.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace malpha {

using Int = mpz_class;
using Rational = mpq_class;

enum class Rounding { down, up, nearest };

Int make_int(std::string_view decimal);
Int from_u64(std::uint64_t v);
std::uint64_t to_u64(const Int& v);  // throws InvalidInput if out of range
bool fits_u64(const Int& v);

Rational make_rational(const Int& num, const Int& den);  // canonicalized
// Accepts "p/q", "p", decimal "0.25", and "2^-20".
Rational parse_rational(std::string_view text);

Int floor_div(const Int& a, const Int& b);
Int ceil_div(const Int& a, const Int& b);
Int floor(const Rational& x);
Int ceil(const Rational& x);

// Canonical residue in {0, ..., q-1}.
Int mod(const Int& t, const Int& q);

Int isqrt(const Int& n);  // floor(sqrt(n)), n >= 0
bool is_perfect_square(const Int& n);
std::size_t bit_length(const Int& n);  // of |n|; 0 for 0

Int pow2(unsigned long e);
Int pow(const Int& base, unsigned long e);
Rational pow(const Rational& base, unsigned long e);

// Nearest multiple of 2^-bits in the requested direction.
Rational round_dyadic(const Rational& x, unsigned bits, Rounding dir);

// Integer nearest to 2^bits * x in the requested direction.
Int scale_round(const Rational& x, unsigned bits, Rounding dir);

// Scientific decimal with `digits` significant digits, rounded in `dir`
// (down = toward -inf). Used for approximate CSV columns.
std::string to_scientific(const Rational& x, int digits = 17, Rounding dir = Rounding::nearest);

// Truncating conversion; adequate for statistics, not for enclosures.
double to_double(const Rational& x);
double to_double(const Int& x);

std::string to_string(const Int& x);
std::string to_string(const Rational& x);  // "p/q" or "p"

}  // namespace malpha
