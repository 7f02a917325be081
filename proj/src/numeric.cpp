#include "malpha/numeric.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "malpha/errors.hpp"

namespace malpha {

Int make_int(std::string_view decimal) {
  Int v;
  std::string s(decimal);
  if (s.empty() || v.set_str(s, 10) != 0) {
    throw InvalidInput("not an integer: '" + s + "'");
  }
  return v;
}

Int from_u64(std::uint64_t v) {
  Int r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return r;
}

bool fits_u64(const Int& v) {
  return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_u64(const Int& v) {
  if (!fits_u64(v)) throw InvalidInput("integer does not fit in 64 bits: " + v.get_str());
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

Rational make_rational(const Int& num, const Int& den) {
  if (den == 0) throw InvalidInput("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InvalidInput("empty rational");
  if (auto caret = s.find('^'); caret != std::string::npos) {
    // base^exponent with integer parts, e.g. 2^-20
    Int base = make_int(s.substr(0, caret));
    long e = 0;
    try {
      e = std::stol(s.substr(caret + 1));
    } catch (const std::exception&) {
      throw InvalidInput("bad exponent in '" + s + "'");
    }
    Rational p = pow(Rational(base), static_cast<unsigned long>(std::labs(e)));
    if (e < 0) {
      if (p == 0) throw InvalidInput("zero to a negative power");
      p = 1 / p;
    }
    return p;
  }
  if (auto slash = s.find('/'); slash != std::string::npos) {
    return make_rational(make_int(s.substr(0, slash)), make_int(s.substr(slash + 1)));
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    if (digits == "-" || digits.empty()) throw InvalidInput("bad decimal '" + s + "'");
    Int num = make_int(digits);
    Int den = pow(Int(10), static_cast<unsigned long>(s.size() - dot - 1));
    return make_rational(num, den);
  }
  return Rational(make_int(s));
}

Int floor_div(const Int& a, const Int& b) {
  if (b == 0) throw InvalidInput("division by zero");
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int ceil_div(const Int& a, const Int& b) {
  if (b == 0) throw InvalidInput("division by zero");
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int floor(const Rational& x) { return floor_div(x.get_num(), x.get_den()); }
Int ceil(const Rational& x) { return ceil_div(x.get_num(), x.get_den()); }

Int mod(const Int& t, const Int& q) {
  if (q <= 0) throw InvalidInput("modulus must be positive");
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), t.get_mpz_t(), q.get_mpz_t());
  return r;
}

Int isqrt(const Int& n) {
  if (n < 0) throw InvalidInput("isqrt of negative number");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

bool is_perfect_square(const Int& n) {
  return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

std::size_t bit_length(const Int& n) {
  if (n == 0) return 0;
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

Int pow2(unsigned long e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

Int pow(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Rational pow(const Rational& base, unsigned long e) {
  // canonical input => canonical output, no gcd needed
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
  return r;
}

Int scale_round(const Rational& x, unsigned bits, Rounding dir) {
  Int num = x.get_num();
  num <<= bits;
  const Int& den = x.get_den();
  switch (dir) {
    case Rounding::down:
      return floor_div(num, den);
    case Rounding::up:
      return ceil_div(num, den);
    case Rounding::nearest:
      break;
  }
  Int twice = num * 2 + den;
  return floor_div(twice, den * 2);
}

Rational round_dyadic(const Rational& x, unsigned bits, Rounding dir) {
  Rational r(scale_round(x, bits, dir), pow2(bits));
  r.canonicalize();
  return r;
}

namespace {

Int round_magnitude(const Int& num, const Int& den, Rounding dir) {
  switch (dir) {
    case Rounding::down:
      return floor_div(num, den);
    case Rounding::up:
      return ceil_div(num, den);
    case Rounding::nearest:
      break;
  }
  return floor_div(num * 2 + den, den * 2);
}

}  // namespace

std::string to_scientific(const Rational& x, int digits, Rounding dir) {
  if (digits < 1) throw InvalidInput("digits must be positive");
  if (x == 0) {
    return "0." + std::string(static_cast<std::size_t>(digits - 1), '0') + "e+00";
  }
  const bool negative = sgn(x) < 0;
  Rational a = abs(x);
  // Directed rounding of a negative value flips the magnitude direction.
  Rounding mag_dir = dir;
  if (negative && dir == Rounding::down) mag_dir = Rounding::up;
  if (negative && dir == Rounding::up) mag_dir = Rounding::down;

  long log2_est = static_cast<long>(bit_length(a.get_num())) -
                  static_cast<long>(bit_length(a.get_den()));
  long e10 = static_cast<long>(std::floor(static_cast<double>(log2_est) * 0.30102999566398120));
  const Int lower = pow(Int(10), static_cast<unsigned long>(digits - 1));
  const Int upper = lower * 10;
  Int n;
  for (int guard = 0; guard < 16; ++guard) {
    long shift = digits - 1 - e10;
    Int num = a.get_num();
    Int den = a.get_den();
    if (shift >= 0) {
      num *= pow(Int(10), static_cast<unsigned long>(shift));
    } else {
      den *= pow(Int(10), static_cast<unsigned long>(-shift));
    }
    n = round_magnitude(num, den, mag_dir);
    if (n >= upper) {
      ++e10;
    } else if (n < lower) {
      --e10;
    } else {
      break;
    }
  }
  std::string mant = n.get_str();
  std::string out = negative ? "-" : "";
  out += mant.substr(0, 1);
  if (mant.size() > 1) out += "." + mant.substr(1);
  char exp_buf[32];
  std::snprintf(exp_buf, sizeof(exp_buf), "e%c%02ld", e10 < 0 ? '-' : '+', std::labs(e10));
  return out + exp_buf;
}

double to_double(const Rational& x) {
  const long spread = static_cast<long>(bit_length(x.get_num())) -
                      static_cast<long>(bit_length(x.get_den()));
  if (spread > 1020) {
    return sgn(x) < 0 ? -std::numeric_limits<double>::infinity()
                      : std::numeric_limits<double>::infinity();
  }
  if (spread < -1020) return 0.0;
  return mpq_get_d(x.get_mpq_t());
}

double to_double(const Int& x) {
  if (bit_length(x) > 1023) {
    return sgn(x) < 0 ? -std::numeric_limits<double>::infinity()
                      : std::numeric_limits<double>::infinity();
  }
  return mpz_get_d(x.get_mpz_t());
}

std::string to_string(const Int& x) { return x.get_str(); }

std::string to_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

}  // namespace malpha
