#include "malpha/elementary.hpp"

#include <algorithm>

#include "malpha/errors.hpp"

namespace malpha {
namespace {

// 2*atanh(zn/zd) = ln((1+z)/(1-z)) for |z| <= 1/3, zd > 0, with width at
// most 2^-(frac+1). The odd power series is accumulated with per-term
// directed rounding on a grid with guard bits covering the term count; the
// tail after the last term is bounded by |z|^(2n+1) / ((2n+1)(1-z^2)).
RationalInterval two_atanh(const Int& zn, const Int& zd, unsigned frac) {
  frac += static_cast<unsigned>(bit_length(Int(frac))) + 2;
  Int lo = 0;
  Int hi = 0;
  const Int zn2 = zn * zn;
  const Int zd2 = zd * zd;
  const Int one_minus = zd2 - zn2;  // (1 - z^2) * zd^2 > 0
  Int pn = zn;
  Int pd = zd;
  for (unsigned long j = 0;; ++j) {
    Int num = pn << frac;
    Int den = pd * (2 * j + 1);
    lo += floor_div(num, den);
    hi += ceil_div(num, den);
    pn *= zn2;
    pd *= zd2;
    // tail <= |pn| zd^2 / (pd (2j+3) (zd^2 - zn^2)), want <= 2^-frac
    Int lhs = abs(pn) * zd2;
    lhs <<= frac;
    Int rhs = pd * (2 * j + 3) * one_minus;
    if (lhs <= rhs) break;
  }
  if (sgn(zn) > 0) hi += 1;
  if (sgn(zn) < 0) lo -= 1;
  const Int scale = pow2(frac);
  return RationalInterval(make_rational(lo * 2, scale), make_rational(hi * 2, scale));
}

// ln(y) for y = num/2^t in [1/2, 2].
RationalInterval ln_near_one(const Int& num, unsigned t, unsigned frac) {
  const Int base = pow2(t);
  return two_atanh(num - base, num + base, frac);
}

}  // namespace

RationalInterval ln2_enclosure(unsigned bits) {
  // ln 2 = 2 atanh(1/3)
  return two_atanh(Int(1), Int(3), bits + 4).rounded_outward(bits + 3);
}

RationalInterval ln_enclosure(const Rational& x, unsigned bits) {
  if (sgn(x) <= 0) throw InvalidInput("ln of a non-positive number");
  const long e = static_cast<long>(bit_length(x.get_num())) - static_cast<long>(bit_length(x.get_den()));
  // y = x / 2^e lies in (1/2, 2)
  Rational y = x;
  if (e > 0) {
    mpq_div_2exp(y.get_mpq_t(), x.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else if (e < 0) {
    mpq_mul_2exp(y.get_mpq_t(), x.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  const unsigned t = bits + 8;
  const unsigned frac = bits + 8;
  Int y_lo = scale_round(y, t, Rounding::down);
  Int y_hi = scale_round(y, t, Rounding::up);
  RationalInterval ln_y(ln_near_one(y_lo, t, frac).lo(), ln_near_one(y_hi, t, frac).hi());
  if (e == 0) return ln_y.rounded_outward(bits + 2);
  const Int abs_e = e > 0 ? Int(e) : Int(-e);
  const unsigned l2_bits = bits + 4 + static_cast<unsigned>(bit_length(abs_e));
  RationalInterval l2 = ln2_enclosure(l2_bits);
  RationalInterval e_l2 = l2 * Rational(e);
  return (ln_y + e_l2).rounded_outward(bits + 2);
}

RationalInterval ln_enclosure(const Int& x, unsigned bits) { return ln_enclosure(Rational(x), bits); }

RationalInterval exp_enclosure(const Rational& x, unsigned rel_bits) {
  if (sgn(x) < 0) throw InvalidInput("exp_enclosure expects x >= 0");
  if (x == 0) return RationalInterval(Rational(1));
  const long spread = static_cast<long>(bit_length(x.get_num())) - static_cast<long>(bit_length(x.get_den()));
  // r = x / 2^s <= 1/2
  const unsigned long s = static_cast<unsigned long>(std::max(0L, spread + 2));
  const unsigned frac = rel_bits + static_cast<unsigned>(s) + 16;
  const Int rn = x.get_num();
  const Int rd = Int(x.get_den()) << s;
  Int tn = 1;
  Int td = 1;
  Int lo = 0;
  Int hi = 0;
  for (unsigned long j = 0;; ++j) {
    Int num = tn << frac;
    lo += floor_div(num, td);
    hi += ceil_div(num, td);
    tn *= rn;
    td *= rd * (j + 1);
    // remaining terms sum to at most 2 * tn/td since r <= 1/2
    Int lhs = tn << (frac + 1);
    if (lhs <= td) break;
  }
  hi += 1;
  for (unsigned long i = 0; i < s; ++i) {
    lo = (lo * lo) >> frac;
    Int sq = hi * hi;
    Int unit = pow2(frac);
    hi = ceil_div(sq, unit);
  }
  const Int scale = pow2(frac);
  return RationalInterval(make_rational(lo, scale), make_rational(hi, scale));
}

Int ceil_exp(const Int& n) {
  if (n < 0) throw InvalidInput("ceil_exp expects n >= 0");
  if (n == 0) return Int(1);
  // e^n has about 1.4427 n bits
  unsigned rel_bits = static_cast<unsigned>(to_double(n) * 1.4427 + 64);
  for (int attempt = 0; attempt < 8; ++attempt, rel_bits *= 2) {
    RationalInterval e = exp_enclosure(Rational(n), rel_bits);
    Int c_lo = ceil(e.lo());
    if (c_lo == ceil(e.hi())) return c_lo;
  }
  throw Error("ceil_exp failed to converge");
}

}  // namespace malpha
