#include "malpha/term_kernel.hpp"

#include <cstdlib>
#include <string>
#include <thread>

#include "malpha/errors.hpp"

namespace malpha {
namespace {

constexpr u128 kOne = 1;
constexpr u128 kHalf = kOne << 127;
constexpr u128 kFlushAt = kOne << 126;
constexpr u128 kMinFastDistance = kOne << 48;  // ||m alpha|| >= 2^-80
constexpr unsigned kMaxTolShift = 57;

unsigned bitlen(u128 v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  if (hi != 0) return 128 - static_cast<unsigned>(__builtin_clzll(hi));
  const auto lo = static_cast<std::uint64_t>(v);
  return lo != 0 ? 64 - static_cast<unsigned>(__builtin_clzll(lo)) : 0;
}

// Lower bound of 2^(128 + kTermScaleBits) / d for d >= 2^48. The divisor is
// rounded up to 64 significant bits so one 128/64 division suffices.
u128 recip_lower(u128 d) {
  unsigned s = 0;
  u128 dd = d;
  const unsigned len = bitlen(d);
  if (len > 64) {
    s = len - 64;
    dd = d >> s;
    if ((dd << s) != d) ++dd;
    if (dd == (kOne << 64)) {
      dd = kOne << 63;
      ++s;
    }
  }
  const u128 q0 = kHalf / dd;  // 2^127 / dd
  const int shift = 41 - static_cast<int>(s);
  return shift >= 0 ? q0 << shift : q0 >> (-shift);
}

// Upper bound of 2^(128 + kTermScaleBits) / d for d >= 2^48.
u128 recip_upper(u128 d) {
  unsigned s = 0;
  u128 dd = d;
  const unsigned len = bitlen(d);
  if (len > 64) {
    s = len - 64;
    dd = d >> s;
  }
  u128 q1 = kHalf / dd;
  if (q1 * dd != kHalf) ++q1;
  const int shift = 41 - static_cast<int>(s);
  if (shift >= 0) return q1 << shift;
  const unsigned r = static_cast<unsigned>(-shift);
  return (q1 + ((kOne << r) - 1)) >> r;
}

Int reciprocal_scaled(const Rational& d, Rounding dir) {
  Int num = d.get_den();
  num <<= kTermScaleBits;
  return dir == Rounding::down ? floor_div(num, d.get_num()) : ceil_div(num, d.get_num());
}

}  // namespace

Int from_u128(u128 v) {
  const std::uint64_t words[2] = {static_cast<std::uint64_t>(v >> 64), static_cast<std::uint64_t>(v)};
  Int r;
  mpz_import(r.get_mpz_t(), 2, 1, sizeof(std::uint64_t), 0, 0, words);
  return r;
}

Int TermValue::lo() const { return fast ? from_u128(fast_lo) : big_lo; }
Int TermValue::hi() const { return fast ? from_u128(fast_hi) : big_hi; }

RationalInterval TermValue::interval() const {
  const Int scale = pow2(kTermScaleBits);
  return RationalInterval(make_rational(lo(), scale), make_rational(hi(), scale));
}

void ScaledSum::flush() {
  big_lo_ += from_u128(fast_lo_);
  big_hi_ += from_u128(fast_hi_);
  fast_lo_ = 0;
  fast_hi_ = 0;
}

void ScaledSum::add(const TermValue& t) {
  if (t.fast) {
    // each fast term is below 2^121, so this cannot wrap
    fast_lo_ += t.fast_lo;
    fast_hi_ += t.fast_hi;
    if (fast_hi_ >= kFlushAt) flush();
  } else {
    big_lo_ += t.big_lo;
    big_hi_ += t.big_hi;
  }
}

void ScaledSum::add(const ScaledSum& other) {
  big_lo_ += other.lo();
  big_hi_ += other.hi();
}

Int ScaledSum::lo() const { return big_lo_ + from_u128(fast_lo_); }
Int ScaledSum::hi() const { return big_hi_ + from_u128(fast_hi_); }

RationalInterval ScaledSum::interval() const {
  const Int scale = pow2(kTermScaleBits);
  return RationalInterval(make_rational(lo(), scale), make_rational(hi(), scale));
}

TermKernel::TermKernel(const AlphaSpec& alpha, const Rational& rel_tol) : table_(alpha), rel_tol_(rel_tol) {
  if (sgn(rel_tol_) <= 0) throw InvalidInput("rel_tol must be positive");
  unsigned t = 0;
  while (t <= kMaxTolShift && Rational(Int(1), pow2(t)) > rel_tol_) ++t;
  if (t > kMaxTolShift) return;
  tol_shift_ = t;
  try {
    const Int target = pow2(130);
    std::size_t k = 0;
    while (table_.extend_to(k + 1) && table_[k].q * table_[k + 1].q < target) ++k;
    const RationalInterval enc = alpha_enclosure(table_, k);
    const Int lo = scale_round(enc.lo(), 128, Rounding::down);
    const Int hi = scale_round(enc.hi(), 128, Rounding::up);
    if (bit_length(hi) > 128) return;
    const Int width = hi - lo;
    if (bit_length(width) > 8) return;
    // split into 64-bit halves
    const Int mask = pow2(64) - 1;
    const Int lo_hi = lo >> 64;
    const Int lo_lo = lo & mask;
    a_lo_ = (static_cast<u128>(to_u64(lo_hi)) << 64) | to_u64(lo_lo);
    a_width_ = to_u64(width);
    fast_enabled_ = true;
  } catch (const HorizonExceeded&) {
    fast_enabled_ = false;
  } catch (const CapExceeded&) {
    fast_enabled_ = false;
  }
}

bool TermKernel::fast_distance(std::uint64_t m, u128& d_lo, u128& d_hi) const {
  if ((m >> 62) != 0) return false;
  const u128 x = static_cast<u128>(m) * a_lo_;  // m alpha mod 1, wrapping
  const u128 w = static_cast<u128>(m) * a_width_;
  if (x <= kHalf && w <= kHalf - x) {
    d_lo = x;
    d_hi = x + w;
  } else if (x >= kHalf) {
    const u128 c = -x;  // 2^128 - x
    if (w > c) return false;
    d_lo = c - w;
    d_hi = c;
  } else {
    return false;
  }
  // exact half-integers are decided by the exact path
  if (d_lo < kMinFastDistance || d_hi >= kHalf) return false;
  return (w << tol_shift_) <= d_lo;
}

void TermKernel::term(std::uint64_t m, TermValue& out) {
  u128 d_lo = 0;
  u128 d_hi = 0;
  if (fast_enabled_ && fast_distance(m, d_lo, d_hi)) {
    out.fast = true;
    out.fast_lo = recip_lower(d_hi);
    out.fast_hi = recip_upper(d_lo);
    ++fast_count_;
    return;
  }
  const NormDistEnclosure e = norm_dist_malpha(from_u64(m), table_, rel_tol_);
  out.fast = false;
  out.big_lo = reciprocal_scaled(e.interval.hi(), Rounding::down);
  out.big_hi = reciprocal_scaled(e.interval.lo(), Rounding::up);
  ++exact_count_;
}

RationalInterval TermKernel::distance(std::uint64_t m) {
  u128 d_lo = 0;
  u128 d_hi = 0;
  if (fast_enabled_ && fast_distance(m, d_lo, d_hi)) {
    const Int scale = pow2(128);
    return RationalInterval(make_rational(from_u128(d_lo), scale), make_rational(from_u128(d_hi), scale));
  }
  return norm_dist_malpha(from_u64(m), table_, rel_tol_).interval;
}

unsigned thread_count() {
  if (const char* env = std::getenv("MALPHA_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace malpha
