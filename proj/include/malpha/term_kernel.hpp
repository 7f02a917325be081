#pragma once

// Term-level kernel for sums of 1/||m alpha||.
//
// Every term enclosure is rounded outward onto the grid 2^-kTermScaleBits, so
// sums are exact integer additions: the total does not depend on the order or
// the grouping of terms, which makes parallel and sequential runs identical.
//
// Two evaluation paths:
//   * fast: alpha is enclosed in [A_lo, A_hi] / 2^128 once; m*A_lo is taken
//     mod 2^128 with wrapping 128-bit multiplication and the reciprocal is
//     bounded with 128/64-bit divisions.
//   * exact: adaptive convergent enclosure (norm_dist_malpha).
// The path is a function of (alpha, m, rel_tol) only, never of M.

#include <cstdint>

#include "malpha/alpha_eval.hpp"
#include "malpha/cf.hpp"
#include "malpha/interval.hpp"

namespace malpha {

using u128 = unsigned __int128;

inline constexpr unsigned kTermScaleBits = 40;

Int from_u128(u128 v);

struct TermValue {
  bool fast = false;
  u128 fast_lo = 0;  // units of 2^-kTermScaleBits
  u128 fast_hi = 0;
  Int big_lo;
  Int big_hi;

  Int lo() const;
  Int hi() const;
  RationalInterval interval() const;
};

// Exact sum of scaled term bounds.
class ScaledSum {
 public:
  void add(const TermValue& t);
  void add(const ScaledSum& other);
  Int lo() const;
  Int hi() const;
  RationalInterval interval() const;

 private:
  void flush();

  u128 fast_lo_ = 0;
  u128 fast_hi_ = 0;
  Int big_lo_ = 0;
  Int big_hi_ = 0;
};

class TermKernel {
 public:
  TermKernel(const AlphaSpec& alpha, const Rational& rel_tol);

  // Encloses 1/||m alpha||. Throws DegenerateRational / HorizonExceeded.
  void term(std::uint64_t m, TermValue& out);

  // Encloses ||m alpha|| itself, relative width <= rel_tol.
  RationalInterval distance(std::uint64_t m);

  bool fast_path_enabled() const { return fast_enabled_; }
  const Rational& rel_tol() const { return rel_tol_; }
  ConvergentTable& table() { return table_; }

  // Statistics for diagnostics and tests.
  std::uint64_t fast_count() const { return fast_count_; }
  std::uint64_t exact_count() const { return exact_count_; }

 private:
  bool fast_distance(std::uint64_t m, u128& d_lo, u128& d_hi) const;

  ConvergentTable table_;
  Rational rel_tol_;
  bool fast_enabled_ = false;
  u128 a_lo_ = 0;  // alpha in [a_lo_, a_lo_ + a_width_] / 2^128
  u128 a_width_ = 0;
  unsigned tol_shift_ = 0;  // 2^-tol_shift_ <= rel_tol
  std::uint64_t fast_count_ = 0;
  std::uint64_t exact_count_ = 0;
};

// Worker count: MALPHA_THREADS if set, else hardware concurrency (>= 1).
unsigned thread_count();

}  // namespace malpha
