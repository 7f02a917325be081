#pragma once

#include <string>

#include "malpha/numeric.hpp"

namespace malpha {

// Closed interval [lo, hi] with exact rational endpoints. When returned as an
// enclosure of a real quantity, that quantity is guaranteed to lie inside.
class RationalInterval {
 public:
  RationalInterval() = default;
  explicit RationalInterval(const Rational& point) : lo_(point), hi_(point) {}
  RationalInterval(Rational lo, Rational hi);  // throws InvalidInput if lo > hi

  static RationalInterval hull(const Rational& a, const Rational& b);

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Rational width() const { return hi_ - lo_; }
  Rational midpoint() const { return (lo_ + hi_) / 2; }
  bool is_point() const { return lo_ == hi_; }

  // (hi - lo) / lo; requires lo > 0.
  Rational relative_width() const;

  bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
  bool contains(const RationalInterval& other) const {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }
  bool intersects(const RationalInterval& other) const {
    return !(other.hi_ < lo_ || hi_ < other.lo_);
  }

  // Smallest enclosing interval with endpoints on the 2^-bits grid.
  RationalInterval rounded_outward(unsigned bits) const;

  double lo_approx() const { return to_double(lo_); }
  double hi_approx() const { return to_double(hi_); }
  double mid_approx() const { return to_double(midpoint()); }

  RationalInterval& operator+=(const RationalInterval& rhs);
  RationalInterval& operator-=(const RationalInterval& rhs);

  friend RationalInterval operator+(RationalInterval a, const RationalInterval& b) { return a += b; }
  friend RationalInterval operator-(RationalInterval a, const RationalInterval& b) { return a -= b; }
  friend RationalInterval operator*(const RationalInterval& a, const RationalInterval& b);
  // Throws InvalidInput when the divisor contains zero.
  friend RationalInterval operator/(const RationalInterval& a, const RationalInterval& b);
  friend RationalInterval operator*(const RationalInterval& a, const Rational& s);
  friend RationalInterval operator/(const RationalInterval& a, const Rational& s);

  friend bool operator==(const RationalInterval& a, const RationalInterval& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  Rational lo_{0};
  Rational hi_{0};
};

std::string to_string(const RationalInterval& x);

}  // namespace malpha
