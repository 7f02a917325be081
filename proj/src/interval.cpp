#include "malpha/interval.hpp"

#include <algorithm>
#include <array>

#include "malpha/errors.hpp"

namespace malpha {

RationalInterval::RationalInterval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (hi_ < lo_) throw InvalidInput("interval with lo > hi");
}

RationalInterval RationalInterval::hull(const Rational& a, const Rational& b) {
  return a <= b ? RationalInterval(a, b) : RationalInterval(b, a);
}

Rational RationalInterval::relative_width() const {
  if (sgn(lo_) <= 0) throw InvalidInput("relative width needs a positive lower end");
  return (hi_ - lo_) / lo_;
}

RationalInterval RationalInterval::rounded_outward(unsigned bits) const {
  return RationalInterval(round_dyadic(lo_, bits, Rounding::down),
                          round_dyadic(hi_, bits, Rounding::up));
}

RationalInterval& RationalInterval::operator+=(const RationalInterval& rhs) {
  lo_ += rhs.lo_;
  hi_ += rhs.hi_;
  return *this;
}

RationalInterval& RationalInterval::operator-=(const RationalInterval& rhs) {
  Rational new_lo = lo_ - rhs.hi_;
  hi_ -= rhs.lo_;
  lo_ = std::move(new_lo);
  return *this;
}

RationalInterval operator*(const RationalInterval& a, const RationalInterval& b) {
  std::array<Rational, 4> p{a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
  auto [mn, mx] = std::minmax_element(p.begin(), p.end());
  return RationalInterval(*mn, *mx);
}

RationalInterval operator/(const RationalInterval& a, const RationalInterval& b) {
  if (sgn(b.lo_) <= 0 && sgn(b.hi_) >= 0) throw InvalidInput("interval division by an interval containing 0");
  return a * RationalInterval(1 / b.hi_, 1 / b.lo_);
}

RationalInterval operator*(const RationalInterval& a, const Rational& s) {
  return RationalInterval::hull(a.lo_ * s, a.hi_ * s);
}

RationalInterval operator/(const RationalInterval& a, const Rational& s) {
  if (s == 0) throw InvalidInput("interval division by zero");
  return RationalInterval::hull(a.lo_ / s, a.hi_ / s);
}

std::string to_string(const RationalInterval& x) {
  return "[" + to_string(x.lo()) + ", " + to_string(x.hi()) + "]";
}

}  // namespace malpha
