#pragma once

// Exact arithmetic in Q(sqrt d): values a + b*sqrt(d) with rational a, b.
// Comparisons reduce to integer sign tests, so no enclosure is involved.

#include "malpha/cf.hpp"
#include "malpha/interval.hpp"

namespace malpha {

class QuadraticNumber {
 public:
  QuadraticNumber(Rational a, Rational b, Int d);  // d positive non-square
  static QuadraticNumber from_surd(const QuadraticSurd& s);

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const Int& d() const { return d_; }

  int sign() const;
  // sign(*this - r)
  int compare(const Rational& r) const;
  bool inside(const RationalInterval& i) const { return compare(i.lo()) >= 0 && compare(i.hi()) <= 0; }
  bool strictly_inside(const Rational& lo, const Rational& hi) const {
    return compare(lo) > 0 && compare(hi) < 0;
  }

  Int floor() const;
  double approx() const;

  QuadraticNumber operator+(const Rational& r) const { return {a_ + r, b_, d_}; }
  QuadraticNumber operator-(const Rational& r) const { return {a_ - r, b_, d_}; }
  QuadraticNumber operator*(const Rational& r) const { return {a_ * r, b_ * r, d_}; }
  QuadraticNumber operator-() const { return {-a_, -b_, d_}; }
  QuadraticNumber operator+(const QuadraticNumber& o) const;  // same d
  QuadraticNumber operator-(const QuadraticNumber& o) const;
  QuadraticNumber operator*(const QuadraticNumber& o) const;
  QuadraticNumber reciprocal() const;  // nonzero
  QuadraticNumber pow(unsigned n) const;

  // Distance to the nearest integer.
  QuadraticNumber norm_dist() const;

  friend bool operator==(const QuadraticNumber& x, const QuadraticNumber& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.d_ == y.d_;
  }

 private:
  Rational a_;
  Rational b_;
  Int d_;
};

}  // namespace malpha
