#include "malpha/surd.hpp"

#include <cmath>

#include "malpha/errors.hpp"

namespace malpha {
namespace {

// sign(x + y*sqrt(d)) for rationals x, y.
int sign_of(const Rational& x, const Rational& y, const Int& d) {
  const int sx = sgn(x);
  const int sy = sgn(y);
  if (sy == 0) return sx;
  if (sx == 0 || sx == sy) return sx == 0 ? sy : sx;
  // opposite signs: compare x^2 with y^2 d
  const Rational lhs = x * x;
  const Rational rhs = y * y * Rational(d);
  if (lhs == rhs) return 0;  // impossible for non-square d unless both vanish
  return lhs > rhs ? sx : sy;
}

}  // namespace

QuadraticNumber::QuadraticNumber(Rational a, Rational b, Int d) : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)) {
  if (sgn(d_) <= 0 || is_perfect_square(d_)) throw InvalidInput("QuadraticNumber needs a positive non-square radicand");
}

QuadraticNumber QuadraticNumber::from_surd(const QuadraticSurd& s) {
  return {make_rational(s.p, s.q), make_rational(Int(1), s.q), s.d};
}

int QuadraticNumber::sign() const { return sign_of(a_, b_, d_); }

int QuadraticNumber::compare(const Rational& r) const { return sign_of(a_ - r, b_, d_); }

Int QuadraticNumber::floor() const {
  // start from the floor of a + floor/ceil(b sqrt d) estimate and correct
  const Rational bb = b_ * b_ * Rational(d_);
  Int root = isqrt(malpha::floor(bb));
  Rational guess = a_ + (sgn(b_) >= 0 ? Rational(root) : Rational(-root));
  Int n = malpha::floor(guess);
  while (compare(Rational(n)) < 0) --n;
  while (compare(Rational(n + 1)) >= 0) ++n;
  return n;
}

double QuadraticNumber::approx() const {
  return to_double(a_) + to_double(b_) * std::sqrt(to_double(d_));
}

QuadraticNumber QuadraticNumber::operator+(const QuadraticNumber& o) const {
  if (o.d_ != d_) throw InvalidInput("mismatched radicands");
  return {a_ + o.a_, b_ + o.b_, d_};
}

QuadraticNumber QuadraticNumber::operator-(const QuadraticNumber& o) const {
  if (o.d_ != d_) throw InvalidInput("mismatched radicands");
  return {a_ - o.a_, b_ - o.b_, d_};
}

QuadraticNumber QuadraticNumber::operator*(const QuadraticNumber& o) const {
  if (o.d_ != d_) throw InvalidInput("mismatched radicands");
  return {a_ * o.a_ + b_ * o.b_ * Rational(d_), a_ * o.b_ + b_ * o.a_, d_};
}

QuadraticNumber QuadraticNumber::reciprocal() const {
  const Rational n = a_ * a_ - b_ * b_ * Rational(d_);
  if (n == 0) throw InvalidInput("reciprocal of zero");
  return {a_ / n, -b_ / n, d_};
}

QuadraticNumber QuadraticNumber::pow(unsigned n) const {
  QuadraticNumber out(Rational(1), Rational(0), d_);
  for (unsigned i = 0; i < n; ++i) out = out * *this;
  return out;
}

QuadraticNumber QuadraticNumber::norm_dist() const {
  const Int n = floor();
  QuadraticNumber frac = *this - Rational(n);
  // frac in (0,1); distance is min(frac, 1 - frac)
  if (frac.compare(Rational(1, 2)) <= 0) return frac;
  return -frac + Rational(1);
}

}  // namespace malpha
