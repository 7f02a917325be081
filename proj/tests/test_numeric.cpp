#include <doctest.h>

#include <cmath>

#include "malpha/elementary.hpp"
#include "malpha/errors.hpp"
#include "malpha/interval.hpp"
#include "malpha/numeric.hpp"

using namespace malpha;

namespace {

// [v - 10^-40, v + 10^-40] for a decimal literal with 40+ digits.
RationalInterval decimal_ball(const char* digits) {
  const Rational v = parse_rational(digits);
  const Rational eps(Int(1), pow(Int(10), 40));
  return RationalInterval(v - eps, v + eps);
}

}  // namespace

TEST_SUITE("numeric") {
  TEST_CASE("parse_rational forms") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("-7") == Rational(-7));
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("2^-20") == Rational(Int(1), pow2(20)));
    CHECK_THROWS_AS(parse_rational("1/0"), InvalidInput);
    CHECK_THROWS_AS(parse_rational("abc"), InvalidInput);
  }

  TEST_CASE("integer helpers") {
    CHECK(floor_div(Int(-7), Int(2)) == -4);
    CHECK(ceil_div(Int(-7), Int(2)) == -3);
    CHECK(floor_div(Int(7), Int(-2)) == -4);
    CHECK(mod(Int(-1), Int(5)) == 4);
    CHECK(isqrt(Int(99)) == 9);
    CHECK(isqrt(Int(100)) == 10);
    CHECK(is_perfect_square(Int(144)));
    CHECK_FALSE(is_perfect_square(Int(145)));
    CHECK(bit_length(Int(0)) == 0);
    CHECK(bit_length(Int(255)) == 8);
    CHECK(bit_length(Int(256)) == 9);
    CHECK(floor(Rational(-1, 3)) == -1);
    CHECK(ceil(Rational(-1, 3)) == 0);
    CHECK(to_u64(from_u64(UINT64_MAX)) == UINT64_MAX);
    CHECK_THROWS_AS(to_u64(Int(-1)), InvalidInput);
  }

  TEST_CASE("directed rounding") {
    const Rational third(1, 3);
    CHECK(scale_round(third, 4, Rounding::down) == 5);
    CHECK(scale_round(third, 4, Rounding::up) == 6);
    CHECK(scale_round(third, 4, Rounding::nearest) == 5);
    CHECK(round_dyadic(third, 4, Rounding::up) == Rational(3, 8));
    CHECK(to_scientific(third, 5, Rounding::down) == "3.3333e-01");
    CHECK(to_scientific(third, 5, Rounding::up) == "3.3334e-01");
    CHECK(to_scientific(Rational(-1234), 3, Rounding::nearest) == "-1.23e+03");
    CHECK(to_scientific(Rational(0), 3) == "0.00e+00");
  }

  TEST_CASE("interval arithmetic") {
    const RationalInterval a(Rational(1), Rational(2));
    const RationalInterval b(Rational(-1), Rational(3));
    CHECK((a + b) == RationalInterval(Rational(0), Rational(5)));
    CHECK((a - b) == RationalInterval(Rational(-2), Rational(3)));
    CHECK((a * b) == RationalInterval(Rational(-2), Rational(6)));
    CHECK((a / a) == RationalInterval(Rational(1, 2), Rational(2)));
    CHECK_THROWS_AS(a / b, InvalidInput);
    CHECK_THROWS_AS(RationalInterval(Rational(2), Rational(1)), InvalidInput);
    const RationalInterval r = RationalInterval(Rational(1, 3)).rounded_outward(8);
    CHECK(r.contains(Rational(1, 3)));
    CHECK(r.width() <= Rational(Int(1), pow2(8)));
  }

  TEST_CASE("ln enclosures") {
    const RationalInterval ln2 = ln2_enclosure(140);
    CHECK(ln2.width() <= Rational(Int(1), pow2(140)));
    CHECK(ln2.intersects(decimal_ball("0.6931471805599453094172321214581765680755001343602552")));
    CHECK(decimal_ball("0.6931471805599453094172321214581765680755001343602552").contains(ln2.lo()));

    for (const unsigned bits : {8u, 64u, 140u, 1000u, 4096u}) {
      CHECK(ln2_enclosure(bits).width() <= Rational(Int(1), pow2(bits)));
      CHECK(ln_enclosure(Int(10), bits).width() <= Rational(Int(1), pow2(bits)));
      CHECK(ln_enclosure(Rational(7, 5), bits).width() <= Rational(Int(1), pow2(bits)));
    }
    const RationalInterval ln10 = ln_enclosure(Int(10), 140);
    CHECK(decimal_ball("2.3025850929940456840179914546843642076011014886287729").contains(ln10.midpoint()));

    for (const long x : {2L, 3L, 7L, 1000L, 123456789L}) {
      const RationalInterval e = ln_enclosure(Int(x), 30);
      CHECK(e.width() <= Rational(Int(1), pow2(30)));
      const double ref = std::log(static_cast<double>(x));
      CHECK(e.lo_approx() <= ref + 1e-15);
      CHECK(e.hi_approx() >= ref - 1e-15);
    }
    const RationalInterval small = ln_enclosure(Rational(1, 1000), 30);
    CHECK(std::fabs(small.mid_approx() - std::log(0.001)) < 1e-9);
    CHECK(ln_enclosure(Int(1), 30).contains(Rational(0)));
    CHECK_THROWS_AS(ln_enclosure(Rational(0), 30), InvalidInput);

    // ln of a large integer exercises the power-of-two split
    const Int big = pow(Int(3), 2000);
    const RationalInterval lb = ln_enclosure(big, 40);
    CHECK(std::fabs(lb.mid_approx() - 2000 * std::log(3.0)) < 1e-9);
  }

  TEST_CASE("exp enclosures") {
    const RationalInterval e1 = exp_enclosure(Rational(1), 120);
    CHECK(e1.intersects(decimal_ball("2.7182818284590452353602874713526624977572470937")));
    CHECK(e1.relative_width() <= Rational(Int(1), pow2(120)));
    CHECK(exp_enclosure(Rational(0), 10).contains(Rational(1)));
    CHECK(ceil_exp(Int(0)) == 1);
    CHECK(ceil_exp(Int(4)) == 55);
    CHECK(ceil_exp(Int(10)) == 22027);
    CHECK(ceil_exp(Int(221)) == ceil(exp_enclosure(Rational(221), 400).hi()));
  }
}
