#include <doctest.h>

#include <random>

#include "malpha/cf.hpp"
#include "malpha/errors.hpp"
#include "malpha/surd.hpp"

using namespace malpha;

namespace {

// Quotients by exact Gauss-map iteration in Q(sqrt d).
std::vector<Int> surd_quotients_oracle(const QuadraticSurd& s, std::size_t n) {
  QuadraticNumber x = QuadraticNumber::from_surd(s);
  std::vector<Int> out;
  for (std::size_t i = 0; i < n; ++i) {
    const QuadraticNumber inv = x.reciprocal();
    const Int a = inv.floor();
    out.push_back(a);
    x = inv - Rational(a);
  }
  return out;
}

std::vector<Int> ints(std::initializer_list<long> v) {
  std::vector<Int> out;
  for (const long x : v) out.emplace_back(x);
  return out;
}

void check_recurrence(const AlphaSpec& alpha, std::size_t K) {
  const PartialQuotients pq = quotients(alpha, K);
  const std::vector<Convergent> c = convergents(alpha, K);
  REQUIRE(c.size() == K + 1);
  Int p2 = 1, q2 = 0, p1 = 0, q1 = 1;  // p_{-1}, q_{-1}, p_0, q_0
  CHECK(c[0].p == 0);
  CHECK(c[0].q == 1);
  for (std::size_t k = 1; k <= K; ++k) {
    const Int& a = pq.a[k - 1];
    const Int p = a * p1 + p2;
    const Int q = a * q1 + q2;
    CHECK(c[k].p == p);
    CHECK(c[k].q == q);
    CHECK(p * q1 - p1 * q == (k % 2 == 1 ? 1 : -1));
    p2 = p1;
    q2 = q1;
    p1 = p;
    q1 = q;
  }
}

}  // namespace

TEST_SUITE("cf") {
  TEST_CASE("golden and silver expansions") {
    CHECK(quotients(AlphaSpec::golden(), 10).a == std::vector<Int>(10, Int(1)));
    CHECK(quotients(AlphaSpec::silver(), 10).a == std::vector<Int>(10, Int(2)));
    const auto c = convergents(AlphaSpec::golden(), 6);
    const long fib[] = {1, 1, 2, 3, 5, 8, 13};
    for (std::size_t k = 0; k <= 6; ++k) CHECK(c[k].q == fib[k]);
  }

  TEST_CASE("surd quotients match exact Gauss iteration") {
    const std::vector<QuadraticSurd> cases = {
        {Int(-1), Int(5), Int(2)}, {Int(-1), Int(2), Int(1)}, {Int(-1), Int(3), Int(2)},
        {Int(-2), Int(7), Int(1)}, {Int(-3), Int(13), Int(4)}, {Int(-9), Int(101), Int(5)},
    };
    for (const auto& s : cases) {
      const AlphaSpec alpha = AlphaSpec::surd(s.p, s.d, s.q);
      const auto& norm = std::get<QuadraticSurd>(alpha.variant());
      CHECK((norm.d - norm.p * norm.p) % norm.q == 0);
      CHECK(quotients(alpha, 40).a == surd_quotients_oracle(s, 40));
    }
  }

  TEST_CASE("surd normalization and reduction mod 1") {
    // (1 + sqrt 5)/3 is not normalized (3 does not divide 5 - 1)
    const AlphaSpec alpha = AlphaSpec::surd(Int(1), Int(5), Int(3));
    const QuadraticSurd reduced{Int(-2), Int(5), Int(3)};  // value minus 1
    CHECK(quotients(alpha, 30).a == surd_quotients_oracle(reduced, 30));
    CHECK_THROWS_AS(AlphaSpec::surd(Int(0), Int(4), Int(1)), InvalidInput);
    CHECK_THROWS_AS(AlphaSpec::surd(Int(0), Int(5), Int(0)), InvalidInput);
  }

  TEST_CASE("periodic structure of surds") {
    const SurdExpansion g = expand_quadratic(std::get<QuadraticSurd>(AlphaSpec::golden().variant()));
    CHECK(g.preperiod.empty());
    CHECK(g.period == ints({1}));
    const SurdExpansion s7 = expand_quadratic(std::get<QuadraticSurd>(AlphaSpec::surd(Int(-2), Int(7), Int(1)).variant()));
    CHECK(s7.preperiod.empty());
    CHECK(s7.period == ints({1, 1, 1, 4}));
    const SurdExpansion s3 = expand_quadratic(std::get<QuadraticSurd>(AlphaSpec::surd(Int(-1), Int(3), Int(2)).variant()));
    std::vector<Int> joined = s3.preperiod;
    joined.insert(joined.end(), s3.period.begin(), s3.period.end());
    CHECK(s3.period.size() == 2);
    CHECK(quotients(AlphaSpec::surd(Int(-1), Int(3), Int(2)), joined.size()).a == joined);
  }

  TEST_CASE("rational expansions") {
    const PartialQuotients pq = quotients(AlphaSpec::rational(Int(7), Int(16)), 3);
    CHECK(pq.a == ints({2, 3, 2}));
    CHECK(pq.finite);
    CHECK(evaluate(pq.a) == Rational(7, 16));
    CHECK_THROWS_AS(quotients(AlphaSpec::rational(Int(7), Int(16)), 4), ExpansionExhausted);
    try {
      quotients(AlphaSpec::rational(Int(7), Int(16)), 9);
    } catch (const ExpansionExhausted& e) {
      CHECK(e.available() == 3);
    }
    CHECK(std::get<RationalAlpha>(AlphaSpec::rational(Int(23), Int(16)).variant()).num == 7);
    CHECK(std::get<RationalAlpha>(AlphaSpec::rational(Int(-1), Int(4)).variant()).num == 3);
    CHECK_THROWS_AS(AlphaSpec::rational(Int(1), Int(0)), InvalidInput);

    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
      const Int den = from_u64(rng() % 100000 + 2);
      const Int num = from_u64(rng()) % den;
      const AlphaSpec alpha = AlphaSpec::rational(num, den);
      const auto& r = std::get<RationalAlpha>(alpha.variant());
      if (r.num == 0) continue;
      const PartialQuotients e = expand_rational(r.num, r.den);
      CHECK(evaluate(e.a) == make_rational(num, den));
    }
  }

  TEST_CASE("convergent recurrence and determinant identity") {
    check_recurrence(AlphaSpec::golden(), 60);
    check_recurrence(AlphaSpec::powers_of_two(), 40);
    check_recurrence(AlphaSpec::random_dyadic(5, 1024), 100);
    check_recurrence(AlphaSpec::constant_quotients(Int(7)), 30);
  }

  TEST_CASE("powers-of-two rule") {
    const auto a = quotients(AlphaSpec::powers_of_two(), 10).a;
    for (std::size_t k = 1; k <= 10; ++k) CHECK(a[k - 1] == pow2(k - 1));
  }

  TEST_CASE("random dyadic determinism and horizon") {
    const RandomDyadic r{42, 256};
    CHECK(dyadic_numerator(r) == dyadic_numerator(RandomDyadic{42, 256}));
    CHECK(dyadic_numerator(r) != dyadic_numerator(RandomDyadic{43, 256}));
    CHECK(dyadic_numerator(r) < pow2(256));
    CHECK(dyadic_horizon(4096) == 1182);
    CHECK(dyadic_horizon(64) == 18);
    const AlphaSpec alpha = AlphaSpec::random_dyadic(42, 64);
    CHECK_THROWS_AS(quotients(alpha, 19), HorizonExceeded);
    const PartialQuotients pq = quotients(AlphaSpec::random_dyadic(42, 4096), 50);
    REQUIRE(pq.horizon.has_value());
    CHECK(*pq.horizon == 1182);
    // the certified prefix agrees with the exact dyadic rational
    const Int X = dyadic_numerator(RandomDyadic{42, 4096});
    const PartialQuotients exact = expand_rational(X / gcd(X, pow2(4096)), pow2(4096) / gcd(X, pow2(4096)));
    CHECK(std::vector<Int>(exact.a.begin(), exact.a.begin() + 50) == pq.a);
  }

  TEST_CASE("quotient stream copies continue identically") {
    QuotientStream s(AlphaSpec::random_dyadic(3, 2048));
    for (int i = 0; i < 10; ++i) s.next();
    QuotientStream t(s);
    for (int i = 0; i < 20; ++i) CHECK(*s.next() == *t.next());
    CHECK(s.produced() == 30);
    QuotientStream r(AlphaSpec::rational(Int(1), Int(3)));
    CHECK(*r.next() == 3);
    CHECK_FALSE(r.next().has_value());
  }

  TEST_CASE("locate") {
    ConvergentTable t(AlphaSpec::golden());
    CHECK(t.locate(Int(10)) == 5);
    CHECK(t.locate(Int(13)) == 6);
    CHECK(t.locate(Int(1)) == 1);
    CHECK(t.locate(Int(12)) == 5);
    ConvergentTable r(AlphaSpec::rational(Int(7), Int(16)));
    CHECK(r.locate(Int(15)) == 2);
    CHECK_THROWS_AS(r.locate(Int(16)), ExpansionExhausted);
    CHECK_THROWS_AS(t.locate(Int(0)), InvalidInput);
    std::mt19937_64 rng(5);
    ConvergentTable d(AlphaSpec::random_dyadic(9, 4096));
    for (int i = 0; i < 200; ++i) {
      const Int M = from_u64(rng() % 1000000000 + 1);
      const std::size_t k = d.locate(M);
      CHECK(d[k].q <= M);
      CHECK(M < d[k + 1].q);
    }
  }
}
