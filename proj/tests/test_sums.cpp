#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "malpha/bounds.hpp"
#include "malpha/errors.hpp"
#include "malpha/sums.hpp"
#include "malpha/surd.hpp"

using namespace malpha;

namespace {

const QuadraticSurd kGolden{Int(-1), Int(5), Int(2)};
const QuadraticSurd kSilver{Int(-1), Int(2), Int(1)};

// Exact sum_{m=a}^{b} 1/||m alpha||^beta in Q(sqrt d).
QuadraticNumber exact_sum(const QuadraticSurd& s, std::uint64_t a, std::uint64_t b, unsigned beta = 1,
                          bool weighted = false) {
  QuadraticNumber total(Rational(0), Rational(0), s.d);
  for (std::uint64_t m = a; m <= b; ++m) {
    QuadraticNumber t = norm_dist_surd(from_u64(m), s).reciprocal().pow(beta);
    if (weighted) t = t * Rational(1, static_cast<long>(m));
    total = total + t;
  }
  return total;
}

Rational dec(const char* s) { return parse_rational(s); }

bool near(const RationalInterval& x, const char* value, double tol) {
  return std::abs(x.mid_approx() - to_double(dec(value))) < tol;
}

}  // namespace

TEST_SUITE("sums") {
  TEST_CASE("golden small M against exact values") {
    const AlphaSpec g = AlphaSpec::golden();
    const SumReport s1 = s_m(g, 1);
    CHECK(exact_sum(kGolden, 1, 1).inside(s1.total));
    CHECK(near(s1.total, "2.618033988749894848", 1e-9));
    CHECK(s1.k_used == 1);
    const SumReport s2 = s_m(g, 2);
    CHECK(exact_sum(kGolden, 1, 2).inside(s2.total));
    CHECK(near(s2.total, "6.854101966249684545", 1e-9));
    CHECK_THROWS_AS(s_m(g, 0), InvalidInput);
  }

  TEST_CASE("relative width composes from the per-term tolerance") {
    const SumReport r = s_m(AlphaSpec::golden(), 1000);
    CHECK(r.total.relative_width() <= default_rel_tol() + Rational(Int(1), pow2(kTermScaleBits)));
    CHECK(r.total.relative_width() < Rational(1, 10000));
    CHECK(exact_sum(kGolden, 1, 1000).inside(r.total));
  }

  TEST_CASE("beta and weighted sums") {
    const AlphaSpec g = AlphaSpec::golden();
    const RationalInterval b1 = s_m_beta(g, 1, Rational(2));
    CHECK(exact_sum(kGolden, 1, 1, 2).inside(b1));
    CHECK(near(b1, "6.854101966249684545", 1e-9));
    CHECK(s_m_beta(g, 1, Rational(1)) == s_m(g, 1).total);
    const RationalInterval b2 = s_m_beta(g, 2, Rational(2));
    CHECK(exact_sum(kGolden, 1, 2, 2).inside(b2));
    CHECK(near(b2, "24.79837387624884333", 1e-8));
    CHECK_THROWS_AS(s_m_beta(g, 2, Rational(1, 2)), InvalidInput);

    // beta = 3/2 at M = 1: (phi^2)^(3/2) = phi^3 = 2 + sqrt 5
    CHECK(QuadraticNumber(Rational(2), Rational(1), Int(5)).inside(s_m_beta(g, 1, Rational(3, 2))));
    // terms t >= 2, so t <= t^(3/2) <= t^2 / sqrt 2
    const RationalInterval b32 = s_m_beta(g, 50, Rational(3, 2));
    CHECK(b32.lo() >= s_m(g, 50).total.lo());
    const QuadraticNumber s2 = exact_sum(kGolden, 1, 50, 2);
    CHECK((s2 * s2).compare(b32.lo() * b32.lo() * 2) > 0);

    CHECK(exact_sum(kGolden, 1, 1, 1, true).inside(s_m_weighted(g, 1)));
    const RationalInterval w2 = s_m_weighted(g, 2);
    CHECK(exact_sum(kGolden, 1, 2, 1, true).inside(w2));
    CHECK(near(w2, "4.736067977499789696", 1e-9));
    const RationalInterval sv = s_m(AlphaSpec::silver(), 1).total;
    CHECK(exact_sum(kSilver, 1, 1).inside(sv));
    CHECK(near(sv, "2.414213562373095049", 1e-9));
    CHECK(exact_sum(kSilver, 1, 300, 1, true).inside(s_m_weighted(AlphaSpec::silver(), 300)));
  }

  TEST_CASE("cesaro means") {
    const auto c = cesaro_means(AlphaSpec::golden(), 200);
    REQUIRE(c.size() == 200);
    CHECK(exact_sum(kGolden, 1, 1).inside(c[0]));
    CHECK(near(c[1], "4.736067977499789696", 1e-9));
    const RationalInterval s1 = s_m(AlphaSpec::golden(), 1).total;
    for (std::size_t n = 1; n <= c.size(); ++n) {
      CHECK(c[n - 1].lo() >= s1.lo() / static_cast<long>(n));
    }
    // entry n-1 is the mean of S_1..S_n
    QuadraticNumber acc(Rational(0), Rational(0), Int(5));
    QuadraticNumber running(Rational(0), Rational(0), Int(5));
    for (std::uint64_t n = 1; n <= 30; ++n) {
      running = running + norm_dist_surd(from_u64(n), kGolden).reciprocal();
      acc = acc + running;
      CHECK((acc * Rational(1, static_cast<long>(n))).inside(c[n - 1]));
    }
    CHECK_THROWS_AS(cesaro_means(AlphaSpec::golden(), 0), InvalidInput);
  }

  TEST_CASE("block profile") {
    const AlphaSpec g = AlphaSpec::golden();
    const RationalInterval b = block_profile(g, 5, 0);
    CHECK(exact_sum(kGolden, 1, 8).inside(b));
    CHECK(near(b, "51.35297834237259202", 1e-8));
    CHECK(exact_sum(kGolden, 9, 16).inside(block_profile(g, 5, 1)));
    // proof-shape lower bound: block >= (1/2) q_k sum 1/(n+1)
    for (std::size_t k = 3; k <= 20; ++k) {
      ConvergentTable t(g);
      t.require(k + 1);
      const std::uint64_t q = to_u64(t[k].q);
      const RationalInterval ref = block_harmonic_reference(q);
      for (std::uint64_t l = 0; l < 3; ++l) CHECK(block_profile(g, k, l).lo() * 2 >= ref.hi());
    }
  }

  TEST_CASE("harmonic reference") {
    const RationalInterval r = block_harmonic_reference(3);
    CHECK(r.contains(Rational(3) * (Rational(1, 2) + Rational(1, 3) + Rational(1, 4))));
    CHECK(r.width() <= Rational(Int(3), pow2(64)));
  }

  TEST_CASE("partition identities") {
    for (const AlphaSpec& alpha : {AlphaSpec::golden(), AlphaSpec::powers_of_two(), AlphaSpec::random_dyadic(1, 4096)}) {
      for (const std::uint64_t M : {1ULL, 7ULL, 100ULL, 1234ULL, 50000ULL}) {
        const SumReport r = s_m(alpha, M);
        RationalInterval blocks(Rational(0));
        for (const auto& b : r.block_subtotals) blocks += b;
        CHECK((blocks + r.tail) == r.total);
        CHECK((r.special_total + r.bulk_total) == r.total);
        RationalInterval specials(Rational(0));
        for (const auto& t : r.special_terms) specials += t.term;
        CHECK(specials.contains(r.special_total));
        CHECK(r.special_total.contains(specials));
        const std::uint64_t p = to_u64(mod(r.p_k, r.q_k));
        const std::uint64_t q = to_u64(r.q_k);
        CHECK(r.special_terms.size() == count_special(M, p, q));
        for (const auto& t : r.special_terms) CHECK(is_special_residue(t.m, p, q));
        CHECK(r.q_k <= from_u64(M));
        CHECK(r.block_subtotals.size() == M / q);
      }
    }
  }

  TEST_CASE("count_special matches brute force") {
    for (std::uint64_t q : {1ULL, 2ULL, 3ULL, 5ULL, 8ULL, 13ULL, 89ULL, 1000ULL}) {
      for (std::uint64_t p = 0; p < std::min<std::uint64_t>(q, 50); ++p) {
        if (std::gcd(p, q) != 1) continue;
        for (std::uint64_t M : std::initializer_list<std::uint64_t>{1, 2, q, 3 * q + 1, 1000}) {
          std::uint64_t brute = 0;
          for (std::uint64_t m = 1; m <= M; ++m) brute += is_special_residue(m, p, q) ? 1 : 0;
          CHECK(count_special(M, p, q) == brute);
        }
      }
    }
  }

  TEST_CASE("parallel and sequential agree exactly") {
    setenv("MALPHA_THREADS", "4", 1);
    SumOptions par;
    par.execution = Execution::parallel;
    for (const AlphaSpec& alpha : {AlphaSpec::golden(), AlphaSpec::random_dyadic(2, 4096)}) {
      const SumReport a = s_m(alpha, 200000);
      const SumReport b = s_m(alpha, 200000, par);
      CHECK(a.total == b.total);
      CHECK(a.tail == b.tail);
      CHECK(a.block_subtotals == b.block_subtotals);
      CHECK(a.special_terms.size() == b.special_terms.size());
      PrefixSummer ps(alpha, par);
      CHECK(ps.advance_to(200000) == a.total);
    }
    unsetenv("MALPHA_THREADS");
  }

  TEST_CASE("monotone prefix sums") {
    const AlphaSpec alpha = AlphaSpec::random_dyadic(4, 4096);
    PrefixSummer ps(alpha);
    RationalInterval prev = ps.advance_to(1);
    CHECK(prev.lo() > 0);
    for (std::uint64_t M = 2; M <= 500; ++M) {
      const RationalInterval cur = ps.advance_to(M);
      CHECK(cur.lo() >= prev.lo());
      CHECK(cur == s_m(alpha, M).total);
      prev = cur;
    }
    CHECK_THROWS_AS(ps.advance_to(10), InvalidInput);
  }

  TEST_CASE("cauchy-schwarz for beta = 2") {
    for (const AlphaSpec& alpha : {AlphaSpec::golden(), AlphaSpec::random_dyadic(8, 4096)}) {
      for (const std::uint64_t M : {10ULL, 1000ULL}) {
        const RationalInterval s = s_m(alpha, M).total;
        const RationalInterval s2 = s_m_beta(alpha, M, Rational(2));
        CHECK(s2.lo() * static_cast<long>(M) >= s.lo() * s.lo());
      }
    }
  }

  TEST_CASE("special term dominance for the square rule") {
    const AlphaSpec alpha = build_pathological(GrowthRule::square(), 6);
    ConvergentTable t(alpha);
    t.require(6);
    for (std::size_t k = 2; k <= 4; ++k) {
      const std::uint64_t q = to_u64(t[k].q);
      CHECK(t.quotient(k + 1) >= t[k].q * t[k].q);
      const SumReport r = s_m(alpha, q);
      const auto& last = r.special_terms.back();
      CHECK(last.m == q);
      // 1/||q_k alpha|| lies in (q_{k+1}, q_{k+1} + q_k)
      CHECK(last.term.hi() > Rational(t[k + 1].q));
      CHECK(last.term.lo() < Rational(t[k + 1].q + t[k].q));
      CHECK(last.term.lo() * 2 > r.bulk_total.hi());
    }
  }

  TEST_CASE("rational alpha is rejected when undefined") {
    CHECK_THROWS_AS(s_m(AlphaSpec::rational(Int(1), Int(4)), 10), DegenerateRational);
    CHECK_THROWS_AS(s_m(AlphaSpec::rational(Int(1), Int(4)), 2), DegenerateRational);
    CHECK_NOTHROW(s_m(AlphaSpec::rational(Int(1), Int(4)), 1));
    CHECK_NOTHROW(s_m(AlphaSpec::rational(Int(1), Int(1001)), 1000));
    CHECK_THROWS_AS(s_m(AlphaSpec::rational(Int(1), Int(1001)), 1001), DegenerateRational);
    CHECK_THROWS_AS(s_m(AlphaSpec::rational(Int(0), Int(1)), 1), DegenerateRational);
  }

  TEST_CASE("deadline") {
    SumOptions o;
    o.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
    CHECK_THROWS_AS(s_m(AlphaSpec::golden(), 1 << 20, o), BudgetExceeded);
  }
}
