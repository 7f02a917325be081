#include <doctest.h>

#include <random>

#include "malpha/alpha_eval.hpp"
#include "malpha/errors.hpp"
#include "malpha/term_kernel.hpp"

using namespace malpha;

namespace {

const std::vector<QuadraticSurd>& surd_corpus() {
  static const std::vector<QuadraticSurd> c = {
      {Int(-1), Int(5), Int(2)}, {Int(-1), Int(2), Int(1)}, {Int(-1), Int(3), Int(2)},
      {Int(-3), Int(13), Int(4)}, {Int(-9), Int(101), Int(5)},
  };
  return c;
}

RationalInterval iv(long a, long b, long den) { return RationalInterval(Rational(a, den), Rational(b, den)); }

}  // namespace

TEST_SUITE("alpha_eval") {
  TEST_CASE("norm_dist_interval") {
    CHECK(*norm_dist_interval(iv(1, 2, 10)) == iv(1, 2, 10));
    CHECK(*norm_dist_interval(iv(7, 8, 10)) == iv(2, 3, 10));
    CHECK(*norm_dist_interval(iv(21, 22, 10)) == iv(1, 2, 10));
    CHECK(*norm_dist_interval(iv(-8, -7, 10)) == iv(2, 3, 10));
    CHECK_FALSE(norm_dist_interval(iv(4, 6, 10)).has_value());
    CHECK_FALSE(norm_dist_interval(iv(9, 11, 10)).has_value());
    CHECK(norm_dist_rational(Rational(7, 3)) == Rational(1, 3));
    CHECK(norm_dist_rational(Rational(-1, 4)) == Rational(1, 4));
  }

  TEST_CASE("alpha enclosure contains the surd") {
    for (const auto& s : surd_corpus()) {
      const AlphaSpec alpha = AlphaSpec::surd(s.p, s.d, s.q);
      const QuadraticNumber x = QuadraticNumber::from_surd(s);
      for (std::size_t k = 0; k < 30; ++k) CHECK(x.inside(alpha_enclosure(alpha, k)));
    }
  }

  TEST_CASE("adaptive enclosure contains the exact distance") {
    std::mt19937_64 rng(3);
    for (const auto& s : surd_corpus()) {
      const AlphaSpec alpha = AlphaSpec::surd(s.p, s.d, s.q);
      ConvergentTable table(alpha);
      for (int i = 0; i < 300; ++i) {
        const Int m = from_u64(rng() % 1000000 + 1);
        const NormDistEnclosure e = norm_dist_malpha(m, table, default_rel_tol());
        CHECK(norm_dist_surd(m, s).inside(e.interval));
        CHECK(e.interval.relative_width() <= default_rel_tol());
      }
    }
  }

  TEST_CASE("tighter tolerance deepens") {
    const AlphaSpec alpha = AlphaSpec::golden();
    const Rational tight(Int(1), pow2(100));
    const NormDistEnclosure e = norm_dist_malpha(Int(1000), alpha, tight);
    CHECK(e.interval.relative_width() <= tight);
    CHECK(e.depth_used > norm_dist_malpha(Int(1000), alpha).depth_used);
  }

  TEST_CASE("rational alpha") {
    const AlphaSpec third = AlphaSpec::rational(Int(1), Int(3));
    CHECK(norm_dist_malpha(Int(1), third).interval == RationalInterval(Rational(1, 3)));
    CHECK(norm_dist_malpha(Int(2), third).interval == RationalInterval(Rational(1, 3)));
    CHECK_THROWS_AS(norm_dist_malpha(Int(3), third), DegenerateRational);
    CHECK_THROWS_AS(norm_dist_malpha(Int(2), AlphaSpec::rational(Int(1), Int(4))), DegenerateRational);
    CHECK_THROWS_AS(norm_dist_malpha(Int(0), third), InvalidInput);
  }

  TEST_CASE("term kernel paths agree with the exact value") {
    for (const auto& s : surd_corpus()) {
      const AlphaSpec alpha = AlphaSpec::surd(s.p, s.d, s.q);
      TermKernel kernel(alpha, default_rel_tol());
      CHECK(kernel.fast_path_enabled());
      std::mt19937_64 rng(17);
      for (int i = 0; i < 2000; ++i) {
        const std::uint64_t m = i < 1000 ? static_cast<std::uint64_t>(i + 1) : rng() % (1ULL << 40) + 1;
        const QuadraticNumber d = norm_dist_surd(from_u64(m), s);
        CHECK(d.inside(kernel.distance(m)));
        TermValue tv;
        kernel.term(m, tv);
        CHECK(d.reciprocal().inside(tv.interval()));
        // per-term relative width: tolerance plus one grid step
        const RationalInterval t = tv.interval();
        CHECK(t.width() <= default_rel_tol() * t.hi() + Rational(Int(2), pow2(kTermScaleBits)));
      }
      CHECK(kernel.fast_count() > 0);
    }
  }

  TEST_CASE("term kernel rejects degenerate rationals") {
    TermKernel k4(AlphaSpec::rational(Int(1), Int(4)), default_rel_tol());
    TermValue tv;
    k4.term(1, tv);
    CHECK(tv.interval().contains(Rational(4)));
    CHECK_THROWS_AS(k4.term(2, tv), DegenerateRational);
    TermKernel k3(AlphaSpec::rational(Int(1), Int(3)), default_rel_tol());
    CHECK_THROWS_AS(k3.term(3, tv), DegenerateRational);
    CHECK_THROWS_AS(TermKernel(AlphaSpec::golden(), Rational(0)), InvalidInput);
  }
}
