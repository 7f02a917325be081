#include "malpha/alpha_eval.hpp"

#include "malpha/errors.hpp"

namespace malpha {

Rational default_rel_tol() { return Rational(1, 1 << 20); }

RationalInterval alpha_enclosure(ConvergentTable& table, std::size_t k) {
  table.require(k);
  const Convergent& ck = table[k];
  const Rational at_k(ck.p, ck.q);  // gcd(p_k, q_k) = 1
  if (!table.extend_to(k + 1)) return RationalInterval(at_k);
  const Convergent& cn = table[k + 1];
  return RationalInterval::hull(at_k, Rational(cn.p, cn.q));
}

RationalInterval alpha_enclosure(const AlphaSpec& alpha, std::size_t k) {
  ConvergentTable table(alpha);
  return alpha_enclosure(table, k);
}

Rational norm_dist_rational(const Rational& x) {
  const Int n = floor(x);
  Rational frac = x - Rational(n);
  Rational other = 1 - frac;
  return frac <= other ? frac : other;
}

std::optional<RationalInterval> norm_dist_interval(const RationalInterval& x) {
  const Int n = floor(x.midpoint());
  const Rational lo = x.lo() - Rational(n);
  const Rational hi = x.hi() - Rational(n);
  const Rational half(1, 2);
  if (sgn(lo) > 0 && hi <= half) return RationalInterval(lo, hi);
  if (lo >= half && hi < 1) return RationalInterval(1 - hi, 1 - lo);
  return std::nullopt;
}

NormDistEnclosure norm_dist_malpha(const Int& m, ConvergentTable& table, const Rational& rel_tol) {
  if (m < 1) throw InvalidInput("norm_dist_malpha: m must be >= 1");
  if (sgn(rel_tol) <= 0) throw InvalidInput("norm_dist_malpha: rel_tol must be positive");
  // Below the first k with q_{k+1} > m the enclosure width m/(q_k q_{k+1})
  // exceeds 1/q_k, so start there.
  std::size_t k = 0;
  while (table.extend_to(k + 1) && table[k + 1].q <= m) ++k;
  for (;; ++k) {
    if (!table.extend_to(k + 1)) {
      // k is the last index of a finite expansion: alpha = p_k/q_k exactly.
      table.require(k);
      const Rational x = Rational(m) * Rational(table[k].p, table[k].q);
      const Rational d = norm_dist_rational(x);
      if (d == 0 || d == Rational(1, 2)) {
        throw DegenerateRational("rational alpha: m*alpha = " + to_string(x) +
                                 " is an integer or half-integer (m = " + m.get_str() + ")");
      }
      return NormDistEnclosure{m, RationalInterval(d), k};
    }
    const RationalInterval scaled = alpha_enclosure(table, k) * Rational(m);
    auto dist = norm_dist_interval(scaled);
    if (!dist || sgn(dist->lo()) <= 0) continue;
    if (dist->width() <= rel_tol * dist->lo()) return NormDistEnclosure{m, *dist, k};
  }
}

NormDistEnclosure norm_dist_malpha(const Int& m, const AlphaSpec& alpha, const Rational& rel_tol) {
  ConvergentTable table(alpha);
  return norm_dist_malpha(m, table, rel_tol);
}

Int residue(const Int& t, const Int& q) { return mod(t, q); }

QuadraticNumber norm_dist_surd(const Int& m, const QuadraticSurd& s) {
  if (m < 1) throw InvalidInput("norm_dist_surd: m must be >= 1");
  return (QuadraticNumber::from_surd(s) * Rational(m)).norm_dist();
}

}  // namespace malpha
