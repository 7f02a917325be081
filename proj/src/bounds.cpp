#include "malpha/bounds.hpp"

#include <utility>

#include "malpha/elementary.hpp"
#include "malpha/errors.hpp"

namespace malpha {
namespace {

RationalInterval ratio(const RationalInterval& num, const RationalInterval& den) {
  return (num / den).rounded_outward(kRatioBits);
}

BoundReport make_report(ConvergentTable& table, std::uint64_t M, const RationalInterval& s) {
  BoundReport r;
  r.M = M;
  const Int m = from_u64(M);
  r.k = table.locate(m);
  r.q_k = table[r.k].q;
  r.q_next = table[r.k + 1].q;
  r.a_next = table.quotient(r.k + 1);
  r.a_next_exceeds_q = r.a_next > r.q_k;
  r.s_m = s;

  const Rational mr(m);
  const RationalInterval mlnq = ln_enclosure(r.q_k, kRefLogBits) * mr;
  r.small_m = M < 2 || r.q_k == 1;
  r.lower_ref = r.small_m ? RationalInterval(Rational(1)) : mlnq;
  r.upper_ref = mlnq + RationalInterval(Rational(r.a_next * m));
  r.upper_improved_ref = mlnq + (ln_enclosure(r.a_next, kRefLogBits) + RationalInterval(Rational(1))) * mr;

  r.ratio_lower = ratio(s, r.lower_ref);
  r.ratio_upper = ratio(s, r.upper_ref);
  r.ratio_improved = ratio(s, r.upper_improved_ref);
  if (M >= 2) r.ratio_mlnm = ratio(s, ln_enclosure(m, kRefLogBits) * mr);
  return r;
}

class GrowthQuotientRule final : public QuotientRule {
 public:
  explicit GrowthQuotientRule(GrowthRule rule) : rule_(std::move(rule)) {
    if (rule_.kind == GrowthKind::ceil_exp && !rule_.cap) rule_.cap = default_exp_cap();
  }

  std::string name() const override {
    switch (rule_.kind) {
      case GrowthKind::square:
        return "square";
      case GrowthKind::ceil_exp:
        return "exp";
      case GrowthKind::custom:
        break;
    }
    return rule_.custom_name;
  }

  Int next(std::size_t k, std::span<const Convergent> prefix) const override {
    Int a;
    if (k == 1) {
      a = rule_.seed;
    } else {
      const Int& q = prefix[k - 1].q;
      switch (rule_.kind) {
        case GrowthKind::square:
          a = q * q;
          break;
        case GrowthKind::ceil_exp:
          // exp(q) > 2^q already exceeds the cap here
          if (q > Int(bit_length(*rule_.cap))) throw_cap(k);
          a = ceil_exp(q);
          break;
        case GrowthKind::custom:
          a = rule_.custom(k - 1, q);
          break;
      }
    }
    if (a < 1) throw InvalidInput("growth rule produced a_" + std::to_string(k) + " < 1");
    if (rule_.cap && a > *rule_.cap) throw_cap(k);
    return a;
  }

 private:
  [[noreturn]] void throw_cap(std::size_t k) const {
    throw CapExceeded("growth rule " + name() + ": a_" + std::to_string(k) + " exceeds the cap", k);
  }

  GrowthRule rule_;
};

}  // namespace

std::size_t locate_k(const AlphaSpec& alpha, std::uint64_t M) {
  ConvergentTable table(alpha);
  return table.locate(from_u64(M));
}

BoundReport bound_report(const AlphaSpec& alpha, std::uint64_t M, const SumOptions& opts) {
  const SumReport sum = s_m(alpha, M, opts);
  ConvergentTable table(alpha);
  return make_report(table, M, sum.total);
}

std::vector<BoundReport> ratio_scan(const AlphaSpec& alpha, const std::vector<std::uint64_t>& grid,
                                    const SumOptions& opts) {
  std::vector<BoundReport> out;
  if (grid.empty()) return out;
  if (grid.front() < 1) throw InvalidInput("ratio_scan: grid values must be >= 1");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) throw InvalidInput("ratio_scan: grid must be strictly increasing");
  }
  PrefixSummer summer(alpha, opts);
  ConvergentTable table(alpha);
  out.reserve(grid.size());
  for (const std::uint64_t M : grid) out.push_back(make_report(table, M, summer.advance_to(M)));
  return out;
}

std::vector<std::uint64_t> denominator_grid(const AlphaSpec& alpha, std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  ConvergentTable table(alpha);
  const Int lo_z = from_u64(lo);
  const Int hi_z = from_u64(hi);
  for (std::size_t k = 1; table.extend_to(k) && table[k].q <= hi_z; ++k) {
    const Int& q = table[k].q;
    if (q < lo_z) continue;
    const std::uint64_t v = to_u64(q);
    if (out.empty() || out.back() != v) out.push_back(v);
  }
  return out;
}

GrowthRule GrowthRule::square(std::optional<Int> cap) {
  GrowthRule r;
  r.kind = GrowthKind::square;
  r.cap = std::move(cap);
  return r;
}

GrowthRule GrowthRule::ceil_exp(std::optional<Int> cap) {
  GrowthRule r;
  r.kind = GrowthKind::ceil_exp;
  r.cap = std::move(cap);
  return r;
}

Int default_exp_cap() { return pow2(1 << 16); }

AlphaSpec build_pathological(const GrowthRule& rule, std::size_t K) {
  if (K < 1) throw InvalidInput("build_pathological: K must be >= 1");
  if (rule.kind == GrowthKind::custom && !rule.custom) {
    throw InvalidInput("build_pathological: custom rule without a function");
  }
  if (rule.seed < 1) throw InvalidInput("build_pathological: seed a_1 must be >= 1");
  AlphaSpec alpha = AlphaSpec::rule(std::make_shared<GrowthQuotientRule>(rule));
  ConvergentTable table(alpha);
  table.require(K);
  return alpha;
}

BoundedTypeResult bounded_type_check(const AlphaSpec& alpha, std::size_t K, const Int& B) {
  const PartialQuotients pq = quotients(alpha, K);
  BoundedTypeResult r;
  for (const Int& a : pq.a) {
    if (a > r.max_quotient) r.max_quotient = a;
  }
  r.bounded = r.max_quotient <= B;
  return r;
}

}  // namespace malpha
