#include "malpha/cf.hpp"

#include <cmath>
#include <map>
#include <random>
#include <utility>

#include "malpha/errors.hpp"

namespace malpha {
namespace {

class PowersOfTwoRule final : public QuotientRule {
 public:
  std::string name() const override { return "pow2"; }
  Int next(std::size_t k, std::span<const Convergent>) const override {
    return pow2(static_cast<unsigned long>(k - 1));
  }
};

class ConstantRule final : public QuotientRule {
 public:
  explicit ConstantRule(Int c) : c_(std::move(c)) {}
  std::string name() const override { return "const:" + c_.get_str(); }
  Int next(std::size_t, std::span<const Convergent>) const override { return c_; }

 private:
  Int c_;
};

// floor((p + sqrt d) / q) for non-square d, q != 0.
Int floor_surd(const Int& p, const Int& d, const Int& q) {
  const Int s = isqrt(d);
  if (sgn(q) > 0) return floor_div(p + s, q);
  return floor_div(p + s + 1, q);
}

struct EuclidState {
  Int num;  // current tail num/den in [0, 1)
  Int den;
};

struct SurdState {
  Int p;  // current tail (p + sqrt d)/q in (0, 1)
  Int d;
  Int q;
};

struct RuleState {
  std::shared_ptr<const QuotientRule> rule;
  std::vector<Convergent> prefix;
};

struct DyadicState {
  EuclidState euclid;
  Int q_prev = 0;  // q_{k-1}
  Int q_cur = 1;   // q_k
  Int limit;       // 2^bits
  std::size_t horizon = 0;
  std::uint32_t bits = 0;
};

std::optional<Int> euclid_step(EuclidState& s) {
  if (s.num == 0) return std::nullopt;
  Int a;
  Int r;
  mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), s.den.get_mpz_t(), s.num.get_mpz_t());
  s.den = std::move(s.num);
  s.num = std::move(r);
  return a;
}

Int surd_step(SurdState& s) {
  // 1/x = (-p + sqrt d) / ((d - p^2)/q)
  Int p1 = -s.p;
  Int q1 = (s.d - s.p * s.p) / s.q;
  Int a = floor_surd(p1, s.d, q1);
  s.p = p1 - a * q1;
  s.q = std::move(q1);
  return a;
}

}  // namespace

struct QuotientStream::State {
  std::variant<EuclidState, SurdState, RuleState, DyadicState> v;
  std::size_t produced = 0;
};

std::size_t dyadic_horizon(std::uint32_t bits) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(bits) * std::log(2.0) / 2.4));
}

Int dyadic_numerator(const RandomDyadic& r) {
  std::mt19937_64 eng(r.seed);
  const std::uint32_t words = (r.bits + 63) / 64;
  Int x = 0;
  for (std::uint32_t i = 0; i < words; ++i) {
    x <<= 64;
    x += from_u64(eng());
  }
  x >>= (64 * words - r.bits);
  return x;
}

AlphaSpec AlphaSpec::rational(const Int& num, const Int& den) {
  if (den == 0) throw InvalidInput("zero denominator");
  Int n = num;
  Int d = den;
  if (sgn(d) < 0) {
    n = -n;
    d = -d;
  }
  n = mod(n, d);
  Int g = gcd(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n == 0) d = 1;
  return AlphaSpec(RationalAlpha{n, d});
}

AlphaSpec AlphaSpec::surd(const Int& p, const Int& d, const Int& q) {
  if (q == 0) throw InvalidInput("surd denominator must be nonzero");
  if (sgn(d) <= 0 || is_perfect_square(d)) throw InvalidInput("surd radicand must be a positive non-square");
  Int P = p;
  Int D = d;
  Int Q = q;
  if (mod(D - P * P, abs(Q)) != 0) {
    const Int aq = abs(Q);
    P *= aq;
    D *= Q * Q;
    Q *= aq;
  }
  P -= floor_surd(P, D, Q) * Q;
  return AlphaSpec(QuadraticSurd{P, D, Q});
}

AlphaSpec AlphaSpec::golden() { return surd(Int(-1), Int(5), Int(2)); }
AlphaSpec AlphaSpec::silver() { return surd(Int(-1), Int(2), Int(1)); }

AlphaSpec AlphaSpec::rule(std::shared_ptr<const QuotientRule> rule) {
  if (!rule) throw InvalidInput("null quotient rule");
  return AlphaSpec(RuleAlpha{std::move(rule)});
}

AlphaSpec AlphaSpec::powers_of_two() { return rule(std::make_shared<PowersOfTwoRule>()); }

AlphaSpec AlphaSpec::constant_quotients(const Int& c) {
  if (c < 1) throw InvalidInput("constant quotient must be >= 1");
  return rule(std::make_shared<ConstantRule>(c));
}

AlphaSpec AlphaSpec::random_dyadic(std::uint64_t seed, std::uint32_t bits) {
  if (bits == 0) throw InvalidInput("random dyadic needs at least one bit");
  return AlphaSpec(RandomDyadic{seed, bits});
}

std::string AlphaSpec::describe() const {
  struct Visitor {
    std::string operator()(const RationalAlpha& r) const {
      return "rational " + r.num.get_str() + "/" + r.den.get_str();
    }
    std::string operator()(const QuadraticSurd& s) const {
      return "surd (" + s.p.get_str() + "+sqrt(" + s.d.get_str() + "))/" + s.q.get_str();
    }
    std::string operator()(const RuleAlpha& r) const { return "rule " + r.rule->name(); }
    std::string operator()(const RandomDyadic& r) const {
      return "random seed=" + std::to_string(r.seed) + " bits=" + std::to_string(r.bits);
    }
  };
  return std::visit(Visitor{}, v_);
}

QuotientStream::QuotientStream(const AlphaSpec& alpha) : state_(std::make_unique<State>()) {
  struct Init {
    State& st;
    void operator()(const RationalAlpha& r) const { st.v = EuclidState{r.num, r.den}; }
    void operator()(const QuadraticSurd& s) const { st.v = SurdState{s.p, s.d, s.q}; }
    void operator()(const RuleAlpha& r) const { st.v = RuleState{r.rule, {Convergent{0, 0, 1}}}; }
    void operator()(const RandomDyadic& r) const {
      DyadicState ds;
      ds.euclid = EuclidState{dyadic_numerator(r), pow2(r.bits)};
      Int g = gcd(ds.euclid.num, ds.euclid.den);
      if (g > 1) {
        ds.euclid.num /= g;
        ds.euclid.den /= g;
      }
      ds.limit = pow2(r.bits);
      ds.horizon = dyadic_horizon(r.bits);
      ds.bits = r.bits;
      st.v = std::move(ds);
    }
  };
  std::visit(Init{*state_}, alpha.variant());
}

QuotientStream::QuotientStream(QuotientStream&&) noexcept = default;
QuotientStream& QuotientStream::operator=(QuotientStream&&) noexcept = default;
QuotientStream::QuotientStream(const QuotientStream& other)
    : state_(std::make_unique<State>(*other.state_)) {}
QuotientStream::~QuotientStream() = default;

std::size_t QuotientStream::produced() const { return state_->produced; }

std::optional<Int> QuotientStream::next() {
  State& st = *state_;
  const std::size_t k = st.produced + 1;
  std::optional<Int> a;
  if (auto* e = std::get_if<EuclidState>(&st.v)) {
    a = euclid_step(*e);
  } else if (auto* s = std::get_if<SurdState>(&st.v)) {
    a = surd_step(*s);
  } else if (auto* r = std::get_if<RuleState>(&st.v)) {
    Int value = r->rule->next(k, r->prefix);
    if (value < 1) throw InvalidInput("rule " + r->rule->name() + " produced a quotient < 1");
    const Convergent& c1 = r->prefix.back();
    const Int p2 = r->prefix.size() >= 2 ? r->prefix[r->prefix.size() - 2].p : Int(1);
    const Int q2 = r->prefix.size() >= 2 ? r->prefix[r->prefix.size() - 2].q : Int(0);
    r->prefix.push_back(Convergent{k, value * c1.p + p2, value * c1.q + q2});
    a = std::move(value);
  } else {
    auto& ds = std::get<DyadicState>(st.v);
    if (k > ds.horizon) {
      throw HorizonExceeded("random dyadic (" + std::to_string(ds.bits) + " bits): index " +
                                std::to_string(k) + " beyond horizon " + std::to_string(ds.horizon),
                            ds.horizon);
    }
    EuclidState probe = ds.euclid;
    a = euclid_step(probe);
    if (a) {
      Int q_next = *a * ds.q_cur + ds.q_prev;
      if (q_next * q_next > ds.limit) {
        throw HorizonExceeded("random dyadic (" + std::to_string(ds.bits) + " bits): q_" +
                                  std::to_string(k) + "^2 exceeds 2^bits",
                              k - 1);
      }
      ds.q_prev = std::move(ds.q_cur);
      ds.q_cur = std::move(q_next);
      ds.euclid = std::move(probe);
    }
  }
  if (a) ++st.produced;
  return a;
}

PartialQuotients expand_rational(const Int& num, const Int& den) {
  if (den < 1) throw InvalidInput("expand_rational: denominator must be >= 1");
  AlphaSpec alpha = AlphaSpec::rational(num, den);
  QuotientStream stream(alpha);
  PartialQuotients out;
  out.finite = true;
  while (auto a = stream.next()) out.a.push_back(std::move(*a));
  return out;
}

SurdExpansion expand_quadratic(const QuadraticSurd& s, std::size_t max_steps) {
  AlphaSpec alpha = AlphaSpec::surd(s.p, s.d, s.q);
  const auto& norm = std::get<QuadraticSurd>(alpha.variant());
  SurdState st{norm.p, norm.d, norm.q};
  std::map<std::pair<Int, Int>, std::size_t> seen;
  std::vector<Int> a;
  for (std::size_t i = 0; i <= max_steps; ++i) {
    auto key = std::make_pair(st.p, st.q);
    if (auto it = seen.find(key); it != seen.end()) {
      SurdExpansion out;
      out.preperiod.assign(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(it->second));
      out.period.assign(a.begin() + static_cast<std::ptrdiff_t>(it->second), a.end());
      return out;
    }
    seen.emplace(std::move(key), i);
    a.push_back(surd_step(st));
  }
  throw CycleNotFound("no cycle within " + std::to_string(max_steps) + " steps");
}

PartialQuotients quotients(const AlphaSpec& alpha, std::size_t k) {
  QuotientStream stream(alpha);
  PartialQuotients out;
  if (const auto* r = std::get_if<RandomDyadic>(&alpha.variant())) out.horizon = dyadic_horizon(r->bits);
  out.a.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    auto a = stream.next();
    if (!a) {
      throw ExpansionExhausted("expansion exhausted after " + std::to_string(i) + " quotients", i);
    }
    out.a.push_back(std::move(*a));
  }
  if (alpha.is_rational()) {
    QuotientStream peek = stream;
    out.finite = !peek.next().has_value();
  }
  return out;
}

std::vector<Convergent> convergents(const AlphaSpec& alpha, std::size_t k) {
  ConvergentTable table(alpha);
  table.require(k);
  return {table.all().begin(), table.all().begin() + static_cast<std::ptrdiff_t>(k + 1)};
}

Rational evaluate(std::span<const Int> a) {
  Rational x = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    x = 1 / (Rational(*it) + x);
  }
  return x;
}

ConvergentTable::ConvergentTable(const AlphaSpec& alpha) : alpha_(alpha), stream_(alpha) {
  conv_.push_back(Convergent{0, 0, 1});
}

bool ConvergentTable::extend_to(std::size_t k) {
  while (depth() < k) {
    if (exhausted_) return false;
    auto a = stream_.next();
    if (!a) {
      exhausted_ = true;
      return false;
    }
    const std::size_t n = conv_.size();
    const Convergent& c1 = conv_[n - 1];
    const Int p2 = n >= 2 ? conv_[n - 2].p : Int(1);
    const Int q2 = n >= 2 ? conv_[n - 2].q : Int(0);
    Convergent c{n, *a * c1.p + p2, *a * c1.q + q2};
    a_.push_back(std::move(*a));
    conv_.push_back(std::move(c));
  }
  return true;
}

void ConvergentTable::require(std::size_t k) {
  if (!extend_to(k)) {
    throw ExpansionExhausted("expansion exhausted after " + std::to_string(depth()) + " quotients", depth());
  }
}

std::size_t ConvergentTable::locate(const Int& M) {
  if (M < 1) throw InvalidInput("locate: M must be >= 1");
  std::size_t k = 0;
  while (true) {
    if (!extend_to(k + 1)) {
      throw ExpansionExhausted("expansion exhausted before q_{k+1} > M was witnessed", depth());
    }
    if (conv_[k + 1].q > M) return k;
    ++k;
  }
}

}  // namespace malpha
