#include "malpha/metric.hpp"

#include <cctype>
#include <cfloat>
#include <cmath>
#include <numbers>

#include "malpha/elementary.hpp"
#include "malpha/errors.hpp"

namespace malpha {
namespace {

constexpr unsigned kMaxPhiBits = 4096;

std::string trim_lower(std::string_view text) {
  std::string out;
  for (const char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  return out;
}

unsigned parse_exponent(const std::string& digits, std::string_view factor) {
  if (digits.empty() || digits.size() > 3) {
    throw InvalidInput("phi: bad exponent in factor '" + std::string(factor) + "'");
  }
  for (const char ch : digits) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) {
      throw InvalidInput("phi: bad exponent in factor '" + std::string(factor) + "'");
    }
  }
  return static_cast<unsigned>(std::stoul(digits));
}

// Parses "log", "log2", "log^2", each optionally followed by "k" or "(k+1)".
bool parse_log_factor(const std::string& f, unsigned& t) {
  std::string rest;
  if (f.rfind("log", 0) == 0) {
    rest = f.substr(3);
  } else if (f.rfind("ln", 0) == 0) {
    rest = f.substr(2);
  } else {
    return false;
  }
  for (const char* suffix : {"(k+1)", "k"}) {
    const std::string s(suffix);
    if (rest.size() >= s.size() && rest.compare(rest.size() - s.size(), s.size(), s) == 0) {
      rest.erase(rest.size() - s.size());
      break;
    }
  }
  if (!rest.empty() && rest[0] == '^') rest.erase(0, 1);
  t += rest.empty() ? 1 : parse_exponent(rest, f);
  return true;
}

// Exact conversion of a finite long double.
Rational from_long_double(long double v) {
  if (v == 0) return Rational(0);
  const bool neg = v < 0;
  int e = 0;
  const long double m = std::frexp(std::fabs(v), &e);  // v = m 2^e, m in [1/2, 1)
  const auto mant = static_cast<std::uint64_t>(std::ldexp(m, 64));
  Rational r(from_u64(mant));
  const int shift = e - 64;
  if (shift >= 0) {
    r *= Rational(pow2(static_cast<unsigned long>(shift)));
  } else {
    r /= Rational(pow2(static_cast<unsigned long>(-shift)));
  }
  return neg ? Rational(-r) : r;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RationalInterval ln_of_interval(const RationalInterval& y, unsigned bits) {
  return RationalInterval(ln_enclosure(y.lo(), bits).lo(), ln_enclosure(y.hi(), bits).hi());
}

RationalInterval pow_interval(const RationalInterval& x, unsigned e) {
  // x >= 0
  return RationalInterval(pow(x.lo(), e), pow(x.hi(), e));
}

}  // namespace

PhiSpec PhiSpec::constant(const Rational& c) {
  if (sgn(c) <= 0) throw InvalidInput("phi: constant must be positive");
  PhiSpec p;
  p.c = c;
  return p;
}

PhiSpec PhiSpec::log_power(unsigned t) {
  PhiSpec p;
  p.t = t;
  return p;
}

PhiSpec PhiSpec::power(unsigned s) {
  PhiSpec p;
  p.s = s;
  return p;
}

PhiSpec PhiSpec::parse(std::string_view text) {
  const std::string all = trim_lower(text);
  if (all.empty()) throw InvalidInput("phi: empty specification");
  PhiSpec p;
  std::size_t start = 0;
  while (start <= all.size()) {
    const std::size_t star = all.find('*', start);
    const std::string f = all.substr(start, star == std::string::npos ? std::string::npos : star - start);
    if (f.empty()) throw InvalidInput("phi: empty factor in '" + all + "'");
    if (f == "k") {
      p.s += 1;
    } else if (f.rfind("k^", 0) == 0) {
      p.s += parse_exponent(f.substr(2), f);
    } else if (parse_log_factor(f, p.t)) {
    } else {
      std::string num = f;
      if (num.rfind("const:", 0) == 0) num.erase(0, 6);
      Rational c;
      try {
        c = parse_rational(num);
      } catch (const Error&) {
        throw InvalidInput("phi: unrecognized factor '" + f + "'");
      }
      if (sgn(c) <= 0) throw InvalidInput("phi: constant must be positive");
      p.c *= c;
    }
    if (star == std::string::npos) break;
    start = star + 1;
  }
  return p;
}

std::string PhiSpec::describe() const {
  std::string out;
  const auto add = [&out](const std::string& f) {
    if (!out.empty()) out += "*";
    out += f;
  };
  if (c != 1 || (s == 0 && t == 0)) add(to_string(c));
  if (s == 1) add("k");
  if (s > 1) add("k^" + std::to_string(s));
  if (t == 1) add("log(k+1)");
  if (t > 1) add("log^" + std::to_string(t) + "(k+1)");
  return out;
}

bool PhiSpec::series_converges() const { return s >= 1 || t >= 2; }

RationalInterval PhiSpec::enclose(const RationalInterval& x, unsigned bits) const {
  if (sgn(x.lo()) <= 0) throw InvalidInput("phi: argument must be positive");
  RationalInterval r(c);
  if (s > 0) r = r * pow_interval(x, s);
  if (t > 0) {
    const RationalInterval l = ln_of_interval(x + RationalInterval(Rational(1)), bits);
    r = r * pow_interval(l, t);
  }
  return r;
}

bool PhiSpec::exceeded_by(const Int& a, std::uint64_t k) const {
  if (k < 1) throw InvalidInput("phi: k must be >= 1");
  const RationalInterval x(Rational(from_u64(k)));
  const Rational av(a);
  for (unsigned bits = 48; bits <= kMaxPhiBits; bits *= 2) {
    const RationalInterval v = enclose(x, bits);
    if (av > v.hi()) return true;
    if (av <= v.lo()) return false;
  }
  throw Error("phi: comparison undecided at " + std::to_string(kMaxPhiBits) + " bits");
}

double PhiSpec::approx(double x) const {
  return to_double(c) * std::pow(x, static_cast<double>(s)) * std::pow(std::log1p(x), static_cast<double>(t));
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

AlphaSpec sample_alpha(std::uint64_t master_seed, std::uint64_t index, std::uint32_t bits) {
  if (bits < 64) throw InvalidInput("sample_alpha: at least 64 bits are required");
  return AlphaSpec::random_dyadic(derive_seed(master_seed, index), bits);
}

std::vector<Int> gauss_orbit(const AlphaSpec& alpha, std::size_t n) {
  if (n == 0) return {};
  return quotients(alpha, n).a;
}

std::vector<Int> gauss_orbit_exact(const Rational& x0, std::size_t n) {
  if (sgn(x0) < 0 || x0 >= 1) throw InvalidInput("gauss_orbit_exact: x must lie in [0, 1)");
  std::vector<Int> out;
  out.reserve(n);
  Rational x = x0;
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(x) == 0) {
      throw ExpansionExhausted("gauss orbit reached 0 after " + std::to_string(i) + " steps", i);
    }
    const Rational inv = 1 / x;
    const Int a = floor(inv);
    out.push_back(a);
    x = inv - Rational(a);
  }
  return out;
}

RationalInterval birkhoff_log_quotient(const AlphaSpec& alpha, std::size_t k, unsigned bits) {
  if (k < 1) throw InvalidInput("birkhoff_log_quotient: k must be >= 1");
  const PartialQuotients pq = quotients(alpha, k);
  Int prod = 1;
  for (const Int& a : pq.a) prod *= a;
  if (prod == 1) return RationalInterval(Rational(0));
  return ln_enclosure(prod, bits) / Rational(from_u64(k));
}

RationalInterval levy_exponent(const AlphaSpec& alpha, std::size_t k, unsigned bits) {
  if (k < 1) throw InvalidInput("levy_exponent: k must be >= 1");
  ConvergentTable table(alpha);
  table.require(k);
  const Int& q = table[k].q;
  if (q == 1) return RationalInterval(Rational(0));
  return ln_enclosure(q, bits) / Rational(from_u64(k));
}

GaussInvariance gauss_invariance_identity(const Rational& a, const Rational& b, std::uint64_t n_terms,
                                          unsigned bits) {
  if (sgn(a) < 0 || b > 1 || a > b) throw InvalidInput("gauss_invariance_identity: need 0 <= a <= b <= 1");
  GaussInvariance g;
  if (a == b) return g;
  const RationalInterval ln2 = ln2_enclosure(bits);
  const Rational n1 = Rational(from_u64(n_terms)) + 1;
  // The preimage sum telescopes:
  // sum_{n<=N} ln((n+1+a)(n+b) / ((n+a)(n+1+b))) = ln((N+1+a)(1+b) / ((1+a)(N+1+b))).
  g.rhs = ln_enclosure(Rational((1 + b) / (1 + a)), bits) / ln2;
  g.lhs = ln_enclosure(Rational((n1 + a) * (1 + b) / ((1 + a) * (n1 + b))), bits) / ln2;
  g.gap = ln_enclosure(Rational((n1 + b) / (n1 + a)), bits) / ln2;
  return g;
}

KhinchinSeries khinchin_log_constant(std::uint64_t terms) {
  if (terms < 16) throw InvalidInput("khinchin_log_constant: need at least 16 terms");
  KhinchinSeries r;
  r.terms = terms;
  long double sum = 0;
  for (std::uint64_t n = 2; n <= terms; ++n) {
    const long double nn = static_cast<long double>(n);
    sum += std::log(nn) * std::log1p(1.0L / (nn * (nn + 2)));
  }
  r.partial = sum;
  // Each term carries a few ulps from log, log1p, the division and the
  // product (libm long double log/log1p are within 2 ulps); summation adds at
  // most one ulp of the running sum per step.
  const long double u = LDBL_EPSILON;
  r.rounding_bound = (static_cast<long double>(terms) + 16) * u * sum;

  // Tail n > N, with f(x) = ln x / (x (x+2)) decreasing and
  // x - x^2/2 <= ln(1+x) <= x:
  //   upper: int_N^inf ln x / x^2 = (ln N + 1)/N
  //   lower: (ln(N+3)+1)/(N+3) - 2/((N+1)(N+3)) - (ln N + 1)/(6 N^3)
  const long double N = static_cast<long double>(terms);
  const long double lnN = std::log(N);
  r.tail_hi = (lnN + 1) / N * (1 + 1e-15L);
  r.tail_lo = ((std::log(N + 3) + 1) / (N + 3) - 2 / ((N + 1) * (N + 3)) - (lnN + 1) / (6 * N * N * N)) *
              (1 - 1e-15L);

  const Rational lo = from_long_double(sum) - from_long_double(r.rounding_bound) + from_long_double(r.tail_lo);
  const Rational hi = from_long_double(sum) + from_long_double(r.rounding_bound) + from_long_double(r.tail_hi);
  r.value = (RationalInterval(lo, hi) / ln2_enclosure(80)).rounded_outward(64);
  return r;
}

double levy_constant() {
  constexpr double pi = std::numbers::pi_v<double>;
  return pi * pi / (12 * std::numbers::ln2_v<double>);
}

double gauss_kuzmin_exceedance(double x) {
  if (x < 0) return 1.0;
  const double n = std::floor(x) + 1;
  return std::log2(1 + 1 / n);
}

}  // namespace malpha
