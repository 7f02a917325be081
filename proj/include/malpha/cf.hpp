#pragma once

// Continued-fraction expansions of alpha in [0,1), convergent recurrences and
// the generators behind every AlphaSpec variant.
//
// Indexing: alpha = [a_1, a_2, ...] = 1/(a_1 + 1/(a_2 + ...)), with
// p_0/q_0 = 0/1 and p_1/q_1 = 1/a_1.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "malpha/numeric.hpp"

namespace malpha {

struct Convergent {
  std::size_t k = 0;
  Int p = 0;
  Int q = 1;
};

// Generates a_k from the convergents p_0/q_0 ... p_{k-1}/q_{k-1}. Rules must
// be pure: the same prefix always yields the same quotient.
class QuotientRule {
 public:
  virtual ~QuotientRule() = default;
  virtual std::string name() const = 0;
  virtual Int next(std::size_t k, std::span<const Convergent> prefix) const = 0;
};

struct RationalAlpha {
  Int num;  // 0 <= num < den, gcd(num, den) = 1
  Int den;
};

// (p + sqrt(d)) / q with q | d - p^2 and value in [0, 1).
struct QuadraticSurd {
  Int p;
  Int d;
  Int q;
};

struct RuleAlpha {
  std::shared_ptr<const QuotientRule> rule;
};

// X / 2^bits where X is a uniform bits-bit integer drawn from `seed`.
struct RandomDyadic {
  std::uint64_t seed = 0;
  std::uint32_t bits = 0;
};

class AlphaSpec {
 public:
  using Variant = std::variant<RationalAlpha, QuadraticSurd, RuleAlpha, RandomDyadic>;

  // Reduces num/den mod 1 into [0,1) and to lowest terms.
  static AlphaSpec rational(const Int& num, const Int& den);
  // Normalizes so that q | d - p^2 and reduces the value mod 1.
  static AlphaSpec surd(const Int& p, const Int& d, const Int& q);
  static AlphaSpec golden();      // (sqrt 5 - 1)/2 = [1, 1, 1, ...]
  static AlphaSpec silver();      // sqrt 2 - 1 = [2, 2, 2, ...]
  static AlphaSpec rule(std::shared_ptr<const QuotientRule> rule);
  static AlphaSpec powers_of_two();  // a_k = 2^(k-1)
  static AlphaSpec constant_quotients(const Int& c);
  static AlphaSpec random_dyadic(std::uint64_t seed, std::uint32_t bits);

  const Variant& variant() const { return v_; }
  bool is_rational() const { return std::holds_alternative<RationalAlpha>(v_); }
  std::string describe() const;

 private:
  explicit AlphaSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

struct PartialQuotients {
  std::vector<Int> a;  // a[0] is a_1
  bool finite = false;  // true when the expansion is known to end after a.size()
  std::optional<std::size_t> horizon;  // RandomDyadic: deepest certified index
};

struct SurdExpansion {
  std::vector<Int> preperiod;
  std::vector<Int> period;
};

// Validity horizon floor(B ln 2 / 2.4) of a RandomDyadic with B bits.
std::size_t dyadic_horizon(std::uint32_t bits);

// The integer numerator X of a RandomDyadic value X / 2^bits.
Int dyadic_numerator(const RandomDyadic& r);

PartialQuotients expand_rational(const Int& num, const Int& den);
SurdExpansion expand_quadratic(const QuadraticSurd& s, std::size_t max_steps = 100000);
PartialQuotients quotients(const AlphaSpec& alpha, std::size_t k);
std::vector<Convergent> convergents(const AlphaSpec& alpha, std::size_t k);

// Value of a finite expansion [a_1, ..., a_n].
Rational evaluate(std::span<const Int> a);

// Produces a_1, a_2, ... on demand. Not thread-safe; one per consumer.
class QuotientStream {
 public:
  explicit QuotientStream(const AlphaSpec& alpha);
  QuotientStream(QuotientStream&&) noexcept;
  QuotientStream& operator=(QuotientStream&&) noexcept;
  QuotientStream(const QuotientStream&);
  ~QuotientStream();

  // Next quotient, std::nullopt when a finite expansion has ended. Throws
  // HorizonExceeded past a RandomDyadic horizon and CapExceeded from rules.
  std::optional<Int> next();
  std::size_t produced() const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

// Growing table of convergents backed by a QuotientStream. Per-call scratch
// state: extend() mutates, so do not share one table between threads.
class ConvergentTable {
 public:
  explicit ConvergentTable(const AlphaSpec& alpha);

  // Makes convergents 0..k available. Returns false if a finite expansion
  // ended first; HorizonExceeded/CapExceeded propagate.
  bool extend_to(std::size_t k);
  // Like extend_to but throws ExpansionExhausted.
  void require(std::size_t k);

  std::size_t depth() const { return conv_.size() - 1; }
  bool exhausted() const { return exhausted_; }
  const Convergent& operator[](std::size_t k) const { return conv_[k]; }
  const Int& quotient(std::size_t k) const { return a_[k - 1]; }  // a_k, k >= 1
  const std::vector<Convergent>& all() const { return conv_; }
  const AlphaSpec& alpha() const { return alpha_; }

  // Unique k with q_k <= M < q_{k+1}; extends as needed. For q_0 = q_1 = 1
  // the larger index is returned.
  std::size_t locate(const Int& M);

 private:
  AlphaSpec alpha_;
  QuotientStream stream_;
  std::vector<Int> a_;
  std::vector<Convergent> conv_;
  bool exhausted_ = false;
};

}  // namespace malpha
