#pragma once

// Metric theory of continued fractions: random sampling of alpha, the Gauss
// map, ergodic averages of the partial quotients and reference constants.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "malpha/cf.hpp"
#include "malpha/interval.hpp"

namespace malpha {

// phi(x) = c * x^s * ln(x + 1)^t with c > 0 and s, t >= 0, so phi is
// positive and non-decreasing on x >= 1.
struct PhiSpec {
  Rational c = 1;
  unsigned s = 0;
  unsigned t = 0;

  static PhiSpec constant(const Rational& c);
  static PhiSpec log_power(unsigned t);  // ln(k+1)^t
  static PhiSpec power(unsigned s);      // k^s

  // Factors joined by '*': a rational constant, "k", "k^s", and "log",
  // "log2", "log^t", optionally followed by "k" or "(k+1)" (all natural
  // logs of k+1). Examples: "1", "log2", "k*log2k", "3*k^2".
  static PhiSpec parse(std::string_view text);

  std::string describe() const;

  // Whether sum 1/(k phi(k)) converges.
  bool series_converges() const;

  // Encloses phi(x) for x >= 1 given as an enclosure; `bits` sets the log
  // precision.
  RationalInterval enclose(const RationalInterval& x, unsigned bits = 48) const;

  // Exact decision of a > phi(k), k >= 1.
  bool exceeded_by(const Int& a, std::uint64_t k) const;

  double approx(double x) const;
};

// Per-sample seed derived from the master seed (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

// RandomDyadic alpha with B >= 64 bits for sample `index`.
AlphaSpec sample_alpha(std::uint64_t master_seed, std::uint64_t index, std::uint32_t bits);

// a_1 .. a_n as CF shift of the expansion (primary path).
std::vector<Int> gauss_orbit(const AlphaSpec& alpha, std::size_t n);

// a_k = floor(1 / T^{k-1} x) by exact iteration of T(x) = 1/x - floor(1/x),
// x in [0, 1). Throws ExpansionExhausted when the orbit reaches 0 early.
std::vector<Int> gauss_orbit_exact(const Rational& x, std::size_t n);

// (1/k) sum_{i<=k} ln a_i
RationalInterval birkhoff_log_quotient(const AlphaSpec& alpha, std::size_t k, unsigned bits = 40);

// (1/k) ln q_k
RationalInterval levy_exponent(const AlphaSpec& alpha, std::size_t k, unsigned bits = 40);

struct GaussInvariance {
  RationalInterval lhs;  // sum_{n<=N} mu([1/(n+b), 1/(n+a)])
  RationalInterval rhs;  // mu([a, b])
  RationalInterval gap;  // |rhs - lhs|
};

// Gauss measure of [a, b] against its preimage decomposition under T,
// truncated after n_terms branches. Requires 0 <= a <= b <= 1.
GaussInvariance gauss_invariance_identity(const Rational& a, const Rational& b, std::uint64_t n_terms,
                                          unsigned bits = 80);

// ln K0 = (1/ln 2) sum_{n>=2} ln n * ln(1 + 1/(n(n+2))).
struct KhinchinSeries {
  RationalInterval value;  // rigorous enclosure of ln K0
  std::uint64_t terms = 0;  // explicit terms n = 2..terms
  long double partial = 0;  // explicit partial sum (before / ln 2)
  long double rounding_bound = 0;
  long double tail_lo = 0;
  long double tail_hi = 0;
};

KhinchinSeries khinchin_log_constant(std::uint64_t terms = 200000);

// pi^2 / (12 ln 2), the almost-sure limit of (1/k) ln q_k.
double levy_constant();

// P(a_k > x) under the Gauss measure for real x >= 0: log2(1 + 1/(floor(x)+1)).
double gauss_kuzmin_exceedance(double x);

}  // namespace malpha
