#pragma once

// Reference bounds for S_M(alpha) in terms of the convergent denominators,
// ratio scans over M grids and constructions of alpha with fast-growing
// partial quotients.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "malpha/cf.hpp"
#include "malpha/interval.hpp"
#include "malpha/sums.hpp"

namespace malpha {

// Precision of the logarithms in reference values: absolute error 2^-30.
inline constexpr unsigned kRefLogBits = 30;
// Ratio enclosures are rounded outward to this grid.
inline constexpr unsigned kRatioBits = 64;

struct BoundReport {
  std::uint64_t M = 0;
  std::size_t k = 0;  // q_k <= M < q_{k+1}
  Int q_k;
  Int q_next;  // q_{k+1}
  Int a_next;  // a_{k+1}
  RationalInterval lower_ref;           // M ln q_k
  RationalInterval upper_ref;           // M ln q_k + a_{k+1} M
  RationalInterval upper_improved_ref;  // M ln q_k + M (1 + ln a_{k+1})
  RationalInterval s_m;
  RationalInterval ratio_lower;     // S_M / lower_ref
  RationalInterval ratio_upper;     // S_M / upper_ref
  RationalInterval ratio_improved;  // S_M / upper_improved_ref
  std::optional<RationalInterval> ratio_mlnm;  // S_M / (M ln M); absent for M = 1
  // M < 2 or q_k = 1: ln q_k vanishes and lower_ref is set to 1.
  bool small_m = false;
  bool a_next_exceeds_q = false;  // a_{k+1} > q_k
};

// Unique k with q_k <= M < q_{k+1}. Throws ExpansionExhausted if the
// expansion ends before q_{k+1} > M is seen.
std::size_t locate_k(const AlphaSpec& alpha, std::uint64_t M);

BoundReport bound_report(const AlphaSpec& alpha, std::uint64_t M, const SumOptions& opts = {});

// One report per grid point from a single pass over m. The grid must be
// strictly increasing; an empty grid gives an empty result.
std::vector<BoundReport> ratio_scan(const AlphaSpec& alpha, const std::vector<std::uint64_t>& grid,
                                    const SumOptions& opts = {});

// Convergent denominators q_k with lo <= q_k <= hi, ascending, without repeats.
std::vector<std::uint64_t> denominator_grid(const AlphaSpec& alpha, std::uint64_t lo, std::uint64_t hi);

enum class GrowthKind { square, ceil_exp, custom };

// a_1 = seed and a_{k+1} = f(q_k). Quotients above `cap` raise CapExceeded
// naming k + 1.
struct GrowthRule {
  GrowthKind kind = GrowthKind::square;
  Int seed = 1;
  std::optional<Int> cap;
  // custom rules: a_{k+1} from (k, q_k); must be positive and deterministic.
  // Lambdas should declare "-> Int" so no gmpxx expression outlives its operands.
  std::function<Int(std::size_t, const Int&)> custom;
  std::string custom_name = "custom";

  static GrowthRule square(std::optional<Int> cap = std::nullopt);
  static GrowthRule ceil_exp(std::optional<Int> cap = std::nullopt);
};

// ceil_exp rules without an explicit cap stop at this bound.
Int default_exp_cap();

// Builds the rule-generated alpha and checks a_1 .. a_K against the cap
// eagerly; deeper quotients are generated on demand.
AlphaSpec build_pathological(const GrowthRule& rule, std::size_t K);

struct BoundedTypeResult {
  bool bounded = false;  // max_{k <= K} a_k <= B
  Int max_quotient = 0;
};

BoundedTypeResult bounded_type_check(const AlphaSpec& alpha, std::size_t K, const Int& B);

}  // namespace malpha
