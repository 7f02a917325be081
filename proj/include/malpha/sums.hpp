#pragma once

// S_M(alpha) = sum_{m=1}^{M} 1/||m alpha|| and its generalizations, with the
// block/special-term diagnostics that mirror the lower- and upper-bound
// arguments.

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "malpha/alpha_eval.hpp"
#include "malpha/cf.hpp"
#include "malpha/interval.hpp"
#include "malpha/term_kernel.hpp"

namespace malpha {

enum class Execution { sequential, parallel };

struct SumOptions {
  Rational rel_tol = default_rel_tol();
  Execution execution = Execution::sequential;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct SpecialTerm {
  std::uint64_t m = 0;
  RationalInterval term;  // encloses 1/||m alpha||
};

struct SumReport {
  std::uint64_t M = 0;
  RationalInterval total;
  std::size_t k_used = 0;  // q_k <= M < q_{k+1}
  Int p_k;
  Int q_k;
  // Terms with m p_k mod q_k in {0, 1, q_k - 1}, in increasing m.
  std::vector<SpecialTerm> special_terms;
  RationalInterval special_total;
  RationalInterval bulk_total;  // total minus special terms
  // Blocks [1 + l q_k, (l+1) q_k] for (l+1) q_k <= M.
  std::vector<RationalInterval> block_subtotals;
  RationalInterval tail;  // m in (L q_k, M] after the last whole block
};

// Throws DegenerateRational when alpha is rational and m alpha is an integer
// or half-integer for some m <= M, i.e. when S_M is undefined.
void require_defined(const AlphaSpec& alpha, std::uint64_t M);

SumReport s_m(const AlphaSpec& alpha, std::uint64_t M, const SumOptions& opts = {});

// sum 1/||m alpha||^beta for rational beta >= 1 (beta == 1 delegates to s_m).
RationalInterval s_m_beta(const AlphaSpec& alpha, std::uint64_t M, const Rational& beta,
                          const SumOptions& opts = {});

// sum 1/(m ||m alpha||)
RationalInterval s_m_weighted(const AlphaSpec& alpha, std::uint64_t M, const SumOptions& opts = {});

// Entry n-1 encloses (1/n) sum_{j<=n} S_j, n = 1..N, from one pass over terms.
std::vector<RationalInterval> cesaro_means(const AlphaSpec& alpha, std::uint64_t N,
                                           const SumOptions& opts = {});

// sum_{m = 1 + l q_k}^{(l+1) q_k} 1/||m alpha||
RationalInterval block_profile(const AlphaSpec& alpha, std::size_t k, std::uint64_t l,
                               const SumOptions& opts = {});

// Encloses q * sum_{n=1}^{q} 1/(n+1), the per-block harmonic comparison value.
RationalInterval block_harmonic_reference(std::uint64_t q);

// Residues r with m p = r (mod q) marking special terms: {0, 1, q-1}.
bool is_special_residue(std::uint64_t m, std::uint64_t p, std::uint64_t q);

// Number of m in [1, M] with a special residue, in closed form.
std::uint64_t count_special(std::uint64_t M, std::uint64_t p, std::uint64_t q);

// Prefix sums S_1, S_2, ... produced one term at a time.
class PrefixSummer {
 public:
  explicit PrefixSummer(const AlphaSpec& alpha, const SumOptions& opts = {});
  // Advances to S_M (M must not decrease) and returns its enclosure.
  RationalInterval advance_to(std::uint64_t M);
  std::uint64_t position() const { return position_; }
  const TermKernel& kernel() const { return kernel_; }

 private:
  TermKernel kernel_;
  SumOptions opts_;
  ScaledSum sum_;
  std::uint64_t position_ = 0;
};

}  // namespace malpha
