#include "malpha/sums.hpp"

#include <exception>
#include <thread>

#include "malpha/errors.hpp"

namespace malpha {
namespace {

constexpr unsigned kGeneralScaleBits = 64;
constexpr std::uint64_t kDeadlineStride = 1 << 16;
constexpr std::uint64_t kMinParallelRange = 1 << 15;

void check_deadline(const SumOptions& opts) {
  if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline) {
    throw BudgetExceeded("runtime budget exceeded");
  }
}

// Runs fn(chunk, begin, end, kernel) over [begin, end) split into contiguous
// chunks, one kernel copy per chunk. Exceptions are rethrown in chunk order.
template <class Fn>
void run_chunks(const TermKernel& proto, std::uint64_t begin, std::uint64_t end, unsigned chunks, Fn&& fn) {
  const std::uint64_t n = end - begin;
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> workers;
  workers.reserve(chunks);
  for (unsigned c = 0; c < chunks; ++c) {
    const std::uint64_t b = begin + n * c / chunks;
    const std::uint64_t e = begin + n * (c + 1) / chunks;
    workers.emplace_back([&, c, b, e, kernel = proto]() mutable {
      try {
        fn(c, b, e, kernel);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

unsigned chunk_count(const SumOptions& opts, std::uint64_t range) {
  if (opts.execution != Execution::parallel || range < kMinParallelRange) return 1;
  return thread_count();
}

void sum_range(TermKernel& kernel, std::uint64_t begin, std::uint64_t end, ScaledSum& acc,
               const SumOptions& opts) {
  TermValue tv;
  for (std::uint64_t m = begin; m < end; ++m) {
    if ((m & (kDeadlineStride - 1)) == 0) check_deadline(opts);
    kernel.term(m, tv);
    acc.add(tv);
  }
}

struct ReportAccumulator {
  ScaledSum total;
  ScaledSum special;
  ScaledSum bulk;
  ScaledSum tail;
  std::vector<ScaledSum> blocks;
  std::vector<SpecialTerm> specials;

  void merge(const ReportAccumulator& o) {
    total.add(o.total);
    special.add(o.special);
    bulk.add(o.bulk);
    tail.add(o.tail);
    for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i].add(o.blocks[i]);
    specials.insert(specials.end(), o.specials.begin(), o.specials.end());
  }
};

Rational checked_beta(const Rational& beta) {
  if (beta < 1) throw InvalidInput("beta must be >= 1");
  return beta;
}

// Outward-rounded y^(u/v) on the 2^-bits grid, y > 0.
Int root_pow_scaled(const Rational& y, const Int& u, const Int& v, Rounding dir) {
  const unsigned long uu = to_u64(u);
  const unsigned long vv = to_u64(v);
  const Rational yu = pow(y, uu);
  // (y^u * 2^(v bits))^(1/v) = y^(u/v) * 2^bits
  const Int radicand = scale_round(yu, static_cast<unsigned>(vv * kGeneralScaleBits), dir);
  Int root;
  const int exact = mpz_root(root.get_mpz_t(), radicand.get_mpz_t(), vv);
  if (dir == Rounding::up && exact == 0) root += 1;
  return root;
}

RationalInterval scaled_interval(const Int& lo, const Int& hi, unsigned bits) {
  const Int scale = pow2(bits);
  return RationalInterval(make_rational(lo, scale), make_rational(hi, scale));
}

}  // namespace

void require_defined(const AlphaSpec& alpha, std::uint64_t M) {
  const auto* r = std::get_if<RationalAlpha>(&alpha.variant());
  if (r == nullptr) return;
  // first m with m num/den in Z/2
  const Int first = r->den % 2 == 0 ? Int(r->den / 2) : r->den;
  if (first <= from_u64(M)) {
    throw DegenerateRational("rational alpha: S_M undefined (m*alpha = " +
                             to_string(Rational(first * r->num, r->den)) + " at m = " + to_string(first) +
                             " is an integer or half-integer)");
  }
}

bool is_special_residue(std::uint64_t m, std::uint64_t p, std::uint64_t q) {
  if (q <= 2) return true;
  const auto r = static_cast<std::uint64_t>((static_cast<u128>(m) * p) % q);
  return r == 0 || r == 1 || r == q - 1;
}

std::uint64_t count_special(std::uint64_t M, std::uint64_t p, std::uint64_t q) {
  if (q == 0) throw InvalidInput("count_special: q must be positive");
  if (q <= 2) return M;
  Int inv;
  const Int pz = from_u64(p % q);
  const Int qz = from_u64(q);
  if (mpz_invert(inv.get_mpz_t(), pz.get_mpz_t(), qz.get_mpz_t()) == 0) {
    throw InvalidInput("count_special: p and q must be coprime");
  }
  const std::uint64_t r1 = to_u64(inv);
  const auto count_class = [&](std::uint64_t r) -> std::uint64_t {
    return M >= r ? (M - r) / q + 1 : 0;
  };
  return M / q + count_class(r1) + count_class(q - r1);
}

SumReport s_m(const AlphaSpec& alpha, std::uint64_t M, const SumOptions& opts) {
  if (M < 1) throw InvalidInput("s_m: M must be >= 1");
  require_defined(alpha, M);
  TermKernel kernel(alpha, opts.rel_tol);
  SumReport report;
  report.M = M;
  report.k_used = kernel.table().locate(from_u64(M));
  report.p_k = kernel.table()[report.k_used].p;
  report.q_k = kernel.table()[report.k_used].q;
  const std::uint64_t q = to_u64(report.q_k);
  const std::uint64_t p = to_u64(mod(report.p_k, report.q_k));
  const std::uint64_t n_blocks = M / q;
  const std::uint64_t whole = n_blocks * q;

  const auto process = [&](TermKernel& kern, std::uint64_t begin, std::uint64_t end, ReportAccumulator& acc) {
    TermValue tv;
    for (std::uint64_t m = begin; m < end; ++m) {
      if ((m & (kDeadlineStride - 1)) == 0) check_deadline(opts);
      kern.term(m, tv);
      acc.total.add(tv);
      if (is_special_residue(m, p, q)) {
        acc.special.add(tv);
        acc.specials.push_back(SpecialTerm{m, tv.interval()});
      } else {
        acc.bulk.add(tv);
      }
      if (m <= whole) {
        acc.blocks[(m - 1) / q].add(tv);
      } else {
        acc.tail.add(tv);
      }
    }
  };

  const unsigned chunks = chunk_count(opts, M);
  std::vector<ReportAccumulator> parts(chunks);
  for (auto& part : parts) part.blocks.resize(n_blocks);
  if (chunks == 1) {
    process(kernel, 1, M + 1, parts[0]);
  } else {
    run_chunks(kernel, 1, M + 1, chunks,
               [&](unsigned c, std::uint64_t b, std::uint64_t e, TermKernel& kern) { process(kern, b, e, parts[c]); });
  }
  ReportAccumulator& acc = parts[0];
  for (unsigned c = 1; c < chunks; ++c) acc.merge(parts[c]);

  report.total = acc.total.interval();
  report.special_total = acc.special.interval();
  report.bulk_total = acc.bulk.interval();
  report.tail = acc.tail.interval();
  report.special_terms = std::move(acc.specials);
  report.block_subtotals.reserve(n_blocks);
  for (const auto& b : acc.blocks) report.block_subtotals.push_back(b.interval());
  return report;
}

RationalInterval s_m_beta(const AlphaSpec& alpha, std::uint64_t M, const Rational& beta, const SumOptions& opts) {
  if (M < 1) throw InvalidInput("s_m_beta: M must be >= 1");
  require_defined(alpha, M);
  const Rational b = checked_beta(beta);
  if (b == 1) return s_m(alpha, M, opts).total;
  TermKernel kernel(alpha, opts.rel_tol);
  const Int u = b.get_num();
  const Int v = b.get_den();
  Int lo = 0;
  Int hi = 0;
  for (std::uint64_t m = 1; m <= M; ++m) {
    if ((m & (kDeadlineStride - 1)) == 0) check_deadline(opts);
    const RationalInterval d = kernel.distance(m);
    // x -> x^-beta is decreasing
    lo += root_pow_scaled(1 / d.hi(), u, v, Rounding::down);
    hi += root_pow_scaled(1 / d.lo(), u, v, Rounding::up);
  }
  return scaled_interval(lo, hi, kGeneralScaleBits);
}

RationalInterval s_m_weighted(const AlphaSpec& alpha, std::uint64_t M, const SumOptions& opts) {
  if (M < 1) throw InvalidInput("s_m_weighted: M must be >= 1");
  require_defined(alpha, M);
  TermKernel kernel(alpha, opts.rel_tol);
  Int lo = 0;
  Int hi = 0;
  for (std::uint64_t m = 1; m <= M; ++m) {
    if ((m & (kDeadlineStride - 1)) == 0) check_deadline(opts);
    const RationalInterval d = kernel.distance(m);
    const Rational mm(from_u64(m));
    lo += scale_round(1 / (mm * d.hi()), kGeneralScaleBits, Rounding::down);
    hi += scale_round(1 / (mm * d.lo()), kGeneralScaleBits, Rounding::up);
  }
  return scaled_interval(lo, hi, kGeneralScaleBits);
}

std::vector<RationalInterval> cesaro_means(const AlphaSpec& alpha, std::uint64_t N, const SumOptions& opts) {
  if (N < 1) throw InvalidInput("cesaro_means: N must be >= 1");
  require_defined(alpha, N);
  TermKernel kernel(alpha, opts.rel_tol);
  std::vector<RationalInterval> out;
  out.reserve(N);
  Int s_lo = 0;
  Int s_hi = 0;
  Int c_lo = 0;
  Int c_hi = 0;
  const Int scale = pow2(kTermScaleBits);
  TermValue tv;
  for (std::uint64_t n = 1; n <= N; ++n) {
    if ((n & (kDeadlineStride - 1)) == 0) check_deadline(opts);
    kernel.term(n, tv);
    s_lo += tv.lo();
    s_hi += tv.hi();
    c_lo += s_lo;
    c_hi += s_hi;
    const Int den = scale * from_u64(n);
    out.emplace_back(make_rational(c_lo, den), make_rational(c_hi, den));
  }
  return out;
}

RationalInterval block_profile(const AlphaSpec& alpha, std::size_t k, std::uint64_t l, const SumOptions& opts) {
  TermKernel kernel(alpha, opts.rel_tol);
  kernel.table().require(k + 1);
  const Int& qk = kernel.table()[k].q;
  const Int first = Int(from_u64(l)) * qk + 1;
  const Int last = (Int(from_u64(l)) + 1) * qk;
  if (!fits_u64(last) || (last >> 62) != 0) throw InvalidInput("block_profile: block end too large");
  require_defined(alpha, to_u64(last));
  ScaledSum acc;
  const std::uint64_t b = to_u64(first);
  const std::uint64_t e = to_u64(last) + 1;
  const unsigned chunks = chunk_count(opts, e - b);
  if (chunks == 1) {
    sum_range(kernel, b, e, acc, opts);
  } else {
    std::vector<ScaledSum> parts(chunks);
    run_chunks(kernel, b, e, chunks, [&](unsigned c, std::uint64_t cb, std::uint64_t ce, TermKernel& kern) {
      sum_range(kern, cb, ce, parts[c], opts);
    });
    for (const auto& part : parts) acc.add(part);
  }
  return acc.interval();
}

RationalInterval block_harmonic_reference(std::uint64_t q) {
  if (q < 1) throw InvalidInput("block_harmonic_reference: q must be >= 1");
  Int lo = 0;
  Int hi = 0;
  const Int num = pow2(kGeneralScaleBits) * from_u64(q);
  for (std::uint64_t n = 1; n <= q; ++n) {
    const Int den = from_u64(n + 1);
    lo += floor_div(num, den);
    hi += ceil_div(num, den);
  }
  return scaled_interval(lo, hi, kGeneralScaleBits);
}

PrefixSummer::PrefixSummer(const AlphaSpec& alpha, const SumOptions& opts)
    : kernel_(alpha, opts.rel_tol), opts_(opts) {}

RationalInterval PrefixSummer::advance_to(std::uint64_t M) {
  if (M < position_) throw InvalidInput("PrefixSummer: M must not decrease");
  require_defined(kernel_.table().alpha(), M);
  const std::uint64_t b = position_ + 1;
  const std::uint64_t e = M + 1;
  const unsigned chunks = chunk_count(opts_, e - b);
  if (chunks == 1) {
    sum_range(kernel_, b, e, sum_, opts_);
  } else {
    std::vector<ScaledSum> parts(chunks);
    run_chunks(kernel_, b, e, chunks, [&](unsigned c, std::uint64_t cb, std::uint64_t ce, TermKernel& kern) {
      sum_range(kern, cb, ce, parts[c], opts_);
    });
    for (const auto& part : parts) sum_.add(part);
  }
  position_ = M;
  return sum_.interval();
}

}  // namespace malpha
