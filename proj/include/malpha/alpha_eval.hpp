#pragma once

// Rigorous enclosures of alpha and of ||m alpha|| built from convergents.

#include <cstdint>

#include "malpha/cf.hpp"
#include "malpha/interval.hpp"
#include "malpha/surd.hpp"

namespace malpha {

// 2^-20
Rational default_rel_tol();

struct NormDistEnclosure {
  Int m;
  RationalInterval interval;  // encloses ||m alpha||
  std::size_t depth_used = 0;
};

// [p_k/q_k, p_{k+1}/q_{k+1}] ordered; the point alpha at the last index of a
// finite expansion.
RationalInterval alpha_enclosure(const AlphaSpec& alpha, std::size_t k);
RationalInterval alpha_enclosure(ConvergentTable& table, std::size_t k);

// min over integers n of |x - n|
Rational norm_dist_rational(const Rational& x);

// Adaptive enclosure of ||m alpha|| with (hi - lo)/lo <= rel_tol. Deepens the
// convergent enclosure until m*[lo, hi] mod 1 avoids integers and
// half-integers and is tight enough.
NormDistEnclosure norm_dist_malpha(const Int& m, const AlphaSpec& alpha,
                                   const Rational& rel_tol = default_rel_tol());
NormDistEnclosure norm_dist_malpha(const Int& m, ConvergentTable& table, const Rational& rel_tol);

// ||x|| of a real interval when it is monotone on it; std::nullopt when the
// interval touches an integer or straddles a half-integer.
std::optional<RationalInterval> norm_dist_interval(const RationalInterval& x);

// Canonical t mod q in {0, ..., q-1}.
Int residue(const Int& t, const Int& q);

// Exact ||m alpha|| for a quadratic surd, independent of any enclosure.
QuadraticNumber norm_dist_surd(const Int& m, const QuadraticSurd& s);

}  // namespace malpha
