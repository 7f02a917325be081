#pragma once

// Rigorous enclosures of ln and exp with rational (dyadic) endpoints.

#include "malpha/interval.hpp"

namespace malpha {

// Encloses ln(x) for rational x > 0; width at most 2^-bits.
RationalInterval ln_enclosure(const Rational& x, unsigned bits = 30);
RationalInterval ln_enclosure(const Int& x, unsigned bits = 30);

RationalInterval ln2_enclosure(unsigned bits);

// Encloses exp(x) for rational x >= 0 with relative width at most 2^-rel_bits.
RationalInterval exp_enclosure(const Rational& x, unsigned rel_bits);

// ceil(exp(n)) for an integer n >= 0, exactly.
Int ceil_exp(const Int& n);

}  // namespace malpha
