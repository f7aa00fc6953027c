#pragma once

#include <gmpxx.h>

#include <string>

namespace tricount {

// Exact arbitrary-precision integers and rationals (GMP-backed). Every count
// produced by this library is an ExactInt; intermediate algebra that divides
// goes through ExactRat and is checked for integrality at the end.
using ExactInt = mpz_class;
using ExactRat = mpq_class;

// num/den reduced to canonical form (den > 0). den must be nonzero.
ExactRat make_rat(const ExactInt& num, const ExactInt& den);

// n! for n >= 0.
ExactInt factorial(long n);

// Double factorial n!! with the empty-product conventions (-1)!! = 0!! = 1.
// n < -1 is a domain error.
ExactInt double_factorial(long n);

// Binomial coefficient C(n, k); 0 when k < 0 or k > n. Requires n >= 0.
ExactInt binomial(long n, long k);

// 1/n! for n >= 0 and exactly 0 for n < 0. The zero return encodes the
// vanishing of counting formulas outside their support, so callers can
// multiply straight through without case analysis.
ExactRat recip_factorial(long n);

// b^e as an exact rational; e may be negative (then b must be nonzero).
ExactRat pow_rat(long b, long e);

// Generalized binomial coefficient C(a, j) = a(a-1)...(a-j+1)/j! for
// rational a and integer j >= 0.
ExactRat binomial_rat(const ExactRat& a, long j);

std::string to_string(const ExactInt& v);
std::string to_string(const ExactRat& v);  // "num/den" reduced, den > 0

}  // namespace tricount
