#pragma once

// Univariate polynomials over Z and Q, coefficients stored from the constant
// term up. All operations are exact.

#include "zpdehn/exactalg.hpp"

#include <string>
#include <utility>
#include <vector>

namespace zpdehn {

using IntPoly = std::vector<BigInt>;
using RatPoly = std::vector<Rat>;

// Degree of a nonzero polynomial after trimming; the zero polynomial has degree 0.
std::size_t degree(const IntPoly& f);
std::size_t degree(const RatPoly& f);
void trim(IntPoly& f);
void trim(RatPoly& f);

IntPoly make_int_poly(std::initializer_list<long> low_to_high);

// Content 1 and positive leading coefficient. Throws InvalidArgument on zero.
IntPoly primitive_normalized(IntPoly f);
// Clears denominators, then normalizes.
IntPoly primitive_normalized(const RatPoly& f);
RatPoly to_rat_poly(const IntPoly& f);

RatPoly poly_mul(const RatPoly& a, const RatPoly& b);
std::pair<RatPoly, RatPoly> poly_divmod(const RatPoly& a, const RatPoly& b);
RatPoly poly_gcd(RatPoly a, RatPoly b);  // monic, or empty when both are zero
IntPoly derivative(const IntPoly& f);
IntPoly squarefree_part(const IntPoly& f);
bool divides(const IntPoly& g, const IntPoly& f);
// f / g for primitive g dividing f; the quotient is integral by Gauss's lemma.
IntPoly exact_quotient(const IntPoly& f, const IntPoly& g);

IntPoly reversed(const IntPoly& f);         // x^d f(1/x)
IntPoly negated_argument(const IntPoly& f);  // f(-x)

// Characteristic polynomial det(x I - A), monic, by Faddeev-LeVerrier.
RatPoly charpoly(const RatMatrix& a);
// Companion matrix of f / lead(f).
RatMatrix companion(const IntPoly& f);
RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b);
RatMatrix kronecker(const RatMatrix& a, const RatMatrix& b);

IntPoly cyclotomic(unsigned m);
// True iff f (normalized) is a cyclotomic polynomial, i.e. its roots are roots of unity.
bool is_cyclotomic(const IntPoly& f);

// "x^2 - x - 1"
std::string poly_to_string(const IntPoly& f);
// Coefficients from the leading term down, comma separated: "1,-1,-1".
IntPoly parse_coefficients(const std::string& text);

}  // namespace zpdehn
