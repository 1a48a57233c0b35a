#pragma once

// Weil heights of algebraic numbers and tuples, exact arithmetic on algebraic
// numbers through characteristic polynomials, and Northcott enumeration.
//
// An algebraic number is its primitive minimal polynomial together with the
// index of one root; roots are ordered by (real part, imaginary part). Heights
// use the Mahler measure h(a) = (log|lead| + sum log max(1, |a_i|)) / d with
// roots from certified Aberth iteration; the error bound covers the inclusion
// disks and the working precision.

#include "zpdehn/exactalg.hpp"
#include "zpdehn/upoly.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace zpdehn {

struct AlgebraicNumber {
    IntPoly minpoly;  // primitive, positive leading coefficient
    unsigned root_index = 0;
    unsigned precision_bits = 256;
    bool irreducibility_trusted = false;  // set when the degree is too high to check

    // Normalizes f and checks irreducibility by trial factorization up to
    // degree 6 (HypothesisViolated when reducible); above that the flag is set.
    static AlgebraicNumber from_minpoly(const IntPoly& f, unsigned root_index, unsigned precision_bits = 256);
    static AlgebraicNumber rational(const Rat& q, unsigned precision_bits = 256);

    std::size_t degree() const { return zpdehn::degree(minpoly); }
    bool is_rational() const { return degree() == 1; }
    Rat rational_value() const;
    bool is_algebraic_integer() const { return minpoly.back() == 1; }
    std::complex<double> approx() const;
    std::string to_string() const;

    bool operator==(const AlgebraicNumber& o) const { return minpoly == o.minpoly && root_index == o.root_index; }
    bool operator<(const AlgebraicNumber& o) const;
};

struct HeightValue {
    double value = 0;        // natural log units
    double error_bound = 0;
    std::string to_string() const;
};

// All complex roots of the minimal polynomial in root order.
std::vector<std::complex<double>> conjugates(const AlgebraicNumber& a);

// Throws PrecisionExhausted if the roots cannot be isolated at the top tier.
HeightValue weil_height(const AlgebraicNumber& a);

// Irreducible factors over Z of a primitive polynomial, each primitive with
// positive leading coefficient, sorted by degree then coefficients; repeated
// factors appear once. Degrees above 16 throw BudgetExceeded.
std::vector<IntPoly> factor_over_z(const IntPoly& f);

AlgebraicNumber negate(const AlgebraicNumber& a);
AlgebraicNumber inverse(const AlgebraicNumber& a);
AlgebraicNumber power(const AlgebraicNumber& a, long n);
AlgebraicNumber product(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber sum(const AlgebraicNumber& a, const AlgebraicNumber& b);

// K = Q(theta); an element is sum_k coords[k] theta^k with coords.size() = deg theta.
struct NumberField {
    AlgebraicNumber generator;
    std::size_t degree() const { return generator.degree(); }
};

struct FieldElement {
    RatVec coords;
};

AlgebraicNumber to_algebraic(const NumberField& k, const FieldElement& e);

// h(x_1, ..., x_n) = log(lcm of denominators * max(1, |x_i|)), the sum of the
// per-prime contributions log max(1, |x_i|_p) and the archimedean one.
HeightValue tuple_height(const std::vector<Rat>& xs);

// Elements of Z[theta] for an algebraic integer theta: all finite places
// contribute zero, so h = (1/d) sum over embeddings of log max(1, |sigma x_i|).
// FieldMismatch on a coordinate count other than deg theta; HypothesisViolated
// when theta is not an algebraic integer or a coordinate is not an integer.
HeightValue tuple_height(const NumberField& k, const std::vector<FieldElement>& xs);

// Numbers are first put in one field presentation: all rational; or, after
// removing duplicates, one number theta plus rational integers, theta an
// algebraic integer unless it stands alone. FieldMismatch for two different
// irrational numbers or when field_degree is not a multiple of every degree.
HeightValue tuple_height(const std::vector<AlgebraicNumber>& xs, std::size_t field_degree);

// Heights h <= h_max + kNorthcottSlack are kept; the slack absorbs the
// rounding of h_max itself (log 2 has no exact double).
constexpr double kNorthcottSlack = 1e-9;

// All algebraic numbers of degree <= d_max and height <= h_max, ordered by
// degree, minimal polynomial and root index. Coefficients are enumerated under
// |a_k| <= binom(d, k) e^{d h_max}. Requires d_max <= 3 and h_max <= log 3
// (BudgetExceeded otherwise).
std::vector<AlgebraicNumber> northcott_enumerate(double h_max, unsigned d_max);

struct BmzReport {
    std::vector<HeightValue> heights;
    double product = 0;
    double product_error = 0;
    std::size_t field_degree = 1;
    bool field_degree_is_bound = false;  // product of distinct degrees, not the compositum degree
    bool degenerate = false;             // some height is zero: 0 or a root of unity
    std::string to_string() const;
};

// Observational: reports prod h(eta_i) and the degree data, no comparison
// with any constant. field_degree overrides the computed degree.
BmzReport bmz_product_report(const std::vector<AlgebraicNumber>& xs, std::optional<std::size_t> field_degree = {});

}  // namespace zpdehn
