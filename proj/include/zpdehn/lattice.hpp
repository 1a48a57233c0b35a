#pragma once

// Integral LLL reduction, small kernel bases of integer forms and integer
// relations among logarithms of complex numbers.

#include "zpdehn/exactalg.hpp"
#include "zpdehn/hpnum.hpp"

#include <optional>
#include <string>
#include <vector>

namespace zpdehn {

// LLL with exact integer Gram-Schmidt data (de Weger's integral variant).
// Rows must be linearly independent; delta = num / den in (1/4, 1].
std::vector<IntVec> lll_reduce(std::vector<IntVec> basis, long delta_num = 99, long delta_den = 100);

// Worst-case ratio prod |b_i| / covolume of a delta-reduced basis of rank k:
// (1 / (delta - 1/4))^{k (k - 1) / 4}.
double lll_product_bound(std::size_t k, double delta = 0.99);

struct LatticeBasis {
    std::vector<IntVec> vectors;  // sorted by Euclidean norm
    std::vector<double> norms;
};

struct SiegelResult {
    LatticeBasis basis;
    double ratio = 0;  // prod |b_i| / prod |v_j| over the rows v_j of the forms
};

// n - r independent integer vectors annihilating the r forms (rows), from the
// kernel lattice reduced with delta = 0.99. DegenerateForms when the rows are
// dependent; InvalidArgument when r >= n.
SiegelResult siegel_basis(const IntMatrix& forms);

struct MultRelation {
    IntVec exponents;
    double residual = 0;  // max(|sum a_i log|eta_i||, |sum a_i arg eta_i + 2 pi k|)
    std::string to_string() const;
};

// Searches for integers |a_i| <= coeff_bound, not all zero, with
// prod eta_i^{a_i} = 1, via LLL on the lattice spanned by
// (e_i, C log|eta_i|, C arg eta_i) and (0, 1, 0, 2 pi C), C = 2^{precision/2}.
// Candidates must satisfy the log relation within 2^{-precision/2} and are
// re-verified by multiplying out at working precision. Returns the relation
// of smallest max-norm, sign normalized so the first nonzero exponent is
// positive. "None" is evidence of independence up to the bound, not proof.
// Requires 128 <= precision <= 512 (PrecisionTooLow below), 1 to 8 nonzero inputs.
std::optional<MultRelation> find_multiplicative_relation(const std::vector<HighComplex>& numbers, long coeff_bound,
                                                         unsigned precision_bits = 256);

}  // namespace zpdehn
