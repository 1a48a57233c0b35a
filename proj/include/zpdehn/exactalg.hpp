#pragma once

// Exact rational arithmetic, integer kernels and matrices of polynomials over Q.
//
// Cusp shapes are modelled as independent transcendentals tau_1..tau_n. A rank
// computed over Q(tau_1..tau_n) equals the rank at the actual shapes whenever
// the monomials occurring in the relevant minors are Q-linearly independent at
// the actual shapes. The degree needed per use:
//   one-shape 2x4 blocks:       1, tau, tau^2            (non-quadratic tau)
//   two-shape 2x4 blocks:       1, tau1, tau2, tau1*tau2
//   r x n Jacobians a + b*tau:  square-free monomials in tau_1..tau_n of degree <= r
// No floating point is used here.

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace zpdehn {

using BigInt = mpz_class;
using Rat = mpq_class;
using RatVec = std::vector<Rat>;
using RatMatrix = std::vector<RatVec>;
using IntVec = std::vector<BigInt>;

Rat make_rat(long num, long den = 1);

// Multivariate polynomial over Q. Terms are kept in lexicographic exponent order.
class QPoly {
public:
    using Exponent = std::vector<unsigned>;

    explicit QPoly(unsigned nvars = 0) : nvars_(nvars) {}
    static QPoly constant(unsigned nvars, const Rat& c);
    static QPoly variable(unsigned nvars, unsigned i);

    unsigned nvars() const { return nvars_; }
    const std::map<Exponent, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    std::size_t term_count() const { return terms_.size(); }
    unsigned total_degree() const;

    void add_term(const Exponent& e, const Rat& c);
    Rat coefficient(const Exponent& e) const;
    Rat evaluate(const RatVec& point) const;

    QPoly operator+(const QPoly& o) const;
    QPoly operator-(const QPoly& o) const;
    QPoly operator-() const;
    QPoly operator*(const QPoly& o) const;
    QPoly operator*(const Rat& c) const;
    bool operator==(const QPoly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
    bool operator!=(const QPoly& o) const { return !(*this == o); }

    // Quotient of an exact division; throws InvariantViolation when d does not divide *this.
    QPoly divide_exact(const QPoly& d) const;

    std::string to_string() const;

private:
    unsigned nvars_;
    std::map<Exponent, Rat> terms_;
};

class QPolyMatrix {
public:
    QPolyMatrix() = default;
    QPolyMatrix(std::size_t rows, std::size_t cols, unsigned nvars);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    unsigned nvars() const { return nvars_; }
    QPoly& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const QPoly& at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    QPolyMatrix transposed() const;
    RatMatrix evaluate(const RatVec& point) const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    unsigned nvars_ = 0;
    std::vector<QPoly> entries_;
};

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols);
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows);
    static IntMatrix from_rows(const std::vector<IntVec>& rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    BigInt& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const BigInt& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    IntVec row(std::size_t r) const;
    RatMatrix to_rat() const;
    bool operator==(const IntMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<BigInt> data_;
};

// Rank over Q(tau_1..tau_n) by fraction-free elimination; pivot is the first
// nonzero entry in row-major order of the remaining submatrix.
std::size_t generic_rank(const QPolyMatrix& m);

std::size_t rank_q(const RatMatrix& m);
std::size_t rank_q(const IntMatrix& m);

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& m);

// Basis of the integer kernel lattice {x in Z^c : M x = 0}, returned in row
// Hermite normal form (leading entries positive, entries above pivots reduced).
std::vector<IntVec> kernel_basis(const IntMatrix& m);

// Row Hermite normal form of an integer matrix given by rows; zero rows dropped.
std::vector<IntVec> hermite_normal_form(std::vector<IntVec> rows);

BigInt dot(const IntVec& a, const IntVec& b);
BigInt content(const IntVec& v);

}  // namespace zpdehn
