#pragma once

// Truncated Neumann-Zagier potentials
//   Phi(u) = sum_i tau_i u_i^2 + sum_alpha m_alpha u^alpha   (alpha even, 4 <= |alpha| <= trunc)
// with v_i = 1/2 dPhi/du_i, the Dehn filling equations p_i u_i + q_i v_i = 2 pi i,
// core holonomies t_i = exp(r_i u_i + s_i v_i) and cosmetic collision scans.

#include "zpdehn/hpnum.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace zpdehn {

using Cplx = std::complex<double>;
using CVec = std::vector<Cplx>;
using MultiIndex = std::vector<unsigned>;

struct NZPotential {
    std::size_t n_cusps = 0;
    CVec shapes;
    std::map<MultiIndex, Cplx> coefficients;
    unsigned trunc_degree = 8;
    double trust_radius = 0.5;

    // Throws InvalidArgument on odd or out-of-range exponents and real shapes.
    void validate() const;
    bool is_quadratic() const { return coefficients.empty(); }
};

// Per-cusp filling data with -q r + p s = 1.
struct CuspFilling {
    long p = 1, q = 0, r = 0, s = 1;
    bool operator==(const CuspFilling& o) const { return p == o.p && q == o.q && r == o.r && s == o.s; }
    bool operator<(const CuspFilling& o) const;
    std::string to_string() const;  // "p/q"
};

using FillingCoefficient = std::vector<CuspFilling>;

// Coprime (p, q) with a normalized (r, s): 0 <= r < |p| when p != 0.
CuspFilling make_filling(long p, long q);
// Same (p, q), with (r, s) shifted by k (p, q).
CuspFilling shifted(const CuspFilling& f, long k);
// Whether two fillings name the same slope p/q (signs ignored).
bool same_slope(const CuspFilling& a, const CuspFilling& b);

enum class Branch { Plus, Minus };  // right-hand side +2 pi i or -2 pi i

struct SolveOptions {
    Branch branch = Branch::Plus;
    double tol = 1e-12;
    unsigned max_iter = 50;
};

struct FillingResult {
    CVec u, v;
    CVec t;      // normalized holonomies, |t_i| > 1
    CVec t_raw;  // exp(r_i u_i + s_i v_i) before normalization
    std::vector<bool> inverted;
    double residual = 0;
    unsigned newton_iters = 0;
    std::vector<std::string> warnings;
};

struct HighFillingResult {
    std::vector<HighComplex> u, v, t;
    HighReal residual;
    unsigned newton_iters = 0;
};

Cplx phi(const NZPotential& pot, const CVec& u);
// v_i = tau_i u_i + 1/2 sum_alpha alpha_i m_alpha u^(alpha - e_i). Throws
// OutOfTrustRadius when higher-order terms exist and some |u_i| exceeds the trust radius.
CVec v_of_u(const NZPotential& pot, const CVec& u);
// Jacobian dv_i/du_j, row-major n x n.
std::vector<CVec> dv_du(const NZPotential& pot, const CVec& u);

// Geometric estimate of the omitted part of v at polydisc radius, extrapolating
// the decay between the two outermost stored shells.
double tail_bound(const NZPotential& pot, double radius);

FillingResult solve_filling(const NZPotential& pot, const FillingCoefficient& coeff, const SolveOptions& opt = {});
// Refines a solution at 160 decimal digits; the start is the double-precision result.
HighFillingResult solve_filling_high(const NZPotential& pot, const FillingCoefficient& coeff,
                                     const SolveOptions& opt = {});
// Closed form for a pure quadratic potential, normalized to |t| > 1.
CVec quadratic_holonomies(const NZPotential& pot, const FillingCoefficient& coeff, Branch branch = Branch::Plus);

// {t_1..t_n} as a sorted multiset (real part, then imaginary part).
CVec core_holonomy_set(const FillingResult& result);
bool holonomy_sets_equal(const CVec& a, const CVec& b, double tol = 1e-8);
double holonomy_set_distance(const CVec& a, const CVec& b);

struct Collision {
    FillingCoefficient a, b;
    bool trivial = false;   // same slope on every cusp
    bool confirmed = false; // survived the high-precision re-solve
    double distance = 0;
};

struct CollisionReport {
    int bound = 0;
    double tol = 0;
    std::uint64_t fillings = 0;
    std::vector<Collision> collisions;  // confirmed, sorted by coefficient tuples
    std::uint64_t candidates = 0;       // bucket matches before confirmation
    std::uint64_t nontrivial = 0;
    std::uint64_t trivial = 0;
};

// Coprime (p, q), both signs, with ceil(B/2) <= |p| + |q| <= B.
std::vector<CuspFilling> scan_slopes(int bound);
CollisionReport cosmetic_scan(const NZPotential& pot, int bound, double tol = 1e-8);

// Two cusps: no stored mixed coefficient is nonzero.
bool sgi_check(const NZPotential& pot);
// Two cusps: (i+2)(i+1) m_{i+2,k-i-2} = (k-i)(k-i-1) m_{i,k-i} for all even k, i.
bool difference_collapse_check(const NZPotential& pot);

struct ShapeSpec {
    CVec shapes;          // empty: built-in cubic shapes
    bool mixing = true;   // draw mixed coefficients as well
    double trust_radius = 0.5;
};

// Built-in non-quadratic shapes: roots of x^3 - x + 1, i * 2^(1/3), root of x^3 - 2x + 2.
CVec default_shapes(std::size_t n);
// Coefficients of degree k drawn uniformly from the disc of radius 0.1^((k-2)/2).
NZPotential synth_potential(std::uint64_t seed, std::size_t n, unsigned trunc_degree = 8, const ShapeSpec& spec = {});

NZPotential read_manifold(const std::string& path);
NZPotential parse_manifold(const std::string& text, const std::string& source = "<input>");
std::string write_manifold(const NZPotential& pot);

}  // namespace zpdehn
