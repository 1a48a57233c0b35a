#include "zpdehn/lattice.hpp"

#include "zpdehn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace zpdehn {

namespace {

BigInt round_div(const BigInt& a, const BigInt& b) {
    // nearest integer to a / b for b > 0
    BigInt q;
    BigInt num = 2 * a + b, den = 2 * b;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

BigInt exact_div(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

double norm_of(const IntVec& v) {
    return std::sqrt(dot(v, v).get_d());
}

BigInt to_big(const HighReal& x) {
    BigInt z;
    mpfr_get_z(z.get_mpz_t(), x.backend().data(), MPFR_RNDN);
    return z;
}

}  // namespace

std::vector<IntVec> lll_reduce(std::vector<IntVec> b, long delta_num, long delta_den) {
    const std::size_t n = b.size();
    if (n <= 1) return b;
    if (!(4 * delta_num > delta_den && delta_num <= delta_den && delta_den > 0))
        throw Error(ErrorKind::InvalidArgument, "LLL delta must lie in (1/4, 1]");
    // d[i + 1] = Gram determinant of the first i + 1 vectors, d[0] = 1.
    std::vector<BigInt> d(n + 1);
    std::vector<std::vector<BigInt>> lam(n, std::vector<BigInt>(n));
    d[0] = 1;
    d[1] = dot(b[0], b[0]);
    if (d[1] == 0) throw Error(ErrorKind::InvalidArgument, "LLL input contains a zero vector");
    std::size_t k = 1, kmax = 0;

    auto redi = [&](std::size_t k, std::size_t l) {
        if (2 * abs(lam[k][l]) <= d[l + 1]) return;
        BigInt q = round_div(lam[k][l], d[l + 1]);
        for (std::size_t t = 0; t < b[k].size(); ++t) b[k][t] -= q * b[l][t];
        lam[k][l] -= q * d[l + 1];
        for (std::size_t i = 0; i < l; ++i) lam[k][i] -= q * lam[l][i];
    };
    auto swapi = [&](std::size_t k) {
        std::swap(b[k], b[k - 1]);
        for (std::size_t j = 0; j + 1 < k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
        BigInt l = lam[k][k - 1];
        BigInt bb = exact_div(d[k - 1] * d[k + 1] + l * l, d[k]);
        for (std::size_t i = k + 1; i <= kmax; ++i) {
            BigInt t = lam[i][k];
            lam[i][k] = exact_div(d[k + 1] * lam[i][k - 1] - l * t, d[k]);
            lam[i][k - 1] = exact_div(bb * t + l * lam[i][k], d[k + 1]);
        }
        d[k] = bb;
    };

    while (k < n) {
        if (k > kmax) {
            kmax = k;
            for (std::size_t j = 0; j <= k; ++j) {
                BigInt u = dot(b[k], b[j]);
                for (std::size_t i = 0; i < j; ++i) u = exact_div(d[i + 1] * u - lam[k][i] * lam[j][i], d[i]);
                if (j < k)
                    lam[k][j] = u;
                else
                    d[k + 1] = u;
            }
            if (d[k + 1] == 0) throw Error(ErrorKind::InvalidArgument, "LLL input vectors are dependent");
        }
        redi(k, k - 1);
        // Lovasz: d_k d_{k-2} >= delta d_{k-1}^2 - lambda^2, scaled by delta_den
        BigInt lhs = delta_den * d[k + 1] * d[k - 1];
        BigInt rhs = delta_num * d[k] * d[k] - delta_den * lam[k][k - 1] * lam[k][k - 1];
        if (lhs < rhs) {
            swapi(k);
            k = std::max<std::size_t>(1, k - 1);
        } else {
            for (std::size_t l = k - 1; l-- > 0;) redi(k, l);
            ++k;
        }
    }
    return b;
}

double lll_product_bound(std::size_t k, double delta) {
    return std::pow(1 / (delta - 0.25), static_cast<double>(k * (k - 1)) / 4);
}

SiegelResult siegel_basis(const IntMatrix& forms) {
    const std::size_t r = forms.rows(), n = forms.cols();
    if (r == 0) throw Error(ErrorKind::InvalidArgument, "no forms");
    if (rank_q(forms) < r) throw Error(ErrorKind::DegenerateForms, "forms are linearly dependent");
    if (r >= n) throw Error(ErrorKind::InvalidArgument, "need fewer forms than variables");
    std::vector<IntVec> basis = lll_reduce(kernel_basis(forms));
    std::stable_sort(basis.begin(), basis.end(), [](const IntVec& a, const IntVec& b) { return dot(a, a) < dot(b, b); });
    SiegelResult out;
    double num = 1, den = 1;
    for (auto& v : basis) {
        for (std::size_t j = 0; j < r; ++j) {
            BigInt s = 0;
            for (std::size_t i = 0; i < n; ++i) s += forms.at(j, i) * v[i];
            if (s != 0) throw Error(ErrorKind::InvariantViolation, "reduced vector does not annihilate the forms");
        }
        double nv = norm_of(v);
        out.basis.norms.push_back(nv);
        num *= nv;
    }
    for (std::size_t j = 0; j < r; ++j) den *= norm_of(forms.row(j));
    out.basis.vectors = std::move(basis);
    out.ratio = num / den;
    return out;
}

std::string MultRelation::to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < exponents.size(); ++i) os << (i ? ", " : "") << exponents[i].get_str();
    os << ") residual " << residual;
    return os.str();
}

std::optional<MultRelation> find_multiplicative_relation(const std::vector<HighComplex>& numbers, long coeff_bound,
                                                         unsigned precision_bits) {
    if (precision_bits < 128)
        throw Error(ErrorKind::PrecisionTooLow, "relation search needs at least 128 bits, got " + std::to_string(precision_bits));
    if (precision_bits > 512) throw Error(ErrorKind::InvalidArgument, "relation search precision is capped at 512 bits");
    const std::size_t m = numbers.size();
    if (m == 0 || m > 8) throw Error(ErrorKind::InvalidArgument, "relation search takes 1 to 8 numbers");
    if (coeff_bound < 1) throw Error(ErrorKind::InvalidArgument, "coefficient bound must be positive");
    std::vector<HighReal> re(m), im(m);
    for (std::size_t i = 0; i < m; ++i) {
        HighReal a = abs(numbers[i]);
        if (a == 0) throw Error(ErrorKind::InvalidArgument, "relation search needs nonzero numbers");
        re[i] = log(a);
        im[i] = atan2(numbers[i].imag(), numbers[i].real());
    }
    const HighReal two_pi = 2 * boost::math::constants::pi<HighReal>();
    const HighReal scale = pow(HighReal(2), static_cast<int>(precision_bits / 2));
    const HighReal tol = pow(HighReal(2), -static_cast<int>(precision_bits / 2));

    // Rows: (e_i, 0, C log|eta_i|, C arg eta_i) and (0, 1, 0, C 2 pi).
    std::vector<IntVec> basis;
    for (std::size_t i = 0; i < m; ++i) {
        IntVec row(m + 3);
        row[i] = 1;
        row[m + 1] = to_big(scale * re[i]);
        row[m + 2] = to_big(scale * im[i]);
        basis.push_back(row);
    }
    IntVec last(m + 3);
    last[m] = 1;
    last[m + 2] = to_big(scale * two_pi);
    basis.push_back(last);
    basis = lll_reduce(basis);

    // Exact check of a candidate exponent vector: log residual, then the product.
    auto verify = [&](const IntVec& a) -> std::optional<MultRelation> {
        HighReal sr = 0, si = 0;
        for (std::size_t i = 0; i < m; ++i) {
            HighReal c(a[i].get_str());
            sr += c * re[i];
            si += c * im[i];
        }
        HighReal k = round(si / two_pi);
        HighReal ri = si - k * two_pi;
        if (abs(sr) > tol || abs(ri) > tol) return std::nullopt;
        HighComplex prod(1);
        for (std::size_t i = 0; i < m; ++i) {
            long e = a[i].get_si();
            HighComplex base = e < 0 ? HighComplex(1) / numbers[i] : numbers[i], p(1);
            for (unsigned long t = static_cast<unsigned long>(std::labs(e)); t; t >>= 1) {
                if (t & 1) p *= base;
                base *= base;
            }
            prod *= p;
        }
        if (abs(prod - HighComplex(1)) > tol) return std::nullopt;
        MultRelation rel;
        rel.exponents = a;
        rel.residual = static_cast<double>(std::max(abs(sr), abs(ri)));
        return rel;
    };
    auto within = [&](const IntVec& a) {
        bool nonzero = false;
        for (const auto& x : a) {
            if (abs(x) > coeff_bound) return false;
            nonzero = nonzero || x != 0;
        }
        return nonzero;
    };
    auto normalize = [](IntVec a) {
        for (const auto& x : a)
            if (x != 0) {
                if (x < 0)
                    for (auto& y : a) y = -y;
                break;
            }
        return a;
    };
    auto maxnorm = [](const IntVec& a) {
        BigInt mx = 0;
        for (const auto& x : a) mx = std::max(mx, BigInt(abs(x)));
        return mx;
    };

    // Relation vectors among the reduced rows; small combinations of them
    // cover relation lattices of rank above one.
    std::vector<IntVec> rels;
    for (const auto& v : basis) {
        IntVec a(v.begin(), v.begin() + static_cast<long>(m));
        if (std::all_of(a.begin(), a.end(), [](const BigInt& x) { return x == 0; })) continue;
        if (verify(a)) rels.push_back(a);
    }
    std::optional<MultRelation> best;
    auto consider = [&](const IntVec& a) {
        if (!within(a)) return;
        IntVec g = normalize(a);
        BigInt c = content(g);
        if (c > 1) {
            IntVec p = g;
            for (auto& x : p) x /= c;
            if (verify(p)) g = p;
        }
        auto rel = verify(g);
        if (!rel) return;
        if (!best || maxnorm(g) < maxnorm(best->exponents) ||
            (maxnorm(g) == maxnorm(best->exponents) && g < best->exponents))
            best = rel;
    };
    const std::size_t r = rels.size();
    if (r == 0) return std::nullopt;
    std::vector<long> coef(r, -2);
    while (true) {
        IntVec a(m);
        bool any = false;
        for (std::size_t j = 0; j < r; ++j)
            if (coef[j] != 0) {
                any = true;
                for (std::size_t i = 0; i < m; ++i) a[i] += coef[j] * rels[j][i];
            }
        if (any) consider(a);
        std::size_t j = 0;
        while (j < r && coef[j] == 2) coef[j++] = -2;
        if (j == r) break;
        ++coef[j];
    }
    return best;
}

}  // namespace zpdehn
