#include "zpdehn/exactalg.hpp"

#include "zpdehn/errors.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace zpdehn {

Rat make_rat(long num, long den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// ---------------------------------------------------------------- QPoly

QPoly QPoly::constant(unsigned nvars, const Rat& c) {
    QPoly p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
}

QPoly QPoly::variable(unsigned nvars, unsigned i) {
    QPoly p(nvars);
    Exponent e(nvars, 0);
    e.at(i) = 1;
    p.add_term(e, Rat(1));
    return p;
}

bool QPoly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const auto& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](unsigned x) { return x == 0; });
}

unsigned QPoly::total_degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) {
        unsigned s = 0;
        for (unsigned x : e) s += x;
        d = std::max(d, s);
    }
    return d;
}

void QPoly::add_term(const Exponent& e, const Rat& c) {
    if (e.size() != nvars_) throw Error(ErrorKind::InvalidArgument, "exponent length mismatch");
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Rat QPoly::coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rat(0) : it->second;
}

Rat QPoly::evaluate(const RatVec& point) const {
    Rat total = 0;
    for (const auto& [e, c] : terms_) {
        Rat t = c;
        for (unsigned i = 0; i < nvars_; ++i)
            for (unsigned k = 0; k < e[i]; ++k) t *= point.at(i);
        total += t;
    }
    return total;
}

QPoly QPoly::operator+(const QPoly& o) const {
    QPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

QPoly QPoly::operator-(const QPoly& o) const {
    QPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

QPoly QPoly::operator-() const {
    QPoly r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

QPoly QPoly::operator*(const QPoly& o) const {
    QPoly r(nvars_);
    Exponent e(nvars_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) {
            for (unsigned i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

QPoly QPoly::operator*(const Rat& c) const {
    QPoly r(nvars_);
    if (c == 0) return r;
    for (const auto& [e, x] : terms_) r.terms_.emplace(e, x * c);
    return r;
}

QPoly QPoly::divide_exact(const QPoly& d) const {
    if (d.is_zero()) throw Error(ErrorKind::InvalidArgument, "division by zero polynomial");
    QPoly q(nvars_), rem = *this;
    const auto& [dlead_e, dlead_c] = *d.terms_.rbegin();
    Exponent e(nvars_);
    while (!rem.is_zero()) {
        const auto& [rlead_e, rlead_c] = *rem.terms_.rbegin();
        for (unsigned i = 0; i < nvars_; ++i) {
            if (rlead_e[i] < dlead_e[i])
                throw Error(ErrorKind::InvariantViolation, "inexact polynomial division");
            e[i] = rlead_e[i] - dlead_e[i];
        }
        QPoly t(nvars_);
        t.add_term(e, rlead_c / dlead_c);
        q.add_term(e, rlead_c / dlead_c);
        rem = rem - t * d;
    }
    return q;
}

std::string QPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        if (!first) os << " + ";
        first = false;
        os << it->second.get_str();
        for (unsigned i = 0; i < nvars_; ++i) {
            if (it->first[i] == 0) continue;
            os << "*t" << (i + 1);
            if (it->first[i] > 1) os << "^" << it->first[i];
        }
    }
    return os.str();
}

// ---------------------------------------------------------------- matrices

QPolyMatrix::QPolyMatrix(std::size_t rows, std::size_t cols, unsigned nvars)
    : rows_(rows), cols_(cols), nvars_(nvars), entries_(rows * cols, QPoly(nvars)) {}

QPolyMatrix QPolyMatrix::transposed() const {
    QPolyMatrix t(cols_, rows_, nvars_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
}

RatMatrix QPolyMatrix::evaluate(const RatVec& point) const {
    RatMatrix m(rows_, RatVec(cols_));
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m[r][c] = at(r, c).evaluate(point);
    return m;
}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, BigInt(0)) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
        if (r.size() != cols_) throw Error(ErrorKind::InvalidArgument, "ragged integer matrix");
        for (long x : r) data_.emplace_back(x);
    }
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVec>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw Error(ErrorKind::InvalidArgument, "ragged integer matrix");
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
    }
    return m;
}

IntVec IntMatrix::row(std::size_t r) const {
    return IntVec(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
}

RatMatrix IntMatrix::to_rat() const {
    RatMatrix m(rows_, RatVec(cols_));
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m[r][c] = Rat(at(r, c));
    return m;
}

// ---------------------------------------------------------------- ranks

std::size_t generic_rank(const QPolyMatrix& m) {
    const std::size_t R = m.rows(), C = m.cols();
    if (R == 0 || C == 0) return 0;
    std::vector<std::vector<QPoly>> a(R, std::vector<QPoly>(C, QPoly(m.nvars())));
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t c = 0; c < C; ++c) a[r][c] = m.at(r, c);

    QPoly prev = QPoly::constant(m.nvars(), Rat(1));
    std::size_t rank = 0;
    for (std::size_t k = 0; k < std::min(R, C); ++k) {
        std::size_t pr = R, pc = C;
        for (std::size_t i = k; i < R && pr == R; ++i)
            for (std::size_t j = k; j < C; ++j)
                if (!a[i][j].is_zero()) {
                    pr = i;
                    pc = j;
                    break;
                }
        if (pr == R) break;
        std::swap(a[k], a[pr]);
        if (pc != k)
            for (std::size_t i = 0; i < R; ++i) std::swap(a[i][k], a[i][pc]);
        for (std::size_t i = k + 1; i < R; ++i) {
            for (std::size_t j = k + 1; j < C; ++j) {
                QPoly num = a[k][k] * a[i][j] - a[i][k] * a[k][j];
                a[i][j] = prev.is_constant() ? num * (Rat(1) / prev.terms().begin()->second)
                                             : num.divide_exact(prev);
            }
            a[i][k] = QPoly(m.nvars());
        }
        prev = a[k][k];
        ++rank;
    }
    return rank;
}

std::vector<std::size_t> rref(RatMatrix& m) {
    std::vector<std::size_t> pivots;
    const std::size_t R = m.size();
    if (R == 0) return pivots;
    const std::size_t C = m[0].size();
    std::size_t row = 0;
    for (std::size_t c = 0; c < C && row < R; ++c) {
        std::size_t p = row;
        while (p < R && m[p][c] == 0) ++p;
        if (p == R) continue;
        std::swap(m[row], m[p]);
        Rat inv = 1 / m[row][c];
        for (std::size_t j = c; j < C; ++j) m[row][j] *= inv;
        for (std::size_t i = 0; i < R; ++i) {
            if (i == row || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (std::size_t j = c; j < C; ++j) m[i][j] -= f * m[row][j];
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

std::size_t rank_q(const RatMatrix& m) {
    RatMatrix a = m;
    return rref(a).size();
}

std::size_t rank_q(const IntMatrix& m) { return rank_q(m.to_rat()); }

// ---------------------------------------------------------------- lattices

BigInt dot(const IntVec& a, const IntVec& b) {
    BigInt s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

BigInt content(const IntVec& v) {
    BigInt g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return g;
}

namespace {

void ext_gcd(const BigInt& a, const BigInt& b, BigInt& g, BigInt& s, BigInt& t) {
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace

std::vector<IntVec> hermite_normal_form(std::vector<IntVec> rows) {
    if (rows.empty()) return rows;
    const std::size_t C = rows[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < C && r < rows.size(); ++c) {
        // Combine all entries in column c at rows >= r into row r.
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
            if (rows[i][c] == 0) continue;
            if (rows[r][c] == 0) {
                std::swap(rows[r], rows[i]);
                continue;
            }
            BigInt g, s, t;
            ext_gcd(rows[r][c], rows[i][c], g, s, t);
            BigInt x = rows[r][c] / g, y = rows[i][c] / g;
            IntVec nr(C), ni(C);
            for (std::size_t j = 0; j < C; ++j) {
                nr[j] = s * rows[r][j] + t * rows[i][j];
                ni[j] = x * rows[i][j] - y * rows[r][j];
            }
            rows[r] = std::move(nr);
            rows[i] = std::move(ni);
        }
        if (rows[r][c] == 0) continue;
        if (rows[r][c] < 0)
            for (auto& x : rows[r]) x = -x;
        for (std::size_t i = 0; i < r; ++i) {
            BigInt q = floor_div(rows[i][c], rows[r][c]);
            if (q == 0) continue;
            for (std::size_t j = 0; j < C; ++j) rows[i][j] -= q * rows[r][j];
        }
        ++r;
    }
    rows.resize(r);
    return rows;
}

std::vector<IntVec> kernel_basis(const IntMatrix& m) {
    const std::size_t R = m.rows(), C = m.cols();
    if (C == 0) return {};
    // Column operations on B = M, mirrored on U = I, until B is in column echelon form.
    std::vector<IntVec> B(C, IntVec(R)), U(C, IntVec(C, BigInt(0)));
    for (std::size_t c = 0; c < C; ++c) {
        for (std::size_t r = 0; r < R; ++r) B[c][r] = m.at(r, c);
        U[c][c] = 1;
    }
    auto combine = [&](std::size_t a, std::size_t b, const BigInt& s, const BigInt& t, const BigInt& u,
                       const BigInt& v) {
        // col a <- s*a + t*b ; col b <- u*a + v*b
        for (auto* M : {&B, &U}) {
            IntVec& ca = (*M)[a];
            IntVec& cb = (*M)[b];
            for (std::size_t k = 0; k < ca.size(); ++k) {
                BigInt na = s * ca[k] + t * cb[k];
                BigInt nb = u * ca[k] + v * cb[k];
                ca[k] = std::move(na);
                cb[k] = std::move(nb);
            }
        }
    };
    std::size_t p = 0;
    for (std::size_t r = 0; r < R && p < C; ++r) {
        for (std::size_t c = p + 1; c < C; ++c) {
            if (B[c][r] == 0) continue;
            if (B[p][r] == 0) {
                std::swap(B[p], B[c]);
                std::swap(U[p], U[c]);
                continue;
            }
            BigInt g, s, t;
            ext_gcd(B[p][r], B[c][r], g, s, t);
            BigInt x = B[p][r] / g, y = B[c][r] / g;
            combine(p, c, s, t, -y, x);
        }
        if (B[p][r] != 0) ++p;
    }
    std::vector<IntVec> ker(U.begin() + static_cast<std::ptrdiff_t>(p), U.end());
    return hermite_normal_form(std::move(ker));
}

}  // namespace zpdehn
