#include "zpdehn/upoly.hpp"

#include "zpdehn/errors.hpp"

#include <algorithm>
#include <sstream>

namespace zpdehn {

void trim(IntPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

void trim(RatPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

std::size_t degree(const IntPoly& f) {
    std::size_t d = f.size();
    while (d > 0 && f[d - 1] == 0) --d;
    return d == 0 ? 0 : d - 1;
}

std::size_t degree(const RatPoly& f) {
    std::size_t d = f.size();
    while (d > 0 && f[d - 1] == 0) --d;
    return d == 0 ? 0 : d - 1;
}

IntPoly make_int_poly(std::initializer_list<long> low_to_high) {
    IntPoly f;
    for (long c : low_to_high) f.emplace_back(c);
    return f;
}

IntPoly primitive_normalized(IntPoly f) {
    trim(f);
    if (f.empty()) throw Error(ErrorKind::InvalidArgument, "zero polynomial");
    BigInt g = content(f);
    if (f.back() < 0) g = -g;
    for (auto& c : f) c /= g;
    return f;
}

IntPoly primitive_normalized(const RatPoly& f) {
    BigInt den = 1;
    for (const auto& c : f) den = lcm(den, BigInt(c.get_den()));
    IntPoly g;
    for (const auto& c : f) g.push_back(BigInt(c * den));
    return primitive_normalized(std::move(g));
}

RatPoly to_rat_poly(const IntPoly& f) {
    RatPoly r;
    for (const auto& c : f) r.emplace_back(c);
    trim(r);
    return r;
}

RatPoly poly_mul(const RatPoly& a, const RatPoly& b) {
    if (a.empty() || b.empty()) return {};
    RatPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

std::pair<RatPoly, RatPoly> poly_divmod(const RatPoly& a, const RatPoly& b) {
    RatPoly d = b;
    trim(d);
    if (d.empty()) throw Error(ErrorKind::InvalidArgument, "division by the zero polynomial");
    RatPoly r = a;
    trim(r);
    if (r.size() < d.size()) return {{}, r};
    RatPoly q(r.size() - d.size() + 1);
    for (std::size_t k = q.size(); k-- > 0;) {
        Rat c = r[k + d.size() - 1] / d.back();
        q[k] = c;
        if (c != 0)
            for (std::size_t j = 0; j < d.size(); ++j) r[k + j] -= c * d[j];
    }
    trim(q);
    trim(r);
    return {q, r};
}

RatPoly poly_gcd(RatPoly a, RatPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        RatPoly r = poly_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.empty()) return a;
    Rat lead = a.back();
    for (auto& c : a) c /= lead;
    return a;
}

IntPoly derivative(const IntPoly& f) {
    IntPoly d;
    for (std::size_t k = 1; k < f.size(); ++k) d.push_back(f[k] * static_cast<unsigned long>(k));
    trim(d);
    return d;
}

IntPoly squarefree_part(const IntPoly& f) {
    IntPoly df = derivative(f);
    if (df.empty()) return primitive_normalized(f);
    RatPoly g = poly_gcd(to_rat_poly(f), to_rat_poly(df));
    return primitive_normalized(poly_divmod(to_rat_poly(f), g).first);
}

bool divides(const IntPoly& g, const IntPoly& f) {
    return poly_divmod(to_rat_poly(f), to_rat_poly(g)).second.empty();
}

IntPoly exact_quotient(const IntPoly& f, const IntPoly& g) {
    auto [q, r] = poly_divmod(to_rat_poly(f), to_rat_poly(g));
    if (!r.empty()) throw Error(ErrorKind::InvariantViolation, "polynomial division is not exact");
    IntPoly out;
    for (const auto& c : q) {
        if (c.get_den() != 1) throw Error(ErrorKind::InvariantViolation, "quotient is not integral");
        out.push_back(c.get_num());
    }
    return out;
}

IntPoly reversed(const IntPoly& f) {
    IntPoly g = f;
    trim(g);
    std::reverse(g.begin(), g.end());
    trim(g);
    return g;
}

IntPoly negated_argument(const IntPoly& f) {
    IntPoly g = f;
    for (std::size_t k = 1; k < g.size(); k += 2) g[k] = -g[k];
    return g;
}

RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b) {
    std::size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
    RatMatrix c(n, RatVec(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
        }
    return c;
}

RatMatrix kronecker(const RatMatrix& a, const RatMatrix& b) {
    std::size_t n = a.size(), m = b.size();
    RatMatrix c(n * m, RatVec(n * m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t l = 0; l < m; ++l) c[i * m + k][j * m + l] = a[i][j] * b[k][l];
    return c;
}

RatPoly charpoly(const RatMatrix& a) {
    const std::size_t n = a.size();
    RatPoly c(n + 1);
    c[n] = 1;
    RatMatrix m(n, RatVec(n));
    for (std::size_t k = 1; k <= n; ++k) {
        RatMatrix am = mat_mul(a, m);
        for (std::size_t i = 0; i < n; ++i) am[i][i] += c[n - k + 1];
        m = std::move(am);
        RatMatrix t = mat_mul(a, m);
        Rat tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += t[i][i];
        c[n - k] = -tr / static_cast<unsigned long>(k);
    }
    return c;
}

RatMatrix companion(const IntPoly& f) {
    std::size_t d = degree(f);
    if (d == 0) throw Error(ErrorKind::InvalidArgument, "companion of a constant");
    RatMatrix c(d, RatVec(d));
    for (std::size_t i = 1; i < d; ++i) c[i][i - 1] = 1;
    for (std::size_t i = 0; i < d; ++i) c[i][d - 1] = -Rat(f[i]) / Rat(f[d]);
    return c;
}

namespace {

int mobius(unsigned n) {
    int mu = 1;
    for (unsigned p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            mu = -mu;
        }
    return n > 1 ? -mu : mu;
}

unsigned euler_phi(unsigned n) {
    unsigned r = n;
    for (unsigned p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            r -= r / p;
        }
    return n > 1 ? r - r / n : r;
}

}  // namespace

IntPoly cyclotomic(unsigned m) {
    if (m == 0) throw Error(ErrorKind::InvalidArgument, "cyclotomic index must be positive");
    // Phi_m = prod_{k | m} (x^k - 1)^{mu(m / k)}
    RatPoly num{1}, den{1};
    for (unsigned k = 1; k <= m; ++k) {
        if (m % k != 0) continue;
        int mu = mobius(m / k);
        if (mu == 0) continue;
        RatPoly t(k + 1);
        t[0] = -1;
        t[k] = 1;
        (mu > 0 ? num : den) = poly_mul(mu > 0 ? num : den, t);
    }
    RatPoly p = poly_divmod(num, den).first;
    IntPoly out;
    for (const auto& c : p) out.push_back(c.get_num());
    return out;
}

bool is_cyclotomic(const IntPoly& f) {
    IntPoly g = primitive_normalized(f);
    std::size_t d = degree(g);
    if (d == 0 || g.back() != 1 || abs(g[0]) != 1) return false;
    // phi(m) >= sqrt(m / 2), so phi(m) = d forces m <= 2 d^2.
    for (unsigned m = 1; m <= 2 * d * d + 2; ++m)
        if (euler_phi(m) == d && cyclotomic(m) == g) return true;
    return false;
}

std::string poly_to_string(const IntPoly& f) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = f.size(); k-- > 0;) {
        if (f[k] == 0) continue;
        BigInt a = abs(f[k]);
        if (first)
            os << (f[k] < 0 ? "-" : "");
        else
            os << (f[k] < 0 ? " - " : " + ");
        if (a != 1 || k == 0) os << a.get_str();
        if (k >= 1) os << "x";
        if (k >= 2) os << "^" << k;
        first = false;
    }
    return first ? "0" : os.str();
}

IntPoly parse_coefficients(const std::string& text) {
    IntPoly f;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok.erase(0, tok.find_first_not_of(" \t"));
        tok.erase(tok.find_last_not_of(" \t") + 1);
        BigInt c;
        if (tok.empty() || c.set_str(tok, 10) != 0)
            throw Error(ErrorKind::ParseError, "bad polynomial coefficient '" + tok + "'");
        f.push_back(c);
    }
    std::reverse(f.begin(), f.end());
    trim(f);
    if (f.empty()) throw Error(ErrorKind::ParseError, "polynomial has no nonzero coefficient");
    return f;
}

}  // namespace zpdehn
