#include "zpdehn/heights.hpp"

#include "roots.hpp"
#include "zpdehn/errors.hpp"
#include "zpdehn/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <iomanip>
#include <sstream>

namespace zpdehn {

using detail::certified_roots;
using detail::kTierCount;
using detail::RootSet;
using detail::tier_bits;
using detail::tier_for_bits;
using detail::to_mp;
using detail::with_tier;

namespace {

struct NeedPrecision {};

template <unsigned D>
BigInt round_to_int(const MpReal<D>& x) {
    BigInt z;
    mpfr_get_z(z.get_mpz_t(), x.backend().data(), MPFR_RNDN);
    return z;
}

template <unsigned D>
MpReal<D> eps_of() {
    return pow(MpReal<D>(2), 1 - static_cast<int>(D * 3.3219280948873623));
}

template <unsigned D>
RootSet<D> roots_or_escalate(const IntPoly& f) {
    auto rs = certified_roots<D>(f);
    if (!rs.certified) throw NeedPrecision{};
    return rs;
}

// Runs body<D>() from the starting tier upwards until it stops asking for precision.
template <class F>
auto escalate(unsigned first_tier, const char* what, F&& body) {
    for (unsigned t = first_tier; t < kTierCount; ++t) {
        try {
            return with_tier(t, body);
        } catch (const NeedPrecision&) {
        }
    }
    throw Error(ErrorKind::PrecisionExhausted,
                std::string(what) + ": roots not isolated at " + std::to_string(tier_bits(kTierCount - 1)) + " bits");
}

std::size_t bit_length(const IntPoly& f) {
    std::size_t b = 0;
    for (const auto& c : f) b = std::max(b, mpz_sizeinbase(c.get_mpz_t(), 2));
    return b;
}

// Starting tier: enough bits for the coefficient sizes involved in rounding.
unsigned start_tier(const IntPoly& f, unsigned bits) {
    unsigned need = std::max<unsigned>(bits, static_cast<unsigned>(4 * bit_length(f) + 64));
    return tier_for_bits(std::min(need, tier_bits(kTierCount - 1)));
}

// Trial factorization of a square-free primitive polynomial: subsets S of
// the roots give lead * prod_{S} (x - z), which is integral for a true factor.
template <unsigned D>
std::vector<IntPoly> factor_squarefree_at(const IntPoly& f) {
    using R = MpReal<D>;
    using C = MpComplex<D>;
    auto rs = roots_or_escalate<D>(f);
    const R eps = eps_of<D>();
    IntPoly rem = f;
    std::vector<std::size_t> active(rs.z.size());
    std::iota(active.begin(), active.end(), 0);
    std::vector<IntPoly> out;

    auto try_subset = [&](const std::vector<std::size_t>& pick) -> std::optional<IntPoly> {
        const R lead = to_mp<D>(rem.back());
        R with = 1, without = 1;
        C trace(0);
        for (std::size_t i : pick) {
            R a = abs(rs.z[i]);
            with *= 1 + a + rs.radius[i];
            without *= 1 + a;
            trace += rs.z[i];
        }
        R err = lead * (with - without) + lead * with * 8 * R(static_cast<long>(pick.size())) * eps;
        if (err > R(0.01)) throw NeedPrecision{};
        C t = trace * lead;
        if (abs(t.imag()) > R(0.25) || abs(t.real() - round(t.real())) > R(0.25)) return std::nullopt;
        std::vector<C> p{C(lead)};
        for (std::size_t i : pick) {
            std::vector<C> q(p.size() + 1, C(0));
            for (std::size_t k = 0; k < p.size(); ++k) q[k + 1] += p[k], q[k] -= p[k] * rs.z[i];
            p = std::move(q);
        }
        IntPoly g;
        for (const auto& c : p) {
            if (abs(c.imag()) > R(0.25) || abs(c.real() - round(c.real())) > R(0.25)) return std::nullopt;
            g.push_back(round_to_int<D>(c.real()));
        }
        trim(g);
        if (degree(g) != pick.size()) return std::nullopt;
        g = primitive_normalized(g);
        if (!divides(g, rem)) return std::nullopt;
        return g;
    };

    for (std::size_t k = 1; 2 * k <= active.size();) {
        bool found = false;
        std::vector<std::size_t> idx(k);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            std::vector<std::size_t> pick;
            for (std::size_t i : idx) pick.push_back(active[i]);
            if (auto g = try_subset(pick)) {
                out.push_back(*g);
                rem = exact_quotient(rem, *g);
                std::vector<std::size_t> keep;
                for (std::size_t i : active)
                    if (std::find(pick.begin(), pick.end(), i) == pick.end()) keep.push_back(i);
                active = std::move(keep);
                found = true;
                break;
            }
            std::size_t m = active.size();
            std::size_t j = k;
            while (j > 0 && idx[j - 1] == m - k + j - 1) --j;
            if (j == 0) break;
            ++idx[j - 1];
            for (std::size_t t = j; t < k; ++t) idx[t] = idx[t - 1] + 1;
        }
        if (!found) ++k;
    }
    if (degree(rem) >= 1) out.push_back(primitive_normalized(rem));
    return out;
}

// Degree <= 3: reducible iff there is a rational root p/q with p | a_0, q | lead.
bool has_rational_root(const std::vector<long>& c) {
    const long a0 = std::abs(c.front()), lead = std::abs(c.back());
    if (a0 == 0) return true;
    for (long p = 1; p <= a0; ++p) {
        if (a0 % p != 0) continue;
        for (long q = 1; q <= lead; ++q) {
            if (lead % q != 0 || std::gcd(p, q) != 1) continue;
            for (long sp : {p, -p}) {
                // q^d f(sp / q) = sum c_k sp^k q^(d-k)
                long v = 0, pk = 1, qk = 1;
                for (std::size_t k = 1; k < c.size(); ++k) qk *= q;
                for (std::size_t k = 0; k < c.size(); ++k) {
                    v += c[k] * pk * qk;
                    pk *= sp;
                    if (k + 1 < c.size()) qk /= q;
                }
                if (v == 0) return true;
            }
        }
    }
    return false;
}

bool poly_less(const IntPoly& a, const IntPoly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t k = a.size(); k-- > 0;)
        if (a[k] != b[k]) return a[k] < b[k];
    return false;
}

template <unsigned D>
MpComplex<D> value_at(const AlgebraicNumber& a, MpReal<D>* radius = nullptr) {
    auto rs = roots_or_escalate<D>(a.minpoly);
    if (radius) *radius = rs.radius.at(a.root_index);
    return rs.z.at(a.root_index);
}

// The unique (factor, root) within the error disk of the target.
template <unsigned D>
AlgebraicNumber select_root(const std::vector<IntPoly>& factors, const MpComplex<D>& target,
                            const MpReal<D>& target_err, unsigned bits) {
    std::optional<AlgebraicNumber> hit;
    for (const auto& g : factors) {
        auto rs = roots_or_escalate<D>(g);
        for (std::size_t j = 0; j < rs.z.size(); ++j) {
            if (abs(rs.z[j] - target) > rs.radius[j] + target_err) continue;
            if (hit) throw NeedPrecision{};
            AlgebraicNumber a;
            a.minpoly = g;
            a.root_index = static_cast<unsigned>(j);
            a.precision_bits = bits;
            hit = a;
        }
    }
    if (!hit) throw NeedPrecision{};
    return *hit;
}

// Minimal polynomial of the element whose value is target, given a polynomial
// (characteristic polynomial of a matrix) that it annihilates.
template <class Target>
AlgebraicNumber identify(const RatPoly& annihilator, unsigned bits, Target&& target) {
    IntPoly f = squarefree_part(primitive_normalized(annihilator));
    auto factors = factor_over_z(f);
    return escalate(start_tier(f, bits), "root identification", [&](auto dc) {
        constexpr unsigned D = decltype(dc)::value;
        MpReal<D> err;
        MpComplex<D> t = target(err);
        return select_root<D>(factors, t, err + eps_of<D>() * 1024 * (1 + abs(t)), bits);
    });
}

template <unsigned D>
MpReal<D> log_plus(const MpReal<D>& x) {
    return x > 1 ? log(x) : MpReal<D>(0);
}

HeightValue finish(double value, double err) {
    return {std::max(0.0, value), err + 4e-16 * std::max(1.0, std::abs(value))};
}

}  // namespace

// ---------------------------------------------------------------- AlgebraicNumber

AlgebraicNumber AlgebraicNumber::from_minpoly(const IntPoly& f, unsigned root_index, unsigned precision_bits) {
    AlgebraicNumber a;
    a.minpoly = primitive_normalized(f);
    a.root_index = root_index;
    a.precision_bits = precision_bits;
    const std::size_t d = a.degree();
    if (d == 0) throw Error(ErrorKind::InvalidArgument, "minimal polynomial must be nonconstant");
    if (root_index >= d) throw Error(ErrorKind::InvalidArgument, "root index " + std::to_string(root_index) +
                                                                     " out of range for degree " + std::to_string(d));
    tier_for_bits(precision_bits);
    if (d <= 6) {
        if (zpdehn::degree(squarefree_part(a.minpoly)) != d || factor_over_z(a.minpoly).size() != 1)
            throw Error(ErrorKind::HypothesisViolated, poly_to_string(a.minpoly) + " is reducible over Q");
    } else {
        a.irreducibility_trusted = true;
    }
    return a;
}

AlgebraicNumber AlgebraicNumber::rational(const Rat& q, unsigned precision_bits) {
    AlgebraicNumber a;
    a.minpoly = primitive_normalized(IntPoly{-q.get_num(), q.get_den()});
    a.precision_bits = precision_bits;
    return a;
}

Rat AlgebraicNumber::rational_value() const {
    if (!is_rational()) throw Error(ErrorKind::InvalidArgument, "not a rational number");
    Rat q(-minpoly[0], minpoly[1]);
    q.canonicalize();
    return q;
}

std::complex<double> AlgebraicNumber::approx() const {
    if (is_rational()) return {rational_value().get_d(), 0.0};
    return escalate(tier_for_bits(precision_bits), "root value", [&](auto dc) {
        constexpr unsigned D = decltype(dc)::value;
        return to_cd(value_at<D>(*this));
    });
}

std::string AlgebraicNumber::to_string() const {
    if (is_rational()) return rational_value().get_str();
    std::ostringstream os;
    os << "root " << root_index << " of " << poly_to_string(minpoly);
    return os.str();
}

bool AlgebraicNumber::operator<(const AlgebraicNumber& o) const {
    if (poly_less(minpoly, o.minpoly)) return true;
    if (poly_less(o.minpoly, minpoly)) return false;
    return root_index < o.root_index;
}

std::string HeightValue::to_string() const {
    std::ostringstream os;
    os.precision(15);
    os << value << " +/- " << std::scientific << std::setprecision(2) << error_bound;
    return os.str();
}

std::vector<std::complex<double>> conjugates(const AlgebraicNumber& a) {
    return escalate(tier_for_bits(a.precision_bits), "conjugates", [&](auto dc) {
        constexpr unsigned D = decltype(dc)::value;
        auto rs = roots_or_escalate<D>(a.minpoly);
        std::vector<std::complex<double>> out;
        for (const auto& z : rs.z) out.push_back(to_cd(z));
        return out;
    });
}

// ---------------------------------------------------------------- heights

HeightValue weil_height(const AlgebraicNumber& a) {
    const std::size_t d = a.degree();
    if (d == 0) throw Error(ErrorKind::InvalidArgument, "minimal polynomial must be nonconstant");
    if (d == 1) {
        BigInt m = std::max(abs(a.minpoly[0]), abs(a.minpoly[1]));
        return finish(static_cast<double>(log(to_mp<50>(m))), 0);
    }
    if (is_cyclotomic(a.minpoly)) return {0, 0};
    return escalate(tier_for_bits(a.precision_bits), "weil_height", [&](auto dc) {
        constexpr unsigned D = decltype(dc)::value;
        using R = MpReal<D>;
        auto rs = roots_or_escalate<D>(a.minpoly);
        R sum = log(abs(to_mp<D>(a.minpoly.back()))), err = 0;
        for (std::size_t i = 0; i < d; ++i) {
            R m = abs(rs.z[i]);
            R lo = log_plus<D>(m - rs.radius[i]), hi = log_plus<D>(m + rs.radius[i]);
            sum += (lo + hi) / 2;
            err += (hi - lo) / 2;
        }
        R n(static_cast<long>(d));
        err += eps_of<D>() * 64 * n * (1 + abs(sum));
        return finish(static_cast<double>(sum / n), static_cast<double>(err / n));
    });
}

std::vector<IntPoly> factor_over_z(const IntPoly& f) {
    IntPoly g = primitive_normalized(f);
    std::vector<IntPoly> out;
    if (degree(g) == 0) return out;
    IntPoly sf = squarefree_part(g);
    if (degree(sf) > 16) throw Error(ErrorKind::BudgetExceeded, "factorization above degree 16");
    if (degree(sf) == 1) {
        out.push_back(sf);
    } else {
        out = escalate(start_tier(sf, 0), "factorization", [&](auto dc) {
            constexpr unsigned D = decltype(dc)::value;
            return factor_squarefree_at<D>(sf);
        });
    }
    std::sort(out.begin(), out.end(), poly_less);
    return out;
}

// ---------------------------------------------------------------- arithmetic

AlgebraicNumber negate(const AlgebraicNumber& a) {
    if (a.is_rational()) return AlgebraicNumber::rational(-a.rational_value(), a.precision_bits);
    RatMatrix c = companion(a.minpoly);
    for (auto& row : c)
        for (auto& x : row) x = -x;
    return identify(charpoly(c), a.precision_bits, [&]<unsigned D>(MpReal<D>& err) {
        MpComplex<D> z = value_at<D>(a, &err);
        return -z;
    });
}

AlgebraicNumber inverse(const AlgebraicNumber& a) {
    if (a.minpoly.size() >= 1 && a.minpoly[0] == 0)
        throw Error(ErrorKind::InvalidArgument, "zero has no inverse");
    if (a.is_rational()) return AlgebraicNumber::rational(1 / a.rational_value(), a.precision_bits);
    return identify(to_rat_poly(reversed(a.minpoly)), a.precision_bits, [&]<unsigned D>(MpReal<D>& err) {
        MpReal<D> r;
        MpComplex<D> z = value_at<D>(a, &r);
        MpReal<D> m = abs(z);
        err = r / (m * (m - r));
        return MpComplex<D>(1) / z;
    });
}

AlgebraicNumber power(const AlgebraicNumber& a, long n) {
    if (n == 0) return AlgebraicNumber::rational(1, a.precision_bits);
    if (n < 0) return power(inverse(a), -n);
    if (a.is_rational()) {
        Rat q = a.rational_value(), r = 1;
        for (long k = 0; k < n; ++k) r *= q;
        return AlgebraicNumber::rational(r, a.precision_bits);
    }
    RatMatrix c = companion(a.minpoly), m = c;
    for (long k = 1; k < n; ++k) m = mat_mul(m, c);
    return identify(charpoly(m), a.precision_bits, [&]<unsigned D>(MpReal<D>& err) {
        MpReal<D> r;
        MpComplex<D> z = value_at<D>(a, &r), p(1);
        for (long k = 0; k < n; ++k) p *= z;
        err = r * n * pow(abs(z) + r, n - 1);
        return p;
    });
}

AlgebraicNumber product(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    unsigned bits = std::max(a.precision_bits, b.precision_bits);
    if (a.is_rational() && b.is_rational()) return AlgebraicNumber::rational(a.rational_value() * b.rational_value(), bits);
    return identify(charpoly(kronecker(companion(a.minpoly), companion(b.minpoly))), bits,
                    [&]<unsigned D>(MpReal<D>& err) {
                        MpReal<D> ra, rb;
                        MpComplex<D> za = value_at<D>(a, &ra), zb = value_at<D>(b, &rb);
                        err = ra * (abs(zb) + rb) + rb * abs(za);
                        return za * zb;
                    });
}

AlgebraicNumber sum(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    unsigned bits = std::max(a.precision_bits, b.precision_bits);
    if (a.is_rational() && b.is_rational()) return AlgebraicNumber::rational(a.rational_value() + b.rational_value(), bits);
    RatMatrix ca = companion(a.minpoly), cb = companion(b.minpoly);
    RatMatrix ia(ca.size(), RatVec(ca.size())), ib(cb.size(), RatVec(cb.size()));
    for (std::size_t i = 0; i < ca.size(); ++i) ia[i][i] = 1;
    for (std::size_t i = 0; i < cb.size(); ++i) ib[i][i] = 1;
    RatMatrix m = kronecker(ca, ib), t = kronecker(ia, cb);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) m[i][j] += t[i][j];
    return identify(charpoly(m), bits, [&]<unsigned D>(MpReal<D>& err) {
        MpReal<D> ra, rb;
        MpComplex<D> za = value_at<D>(a, &ra), zb = value_at<D>(b, &rb);
        err = ra + rb;
        return za + zb;
    });
}

// ---------------------------------------------------------------- fields and tuples

namespace {

void check_element(const NumberField& k, const FieldElement& e) {
    if (e.coords.size() != k.degree())
        throw Error(ErrorKind::FieldMismatch, "element has " + std::to_string(e.coords.size()) +
                                                  " coordinates in a field of degree " + std::to_string(k.degree()));
}

// Value of sum c_k z^k and a bound on its change over the disk of radius r.
template <unsigned D>
MpComplex<D> eval_element(const FieldElement& e, const MpComplex<D>& z, const MpReal<D>& r, MpReal<D>& err) {
    using R = MpReal<D>;
    MpComplex<D> v(0), pw(1);
    R az = abs(z);
    err = 0;
    for (std::size_t k = 0; k < e.coords.size(); ++k) {
        R c = R(e.coords[k].get_num().get_str()) / R(e.coords[k].get_den().get_str());
        v += pw * c;
        if (k > 0) err += abs(c) * R(static_cast<long>(k)) * pow(az + r, static_cast<long>(k - 1)) * r;
        pw *= z;
    }
    err += eps_of<D>() * 64 * (1 + abs(v));
    return v;
}

}  // namespace

AlgebraicNumber to_algebraic(const NumberField& k, const FieldElement& e) {
    check_element(k, e);
    RatMatrix c = companion(k.generator.minpoly), pw = c, m(k.degree(), RatVec(k.degree()));
    for (std::size_t i = 0; i < k.degree(); ++i) m[i][i] = e.coords[0];
    for (std::size_t j = 1; j < e.coords.size(); ++j) {
        for (std::size_t r = 0; r < m.size(); ++r)
            for (std::size_t s = 0; s < m.size(); ++s) m[r][s] += e.coords[j] * pw[r][s];
        pw = mat_mul(pw, c);
    }
    return identify(charpoly(m), k.generator.precision_bits, [&]<unsigned D>(MpReal<D>& err) {
        MpReal<D> r;
        MpComplex<D> z = value_at<D>(k.generator, &r);
        return eval_element<D>(e, z, r, err);
    });
}

HeightValue tuple_height(const std::vector<Rat>& xs) {
    if (xs.empty()) throw Error(ErrorKind::InvalidArgument, "empty tuple");
    BigInt den = 1;
    Rat big = 1;
    for (const auto& x : xs) {
        den = lcm(den, BigInt(x.get_den()));
        big = std::max(big, Rat(abs(x)));
    }
    Rat t = big * den;
    using R = MpReal<50>;
    R v = log(R(t.get_num().get_str()) / R(t.get_den().get_str()));
    return finish(static_cast<double>(v), 0);
}

HeightValue tuple_height(const NumberField& k, const std::vector<FieldElement>& xs) {
    if (xs.empty()) throw Error(ErrorKind::InvalidArgument, "empty tuple");
    for (const auto& e : xs) {
        check_element(k, e);
        for (const auto& c : e.coords)
            if (c.get_den() != 1)
                throw Error(ErrorKind::HypothesisViolated, "tuple heights need coordinates in Z[theta]");
    }
    if (!k.generator.is_algebraic_integer())
        throw Error(ErrorKind::HypothesisViolated, "tuple heights need an algebraic integer generator");
    const std::size_t d = k.degree();
    return escalate(tier_for_bits(k.generator.precision_bits), "tuple_height", [&](auto dc) {
        constexpr unsigned D = decltype(dc)::value;
        using R = MpReal<D>;
        auto rs = roots_or_escalate<D>(k.generator.minpoly);
        R total = 0, err = 0;
        for (std::size_t j = 0; j < d; ++j) {
            R lo = 1, hi = 1;
            for (const auto& e : xs) {
                R ee;
                R m = abs(eval_element<D>(e, rs.z[j], rs.radius[j], ee));
                lo = std::max(lo, m - ee);
                hi = std::max(hi, m + ee);
            }
            total += (log(lo) + log(hi)) / 2;
            err += (log(hi) - log(lo)) / 2;
        }
        R n(static_cast<long>(d));
        return finish(static_cast<double>(total / n), static_cast<double>(err / n));
    });
}

HeightValue tuple_height(const std::vector<AlgebraicNumber>& xs, std::size_t field_degree) {
    if (xs.empty()) throw Error(ErrorKind::InvalidArgument, "empty tuple");
    for (const auto& x : xs)
        if (field_degree == 0 || field_degree % x.degree() != 0)
            throw Error(ErrorKind::FieldMismatch, x.to_string() + " has degree " + std::to_string(x.degree()) +
                                                      ", not dividing the field degree " + std::to_string(field_degree));
    std::vector<Rat> rats;
    std::vector<AlgebraicNumber> irr;
    for (const auto& x : xs) {
        if (x.is_rational())
            rats.push_back(x.rational_value());
        else if (std::find(irr.begin(), irr.end(), x) == irr.end())
            irr.push_back(x);
    }
    if (irr.empty()) return tuple_height(rats);
    if (irr.size() > 1)
        throw Error(ErrorKind::FieldMismatch, "numbers need one field presentation; use the number-field form");
    if (rats.empty()) return weil_height(irr[0]);
    NumberField k{irr[0]};
    std::vector<FieldElement> elems;
    FieldElement theta{RatVec(k.degree())};
    theta.coords.at(1) = 1;
    elems.push_back(theta);
    for (const auto& q : rats) {
        FieldElement e{RatVec(k.degree())};
        e.coords[0] = q;
        elems.push_back(e);
    }
    return tuple_height(k, elems);
}

// ---------------------------------------------------------------- Northcott

std::vector<AlgebraicNumber> northcott_enumerate(double h_max, unsigned d_max) {
    if (!(h_max >= 0)) throw Error(ErrorKind::InvalidArgument, "height bound must be non-negative");
    if (d_max == 0) throw Error(ErrorKind::InvalidArgument, "degree bound must be positive");
    if (d_max > 3 || h_max > std::log(3.0) + 1e-12)
        throw Error(ErrorKind::BudgetExceeded, "Northcott enumeration is limited to degree 3 and height log 3");
    std::vector<IntPoly> found;
    for (unsigned d = 1; d <= d_max; ++d) {
        const double m_max = std::exp(d * h_max) * (1 + kNorthcottSlack);
        std::vector<long> bound(d + 1);
        double binom = 1;
        for (unsigned k = 0; k <= d; ++k) {
            bound[k] = static_cast<long>(std::floor(binom * m_max));
            binom = binom * (d - k) / (k + 1);
        }
        // lead in [1, bound[d]], the others in [-bound[k], bound[k]].
        std::vector<std::size_t> radix(d + 1);
        std::size_t total = 1;
        for (unsigned k = 0; k <= d; ++k) {
            radix[k] = k == d ? static_cast<std::size_t>(bound[k]) : static_cast<std::size_t>(2 * bound[k] + 1);
            total *= radix[k];
        }
        if (total > 60000000) throw Error(ErrorKind::BudgetExceeded, "Northcott box too large");
        const double cut = d * (h_max + kNorthcottSlack);
        auto chunks = parallel_chunks<std::vector<IntPoly>>(total, [&](std::size_t, std::size_t b, std::size_t e) {
            std::vector<IntPoly> keep;
            IntPoly f(d + 1);
            std::vector<long> c(d + 1);
            for (std::size_t idx = b; idx < e; ++idx) {
                std::size_t rest = idx;
                for (unsigned k = 0; k <= d; ++k) {
                    long v = static_cast<long>(rest % radix[k]);
                    rest /= radix[k];
                    c[k] = k == d ? v + 1 : v - bound[k];
                }
                if (d > 1 && c[0] == 0) continue;
                long g = 0;
                for (long v : c) g = std::gcd(g, v);
                if (g != 1) continue;
                for (unsigned k = 0; k <= d; ++k) f[k] = c[k];
                auto bounds = detail::log_mahler_bounds_double(f);
                if (bounds && bounds->first > cut) continue;
                if (d > 1 && has_rational_root(c)) continue;
                if (bounds && bounds->second <= cut) {
                    keep.push_back(f);
                    continue;
                }
                AlgebraicNumber a;
                a.minpoly = f;
                a.precision_bits = 128;
                HeightValue h = weil_height(a);
                if (h.error_bound > kNorthcottSlack / 10)
                    throw Error(ErrorKind::PrecisionExhausted, "height of " + poly_to_string(f) + " not resolved");
                if (h.value <= h_max + kNorthcottSlack) keep.push_back(f);
            }
            return keep;
        });
        for (auto& ch : chunks) found.insert(found.end(), ch.begin(), ch.end());
    }
    std::sort(found.begin(), found.end(), poly_less);
    std::vector<AlgebraicNumber> out;
    for (const auto& f : found)
        for (std::size_t j = 0; j < degree(f); ++j) {
            AlgebraicNumber a;
            a.minpoly = f;
            a.root_index = static_cast<unsigned>(j);
            out.push_back(a);
        }
    return out;
}

// ---------------------------------------------------------------- BMZ report

std::string BmzReport::to_string() const {
    std::ostringstream os;
    os.precision(12);
    os << "heights:";
    for (const auto& h : heights) os << " " << h.value;
    os << "\nproduct: " << product << " +/- " << product_error << "\n";
    os << "field degree: " << field_degree << (field_degree_is_bound ? " (upper bound)" : "") << "\n";
    if (degenerate) os << "degenerate: zero height (0 or a root of unity) among the inputs\n";
    return os.str();
}

BmzReport bmz_product_report(const std::vector<AlgebraicNumber>& xs, std::optional<std::size_t> field_degree) {
    BmzReport r;
    r.product = xs.empty() ? 0 : 1;
    for (const auto& x : xs) r.heights.push_back(weil_height(x));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double others = 1;
        for (std::size_t j = 0; j < xs.size(); ++j)
            if (j != i) others *= r.heights[j].value + r.heights[j].error_bound;
        r.product *= r.heights[i].value;
        r.product_error += r.heights[i].error_bound * others;
        if (r.heights[i].value == 0 && r.heights[i].error_bound == 0) r.degenerate = true;
    }
    if (field_degree) {
        r.field_degree = *field_degree;
    } else {
        std::vector<IntPoly> seen;
        for (const auto& x : xs)
            if (x.degree() > 1 && std::find(seen.begin(), seen.end(), x.minpoly) == seen.end()) {
                seen.push_back(x.minpoly);
                r.field_degree *= x.degree();
            }
        r.field_degree_is_bound = seen.size() > 1;
    }
    return r;
}

}  // namespace zpdehn
