#include "zpdehn/nzdehn.hpp"

#include "zpdehn/errors.hpp"
#include "zpdehn/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace zpdehn {

namespace {

constexpr double kPi = 3.14159265358979323846;

template <class C>
C lift(const Cplx& z) {
    if constexpr (std::is_same_v<C, Cplx>) return z;
    else return from_cd<C>(z);
}

template <class C>
C two_pi_i(Branch b) {
    using R = typename C::value_type;
    R pi;
    if constexpr (std::is_same_v<C, Cplx>) pi = kPi;
    else pi = boost::math::constants::pi<R>();
    R im = b == Branch::Plus ? R(2) * pi : R(-2) * pi;
    return C(R(0), im);
}

template <class C>
std::vector<std::vector<C>> powers(const std::vector<C>& u, unsigned deg) {
    std::vector<std::vector<C>> pw(u.size(), std::vector<C>(deg + 1));
    for (std::size_t i = 0; i < u.size(); ++i) {
        pw[i][0] = C(1);
        for (unsigned k = 1; k <= deg; ++k) pw[i][k] = pw[i][k - 1] * u[i];
    }
    return pw;
}

// Product of u_k^(alpha_k - drop_k).
template <class C>
C monomial(const std::vector<std::vector<C>>& pw, const MultiIndex& a, std::size_t i = SIZE_MAX,
           std::size_t j = SIZE_MAX) {
    C m(1);
    for (std::size_t k = 0; k < a.size(); ++k) {
        unsigned e = a[k] - (k == i ? 1u : 0u) - (k == j ? 1u : 0u);
        if (e) m *= pw[k][e];
    }
    return m;
}

template <class C>
C phi_t(const NZPotential& pot, const std::vector<C>& u) {
    auto pw = powers(u, pot.trunc_degree);
    C s(0);
    for (std::size_t i = 0; i < pot.n_cusps; ++i) s += lift<C>(pot.shapes[i]) * pw[i][2];
    for (const auto& [a, m] : pot.coefficients) s += lift<C>(m) * monomial(pw, a);
    return s;
}

template <class C>
std::vector<C> v_t(const NZPotential& pot, const std::vector<C>& u) {
    using R = typename C::value_type;
    auto pw = powers(u, pot.trunc_degree);
    std::vector<C> v(pot.n_cusps);
    for (std::size_t i = 0; i < pot.n_cusps; ++i) v[i] = lift<C>(pot.shapes[i]) * u[i];
    for (const auto& [a, m] : pot.coefficients) {
        C cm = lift<C>(m);
        for (std::size_t i = 0; i < pot.n_cusps; ++i)
            if (a[i]) v[i] += cm * monomial(pw, a, i) * R(a[i] / 2);
    }
    return v;
}

template <class C>
std::vector<std::vector<C>> jac_t(const NZPotential& pot, const std::vector<C>& u) {
    using R = typename C::value_type;
    const std::size_t n = pot.n_cusps;
    auto pw = powers(u, pot.trunc_degree);
    std::vector<std::vector<C>> J(n, std::vector<C>(n, C(0)));
    for (std::size_t i = 0; i < n; ++i) J[i][i] = lift<C>(pot.shapes[i]);
    for (const auto& [a, m] : pot.coefficients) {
        C cm = lift<C>(m);
        for (std::size_t i = 0; i < n; ++i) {
            if (!a[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                unsigned f = i == j ? a[i] * (a[i] - 1) : a[i] * a[j];
                if (f) J[i][j] += cm * monomial(pw, a, i, j) * (R(f) / R(2));
            }
        }
    }
    return J;
}

// Solves A x = b by Gaussian elimination with partial pivoting.
template <class C>
std::vector<C> linear_solve(std::vector<std::vector<C>> A, std::vector<C> b) {
    using std::abs;
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (abs(A[i][k]) > abs(A[p][k])) p = i;
        if (abs(A[p][k]) == 0) throw Error(ErrorKind::NewtonDiverged, "singular Newton Jacobian");
        std::swap(A[p], A[k]);
        std::swap(b[p], b[k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            C f = A[i][k] / A[k][k];
            for (std::size_t j = k; j < n; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<C> x(n);
    for (std::size_t k = n; k-- > 0;) {
        C s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= A[k][j] * x[j];
        x[k] = s / A[k][k];
    }
    return x;
}

template <class C>
std::vector<C> filling_residual(const NZPotential& pot, const FillingCoefficient& fc, const std::vector<C>& u,
                                const C& rhs) {
    using R = typename C::value_type;
    auto v = v_t(pot, u);
    std::vector<C> F(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) F[i] = R(fc[i].p) * u[i] + R(fc[i].q) * v[i] - rhs;
    return F;
}

template <class C>
typename C::value_type max_abs(const std::vector<C>& x) {
    using std::abs;
    typename C::value_type m(0);
    for (const auto& z : x) m = std::max<typename C::value_type>(m, abs(z));
    return m;
}

// Damped Newton on p_i u_i + q_i v_i(u) = rhs; returns iterations used.
template <class C>
unsigned newton(const NZPotential& pot, const FillingCoefficient& fc, std::vector<C>& u, const C& rhs,
                const typename C::value_type& tol, unsigned max_iter, typename C::value_type& residual) {
    using R = typename C::value_type;
    const std::size_t n = u.size();
    auto F = filling_residual(pot, fc, u, rhs);
    residual = max_abs(F);
    for (unsigned it = 0;; ++it) {
        if (residual < tol) return it;
        if (it == max_iter)
            throw Error(ErrorKind::NewtonDiverged, "no convergence after " + std::to_string(max_iter) + " iterations");
        auto J = jac_t(pot, u);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) J[i][j] *= R(fc[i].q);
            J[i][i] += R(fc[i].p);
        }
        std::vector<C> rhs_step(n);
        for (std::size_t i = 0; i < n; ++i) rhs_step[i] = -F[i];
        auto d = linear_solve(J, rhs_step);
        R lambda(1);
        bool accepted = false;
        for (int h = 0; h < 40; ++h, lambda /= 2) {
            std::vector<C> trial(n);
            for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + d[i] * lambda;
            auto Ft = filling_residual(pot, fc, trial, rhs);
            R rt = max_abs(Ft);
            if (rt < residual || rt < tol) {
                u = trial, F = Ft, residual = rt, accepted = true;
                break;
            }
        }
        if (!accepted) throw Error(ErrorKind::NewtonDiverged, "line search failed to decrease the residual");
    }
}

void check_filling(const NZPotential& pot, const FillingCoefficient& fc) {
    if (fc.size() != pot.n_cusps)
        throw Error(ErrorKind::InvalidArgument, "filling has " + std::to_string(fc.size()) + " cusps, potential has " +
                                                    std::to_string(pot.n_cusps));
    for (const auto& f : fc) {
        if (std::gcd(f.p, f.q) != 1)
            throw Error(ErrorKind::InvalidArgument, "slope " + f.to_string() + " is not coprime");
        if (-f.q * f.r + f.p * f.s != 1)
            throw Error(ErrorKind::InvalidArgument, "(r, s) does not satisfy -q r + p s = 1 for " + f.to_string());
    }
}

void check_trust(const NZPotential& pot, const CVec& u, const char* what) {
    if (pot.is_quadratic()) return;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (std::abs(u[i]) > pot.trust_radius) {
            std::ostringstream os;
            os << what << " |u_" << i + 1 << "| = " << std::abs(u[i]) << " exceeds trust radius " << pot.trust_radius;
            throw Error(ErrorKind::OutOfTrustRadius, os.str());
        }
}

CVec initial_guess(const NZPotential& pot, const FillingCoefficient& fc, Branch b) {
    CVec u(pot.n_cusps);
    for (std::size_t i = 0; i < pot.n_cusps; ++i)
        u[i] = two_pi_i<Cplx>(b) / (double(fc[i].p) + double(fc[i].q) * pot.shapes[i]);
    return u;
}

long ext_gcd(long a, long b, long& x, long& y) {
    if (b == 0) {
        x = a >= 0 ? 1 : -1;
        y = 0;
        return std::abs(a);
    }
    long x1, y1;
    long g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

bool is_even_index(const MultiIndex& a) {
    return std::all_of(a.begin(), a.end(), [](unsigned e) { return e % 2 == 0; });
}

unsigned degree(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0u); }

void even_indices(std::size_t n, unsigned lo, unsigned hi, MultiIndex& cur, std::size_t pos, unsigned used,
                  std::vector<MultiIndex>& out) {
    if (pos == n) {
        if (used >= lo) out.push_back(cur);
        return;
    }
    for (unsigned e = 0; used + e <= hi; e += 2) {
        cur[pos] = e;
        even_indices(n, lo, hi, cur, pos + 1, used + e, out);
    }
}

Cplx cubic_root(Cplx start, Cplx c1, Cplx c0) {
    // Newton for x^3 + c1 x + c0.
    Cplx x = start;
    for (int k = 0; k < 100; ++k) {
        Cplx f = x * x * x + c1 * x + c0, df = 3.0 * x * x + c1;
        Cplx nx = x - f / df;
        if (std::abs(nx - x) < 1e-17) return nx;
        x = nx;
    }
    return x;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double binom(unsigned n, unsigned k) {
    double r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

void NZPotential::validate() const {
    if (n_cusps == 0) throw Error(ErrorKind::InvalidArgument, "potential needs at least one cusp");
    if (shapes.size() != n_cusps) throw Error(ErrorKind::InvalidArgument, "one shape per cusp required");
    for (std::size_t i = 0; i < n_cusps; ++i)
        if (shapes[i].imag() == 0) throw Error(ErrorKind::InvalidArgument, "shape " + std::to_string(i + 1) + " is real");
    if (trunc_degree < 4 || trunc_degree % 2)
        throw Error(ErrorKind::InvalidArgument, "truncation degree must be even and at least 4");
    if (!(trust_radius > 0)) throw Error(ErrorKind::InvalidArgument, "trust radius must be positive");
    for (const auto& [a, m] : coefficients) {
        if (a.size() != n_cusps) throw Error(ErrorKind::InvalidArgument, "multi-index length differs from cusp count");
        if (!is_even_index(a)) throw Error(ErrorKind::InvalidArgument, "odd exponent in a coefficient index");
        unsigned d = degree(a);
        if (d < 4 || d > trunc_degree)
            throw Error(ErrorKind::InvalidArgument, "coefficient of degree " + std::to_string(d) + " outside [4, truncation]");
    }
}

bool CuspFilling::operator<(const CuspFilling& o) const {
    return std::tie(p, q, r, s) < std::tie(o.p, o.q, o.r, o.s);
}

std::string CuspFilling::to_string() const { return std::to_string(p) + "/" + std::to_string(q); }

CuspFilling make_filling(long p, long q) {
    if (std::gcd(p, q) != 1)
        throw Error(ErrorKind::InvalidArgument, "slope " + std::to_string(p) + "/" + std::to_string(q) + " is not coprime");
    // p s + (-q) r = 1.
    long s, r;
    long g = ext_gcd(p, -q, s, r);
    (void)g;
    if (p * s - q * r != 1) s = -s, r = -r;
    CuspFilling f{p, q, r, s};
    if (p != 0) {
        long ap = std::abs(p);
        long k = (((r % ap) + ap) % ap - r) / p;  // r + k p in [0, |p|)
        f = shifted(f, k);
    }
    return f;
}

CuspFilling shifted(const CuspFilling& f, long k) { return {f.p, f.q, f.r + k * f.p, f.s + k * f.q}; }

bool same_slope(const CuspFilling& a, const CuspFilling& b) { return a.p * b.q == a.q * b.p; }

Cplx phi(const NZPotential& pot, const CVec& u) { return phi_t(pot, u); }

CVec v_of_u(const NZPotential& pot, const CVec& u) {
    if (u.size() != pot.n_cusps) throw Error(ErrorKind::InvalidArgument, "u has the wrong length");
    check_trust(pot, u, "v_of_u:");
    return v_t(pot, u);
}

std::vector<CVec> dv_du(const NZPotential& pot, const CVec& u) {
    if (u.size() != pot.n_cusps) throw Error(ErrorKind::InvalidArgument, "u has the wrong length");
    return jac_t(pot, u);
}

double tail_bound(const NZPotential& pot, double radius) {
    if (pot.is_quadratic()) return 0;
    std::map<unsigned, double> shell;
    for (const auto& [a, m] : pot.coefficients) {
        double& c = shell[degree(a)];
        c = std::max(c, std::abs(m));
    }
    const unsigned K = shell.rbegin()->first;
    const double cK = shell.rbegin()->second;
    double rho = 0.1;  // a single stored shell gives no decay information
    if (shell.size() > 1) {
        auto prev = std::next(shell.rbegin());
        if (prev->first == K - 2 && prev->second > 0) rho = cK / prev->second;
    }
    const unsigned n = static_cast<unsigned>(pot.n_cusps);
    double sum = 0, coef = cK;
    for (unsigned j = 1; j <= 400; ++j) {
        coef *= rho;
        unsigned d = K + 2 * j;
        double term = 0.5 * d * binom(d / 2 + n - 1, n - 1) * coef * std::pow(radius, d - 1);
        if (!std::isfinite(term)) return INFINITY;
        sum += term;
        if (term < 1e-18 * sum) return sum;
    }
    return INFINITY;  // no geometric decay at this radius
}

FillingResult solve_filling(const NZPotential& pot, const FillingCoefficient& coeff, const SolveOptions& opt) {
    check_filling(pot, coeff);
    CVec u = initial_guess(pot, coeff, opt.branch);
    check_trust(pot, u, "initial guess");
    FillingResult res;
    double residual = 0;
    res.newton_iters = newton(pot, coeff, u, two_pi_i<Cplx>(opt.branch), opt.tol, opt.max_iter, residual);
    check_trust(pot, u, "solution");
    res.u = u;
    res.v = v_t(pot, u);
    res.residual = residual;
    for (std::size_t i = 0; i < pot.n_cusps; ++i) {
        Cplx raw = std::exp(double(coeff[i].r) * res.u[i] + double(coeff[i].s) * res.v[i]);
        res.t_raw.push_back(raw);
        bool inv = std::abs(raw) < 1;
        res.inverted.push_back(inv);
        res.t.push_back(inv ? 1.0 / raw : raw);
    }
    if (!pot.is_quadratic()) {
        double rad = 0;
        for (const auto& z : u) rad = std::max(rad, std::abs(z));
        double tb = tail_bound(pot, rad);
        if (tb > 1e-6) {
            std::ostringstream os;
            os << "series tail estimate " << tb << " at |u| = " << rad;
            res.warnings.push_back(os.str());
        }
    }
    return res;
}

HighFillingResult solve_filling_high(const NZPotential& pot, const FillingCoefficient& coeff, const SolveOptions& opt) {
    FillingResult lo = solve_filling(pot, coeff, opt);
    std::vector<HighComplex> u;
    for (const auto& z : lo.u) u.push_back(from_cd<HighComplex>(z));
    HighFillingResult res;
    HighReal tol("1e-140");
    res.newton_iters = newton(pot, coeff, u, two_pi_i<HighComplex>(opt.branch), tol, opt.max_iter, res.residual);
    res.u = u;
    res.v = v_t(pot, u);
    for (std::size_t i = 0; i < pot.n_cusps; ++i) {
        HighComplex raw = exp(res.u[i] * HighReal(coeff[i].r) + res.v[i] * HighReal(coeff[i].s));
        res.t.push_back(abs(raw) < 1 ? HighComplex(1) / raw : raw);
    }
    return res;
}

CVec quadratic_holonomies(const NZPotential& pot, const FillingCoefficient& coeff, Branch branch) {
    check_filling(pot, coeff);
    CVec t;
    for (std::size_t i = 0; i < pot.n_cusps; ++i) {
        const auto& f = coeff[i];
        Cplx tau = pot.shapes[i];
        Cplx z = std::exp(two_pi_i<Cplx>(branch) * (double(f.r) + double(f.s) * tau) / (double(f.p) + double(f.q) * tau));
        t.push_back(std::abs(z) < 1 ? 1.0 / z : z);
    }
    return t;
}

CVec core_holonomy_set(const FillingResult& result) {
    CVec s = result.t;
    std::sort(s.begin(), s.end(), [](const Cplx& a, const Cplx& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return s;
}

double holonomy_set_distance(const CVec& a, const CVec& b) {
    if (a.size() != b.size()) return INFINITY;
    std::vector<std::size_t> perm(b.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = INFINITY;
    do {
        double d = 0;
        for (std::size_t i = 0; i < a.size() && d < best; ++i) d = std::max(d, std::abs(a[i] - b[perm[i]]));
        best = std::min(best, d);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

bool holonomy_sets_equal(const CVec& a, const CVec& b, double tol) { return holonomy_set_distance(a, b) <= tol; }

std::vector<CuspFilling> scan_slopes(int bound) {
    std::vector<CuspFilling> out;
    for (long s = (bound + 1) / 2; s <= bound; ++s)
        for (long p = -s; p <= s; ++p) {
            long aq = s - std::abs(p);
            for (long q : {aq, -aq}) {
                if (std::gcd(p, q) == 1) out.push_back(make_filling(p, q));
                if (aq == 0) break;
            }
        }
    std::sort(out.begin(), out.end());
    return out;
}

CollisionReport cosmetic_scan(const NZPotential& pot, int bound, double tol) {
    pot.validate();
    if (bound > 60) throw Error(ErrorKind::BudgetExceeded, "scan bound above 60");
    if (bound < 2) throw Error(ErrorKind::InvalidArgument, "scan bound must be at least 2");
    const auto slopes = scan_slopes(bound);
    const std::size_t n = pot.n_cusps;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= slopes.size();
        if (total > 4'000'000) throw Error(ErrorKind::BudgetExceeded, "more than 4e6 filling tuples");
    }
    if (!pot.is_quadratic())
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& f : slopes) {
                double r = 2 * kPi / std::abs(double(f.p) + double(f.q) * pot.shapes[i]);
                if (r > pot.trust_radius)
                    throw Error(ErrorKind::OutOfTrustRadius, "slope " + f.to_string() + " starts at |u| = " +
                                                                 std::to_string(r) + " beyond the trust radius");
            }

    auto tuple_of = [&](std::uint64_t idx) {
        FillingCoefficient fc(n);
        for (std::size_t i = n; i-- > 0;) {
            fc[i] = slopes[idx % slopes.size()];
            idx /= slopes.size();
        }
        return fc;
    };

    auto parts = parallel_chunks<std::vector<CVec>>(total, [&](std::size_t, std::size_t b, std::size_t e) {
        std::vector<CVec> sets;
        for (std::size_t idx = b; idx < e; ++idx) sets.push_back(core_holonomy_set(solve_filling(pot, tuple_of(idx))));
        return sets;
    });
    std::vector<CVec> sets;
    for (auto& p : parts)
        for (auto& s : p) sets.push_back(std::move(s));

    // Symmetric key: equal sets within tol have keys within n * tol.
    std::vector<double> key(total);
    for (std::size_t i = 0; i < total; ++i)
        for (const auto& z : sets[i]) key[i] += z.real();
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] != key[b] ? key[a] < key[b] : a < b; });

    CollisionReport rep;
    rep.bound = bound;
    rep.tol = tol;
    rep.fillings = total;
    std::vector<std::pair<std::size_t, std::size_t>> cand;
    for (std::size_t x = 0; x < total; ++x)
        for (std::size_t y = x + 1; y < total && key[order[y]] - key[order[x]] <= double(n) * tol; ++y)
            if (holonomy_sets_equal(sets[order[x]], sets[order[y]], tol))
                cand.emplace_back(std::min(order[x], order[y]), std::max(order[x], order[y]));
    std::sort(cand.begin(), cand.end());
    rep.candidates = cand.size();

    for (const auto& [ia, ib] : cand) {
        Collision c;
        c.a = tuple_of(ia);
        c.b = tuple_of(ib);
        c.trivial = true;
        for (std::size_t i = 0; i < n; ++i) c.trivial = c.trivial && same_slope(c.a[i], c.b[i]);
        c.distance = holonomy_set_distance(sets[ia], sets[ib]);
        if (c.trivial) {
            // t depends only on the slope: (p, q, r, s) -> -(p, q, r, s) maps u to -u.
            c.confirmed = true;
        } else {
            auto ha = solve_filling_high(pot, c.a), hb = solve_filling_high(pot, c.b);
            // Compare at high precision over all matchings.
            std::vector<std::size_t> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            HighReal best(1e300);
            do {
                HighReal d(0);
                for (std::size_t i = 0; i < n; ++i) d = std::max<HighReal>(d, abs(ha.t[i] - hb.t[perm[i]]));
                best = std::min(best, d);
            } while (std::next_permutation(perm.begin(), perm.end()));
            c.confirmed = best <= HighReal(tol);
            c.distance = static_cast<double>(best);
        }
        if (!c.confirmed) continue;
        (c.trivial ? rep.trivial : rep.nontrivial)++;
        rep.collisions.push_back(std::move(c));
    }
    return rep;
}

bool sgi_check(const NZPotential& pot) {
    if (pot.n_cusps != 2) throw Error(ErrorKind::InvalidArgument, "SGI check needs exactly two cusps");
    for (const auto& [a, m] : pot.coefficients)
        if (a[0] > 0 && a[1] > 0 && m != Cplx(0)) return false;
    return true;
}

bool difference_collapse_check(const NZPotential& pot) {
    if (pot.n_cusps != 2) throw Error(ErrorKind::InvalidArgument, "collapse check needs exactly two cusps");
    auto m = [&](unsigned i, unsigned j) {
        auto it = pot.coefficients.find(MultiIndex{i, j});
        return it == pot.coefficients.end() ? Cplx(0) : it->second;
    };
    for (unsigned k = 4; k <= pot.trunc_degree; k += 2)
        for (unsigned i = 0; i + 2 <= k; i += 2) {
            Cplx lhs = double((i + 2) * (i + 1)) * m(i + 2, k - i - 2);
            Cplx rhs = double((k - i) * (k - i - 1)) * m(i, k - i);
            double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
            if (std::abs(lhs - rhs) > 1e-12 * scale) return false;
        }
    return true;
}

CVec default_shapes(std::size_t n) {
    static const CVec builtin = {cubic_root({0.66, 0.56}, -1.0, 1.0), Cplx(0, std::cbrt(2.0)),
                                 cubic_root({0.88, 0.59}, -2.0, 2.0)};
    if (n > builtin.size())
        throw Error(ErrorKind::InvalidArgument, "built-in shapes cover at most 3 cusps; pass explicit shapes");
    return CVec(builtin.begin(), builtin.begin() + static_cast<long>(n));
}

NZPotential synth_potential(std::uint64_t seed, std::size_t n, unsigned trunc_degree, const ShapeSpec& spec) {
    NZPotential pot;
    pot.n_cusps = n;
    pot.trunc_degree = trunc_degree;
    pot.trust_radius = spec.trust_radius;
    pot.shapes = spec.shapes.empty() ? default_shapes(n) : spec.shapes;
    if (n == 0 || trunc_degree < 4 || trunc_degree % 2)
        throw Error(ErrorKind::InvalidArgument, "synthetic potential needs n >= 1 and even truncation >= 4");
    std::vector<MultiIndex> idx;
    MultiIndex cur(n, 0);
    even_indices(n, 4, trunc_degree, cur, 0, 0, idx);
    std::mt19937_64 rng(seed);
    for (const auto& a : idx) {
        // Draw for every index so the pure coefficients do not depend on the mixing flag.
        double radius = std::pow(0.1, (degree(a) - 2) / 2.0);
        double rr = radius * std::sqrt(uniform01(rng)), th = 2 * kPi * uniform01(rng);
        std::size_t support = std::count_if(a.begin(), a.end(), [](unsigned e) { return e > 0; });
        if (!spec.mixing && support > 1) continue;
        pot.coefficients[a] = std::polar(rr, th);
    }
    pot.validate();
    return pot;
}

namespace {

// Line numbers of top-level keys and of the elements of the top-level
// "shapes" and "coefficients" arrays; nlohmann::json keeps no positions.
struct Lines {
    std::map<std::string, int> key;
    std::vector<int> shapes, coefficients;
};

Lines scan_lines(const std::string& text) {
    Lines out;
    std::vector<char> stack;
    std::string current;
    int line = 1;
    auto record = [&] {
        if (stack.size() == 2 && stack[0] == '{' && stack[1] == '[') {
            if (current == "shapes") out.shapes.push_back(line);
            if (current == "coefficients") out.coefficients.push_back(line);
        }
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ':') continue;
        if (c == '"') {
            std::string s;
            for (++i; i < text.size() && text[i] != '"'; ++i) {
                if (text[i] == '\\' && i + 1 < text.size()) ++i;
                s += text[i];
            }
            std::size_t j = i + 1;
            while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '\n') ++j;
            if (stack.size() == 1 && stack[0] == '{' && j < text.size() && text[j] == ':') {
                current = s;
                out.key[s] = line;
            } else {
                record();
            }
            continue;
        }
        if (c == '{' || c == '[') {
            record();
            stack.push_back(c);
            continue;
        }
        if (c == '}' || c == ']') {
            if (!stack.empty()) stack.pop_back();
            continue;
        }
        record();
        while (i + 1 < text.size() && !std::strchr(",]}: \t\r\n", text[i + 1])) ++i;
    }
    return out;
}

}  // namespace

NZPotential parse_manifold(const std::string& text, const std::string& source) {
    using nlohmann::json;
    auto fail = [&](int line, const std::string& msg) -> Error {
        return Error(ErrorKind::ParseError, source + ":" + std::to_string(line) + ": " + msg);
    };
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(std::min(e.byte, text.size())), '\n'));
        throw fail(line, std::string("syntax error: ") + e.what());
    }
    Lines lines = scan_lines(text);
    auto key_line = [&](const std::string& k) { return lines.key.count(k) ? lines.key[k] : 1; };
    auto at_or = [](const std::vector<int>& v, std::size_t i, int dflt) { return i < v.size() ? v[i] : dflt; };
    if (!doc.is_object()) throw fail(1, "top level must be an object");
    for (const char* k : {"cusps", "shapes", "coefficients", "truncation"})
        if (!doc.contains(k)) throw fail(1, std::string("missing field \"") + k + "\"");

    NZPotential pot;
    const auto& jc = doc["cusps"];
    if (!jc.is_number_integer() || jc.get<long>() < 1) throw fail(key_line("cusps"), "\"cusps\" must be a positive integer");
    pot.n_cusps = jc.get<std::size_t>();

    const auto& jt = doc["truncation"];
    if (!jt.is_number_integer() || jt.get<long>() < 4 || jt.get<long>() % 2)
        throw fail(key_line("truncation"), "\"truncation\" must be an even integer >= 4");
    pot.trunc_degree = jt.get<unsigned>();

    if (doc.contains("trust_radius")) {
        const auto& jr = doc["trust_radius"];
        if (!jr.is_number() || !(jr.get<double>() > 0)) throw fail(key_line("trust_radius"), "\"trust_radius\" must be positive");
        pot.trust_radius = jr.get<double>();
    }

    auto complex_of = [&](const json& j, int line, const std::string& what) {
        if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
            throw fail(line, what + " must be [re, im]");
        return Cplx(j[0].get<double>(), j[1].get<double>());
    };

    const auto& js = doc["shapes"];
    if (!js.is_array() || js.size() != pot.n_cusps)
        throw fail(key_line("shapes"), "\"shapes\" must list one [re, im] per cusp");
    for (std::size_t i = 0; i < js.size(); ++i) {
        int line = at_or(lines.shapes, i, key_line("shapes"));
        Cplx tau = complex_of(js[i], line, "shape " + std::to_string(i + 1));
        if (tau.imag() == 0) throw fail(line, "shape " + std::to_string(i + 1) + " is real");
        pot.shapes.push_back(tau);
    }

    const auto& jm = doc["coefficients"];
    if (!jm.is_array()) throw fail(key_line("coefficients"), "\"coefficients\" must be an array");
    for (std::size_t k = 0; k < jm.size(); ++k) {
        int line = at_or(lines.coefficients, k, key_line("coefficients"));
        const auto& e = jm[k];
        if (!e.is_object() || !e.contains("alpha") || !e.contains("value"))
            throw fail(line, "coefficient entries need \"alpha\" and \"value\"");
        const auto& ja = e["alpha"];
        if (!ja.is_array() || ja.size() != pot.n_cusps) throw fail(line, "alpha must list one exponent per cusp");
        MultiIndex a;
        for (const auto& x : ja) {
            if (!x.is_number_integer() || x.get<long>() < 0) throw fail(line, "exponents must be nonnegative integers");
            a.push_back(x.get<unsigned>());
        }
        unsigned d = degree(a);
        if (!is_even_index(a)) throw fail(line, "odd exponent in alpha");
        if (d == 0) throw fail(line, "constant term not allowed");
        if (d == 2) throw fail(line, "quadratic terms are given by the shapes");
        if (d > pot.trunc_degree) throw fail(line, "degree " + std::to_string(d) + " exceeds the truncation");
        if (pot.coefficients.count(a)) throw fail(line, "duplicate alpha");
        pot.coefficients[a] = complex_of(e["value"], line, "value");
    }
    pot.validate();
    return pot;
}

NZPotential read_manifold(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_manifold(ss.str(), path);
}

std::string write_manifold(const NZPotential& pot) {
    std::ostringstream os;
    os.precision(17);
    os << "{\n  \"cusps\": " << pot.n_cusps << ",\n  \"truncation\": " << pot.trunc_degree
       << ",\n  \"trust_radius\": " << pot.trust_radius << ",\n  \"shapes\": [";
    for (std::size_t i = 0; i < pot.n_cusps; ++i)
        os << (i ? ", " : "") << "[" << pot.shapes[i].real() << ", " << pot.shapes[i].imag() << "]";
    os << "],\n  \"coefficients\": [";
    std::size_t k = 0;
    for (const auto& [a, m] : pot.coefficients) {
        os << (k++ ? "," : "") << "\n    {\"alpha\": [";
        for (std::size_t i = 0; i < a.size(); ++i) os << (i ? ", " : "") << a[i];
        os << "], \"value\": [" << m.real() << ", " << m.imag() << "]}";
    }
    os << (k ? "\n  " : "") << "]\n}\n";
    return os.str();
}

}  // namespace zpdehn
