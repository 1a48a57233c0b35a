#include "doctest.h"
#include "zpdehn/errors.hpp"
#include "zpdehn/heights.hpp"
#include "zpdehn/samplers.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <set>

using namespace zpdehn;
using sample::random_algebraic;

namespace {

AlgebraicNumber num(std::initializer_list<long> low_to_high, unsigned idx) {
    return AlgebraicNumber::from_minpoly(make_int_poly(low_to_high), idx);
}

}  // namespace

TEST_CASE("univariate polynomial helpers") {
    CHECK(poly_to_string(make_int_poly({-1, -1, 1})) == "x^2 - x - 1");
    CHECK(poly_to_string(make_int_poly({3, 0, -2})) == "-2x^2 + 3");
    CHECK(parse_coefficients("1,-1,-1") == make_int_poly({-1, -1, 1}));
    CHECK_THROWS_AS(parse_coefficients("1,x"), Error);
    CHECK(primitive_normalized(make_int_poly({4, -2, -6})) == make_int_poly({-2, 1, 3}));
    CHECK(cyclotomic(1) == make_int_poly({-1, 1}));
    CHECK(cyclotomic(12) == make_int_poly({1, 0, -1, 0, 1}));
    CHECK(cyclotomic(9) == make_int_poly({1, 0, 0, 1, 0, 0, 1}));
    CHECK(is_cyclotomic(make_int_poly({1, 1, 1})));
    CHECK_FALSE(is_cyclotomic(make_int_poly({-1, -1, 1})));
    // (x - 1)^2 (x + 2) -> (x - 1)(x + 2)
    CHECK(squarefree_part(make_int_poly({2, -3, 0, 1})) == make_int_poly({-2, 1, 1}));
    // charpoly of the companion matrix recovers the monic polynomial
    IntPoly f = make_int_poly({5, -3, 0, 2});
    CHECK(primitive_normalized(charpoly(companion(f))) == f);
    CHECK(reversed(make_int_poly({1, 3, 0, 2})) == make_int_poly({2, 0, 3, 1}));
    CHECK(negated_argument(make_int_poly({1, 3, 0, 2})) == make_int_poly({1, -3, 0, -2}));
}

TEST_CASE("factorization over Z recovers planted factors") {
    auto fs = factor_over_z(make_int_poly({-1, 0, 0, 0, 0, 0, 1}));
    REQUIRE(fs.size() == 4);
    CHECK(fs[0] == make_int_poly({-1, 1}));
    CHECK(fs[3] == make_int_poly({1, 1, 1}));

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        std::set<IntPoly> planted;
        RatPoly prod{1};
        std::size_t deg = 0;
        while (deg < 3 || (deg < 8 && rng() % 2)) {
            AlgebraicNumber a = random_algebraic(rng, 3, 4);
            if (deg + a.degree() > 10 || planted.count(a.minpoly)) continue;
            planted.insert(a.minpoly);
            prod = poly_mul(prod, to_rat_poly(a.minpoly));
            deg += a.degree();
        }
        auto got = factor_over_z(primitive_normalized(prod));
        CHECK(std::set<IntPoly>(got.begin(), got.end()) == planted);
    }
}

TEST_CASE("algebraic number construction") {
    CHECK_THROWS_AS(AlgebraicNumber::from_minpoly(make_int_poly({4, 0, -4, 0, 1}), 0), Error);  // (x^2 - 2)^2
    try {
        AlgebraicNumber::from_minpoly(make_int_poly({-6, 1, 1}), 0);  // (x + 3)(x - 2)
        FAIL("reducible polynomial accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::HypothesisViolated);
    }
    CHECK_THROWS_AS(AlgebraicNumber::from_minpoly(make_int_poly({1, 0, 1}), 2), Error);
    CHECK_THROWS_AS(AlgebraicNumber::from_minpoly(make_int_poly({3}), 0), Error);
    try {
        AlgebraicNumber::from_minpoly(make_int_poly({1, 0, 1}), 0, 5000);
        FAIL("precision above the cap accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PrecisionExhausted);
    }
    AlgebraicNumber a = AlgebraicNumber::from_minpoly(make_int_poly({-4, 0, 2}), 1);
    CHECK(a.minpoly == make_int_poly({-2, 0, 1}));
    CHECK(std::abs(a.approx() - std::sqrt(2.0)) < 1e-14);
    // roots ordered by real part, then imaginary part
    auto c = conjugates(num({1, 0, 0, 0, 1}, 0));
    REQUIRE(c.size() == 4);
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
        CHECK((c[i].real() < c[i + 1].real() - 1e-12 ||
               (std::abs(c[i].real() - c[i + 1].real()) < 1e-12 && c[i].imag() < c[i + 1].imag())));
    AlgebraicNumber q = AlgebraicNumber::rational(Rat(-3, 4));
    CHECK(q.is_rational());
    CHECK(q.rational_value() == Rat(-3, 4));
    CHECK(q.to_string() == "-3/4");
}

TEST_CASE("weil_height examples") {
    CHECK(weil_height(num({-2, 1}, 0)).value == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    HeightValue i = weil_height(num({1, 0, 1}, 0));
    CHECK(i.value == 0);
    CHECK(i.error_bound == 0);
    HeightValue g = weil_height(num({-1, -1, 1}, 1));
    CHECK(std::abs(g.value - 0.5 * std::log((1 + std::sqrt(5.0)) / 2)) < 1e-15);
    CHECK(std::abs(g.value - 0.24061) < 1e-5);
    CHECK(g.error_bound < 1e-12);
    CHECK(weil_height(num({0, 1}, 0)).value == 0);
    CHECK(std::abs(weil_height(AlgebraicNumber::rational(Rat(-5, 3))).value - std::log(5.0)) < 1e-15);
    // non-monic: h(1/2 + i/2)... minpoly 2x^2 - 2x + 1, roots of modulus 1/sqrt 2
    CHECK(std::abs(weil_height(num({1, -2, 2}, 0)).value - 0.5 * std::log(2.0)) < 1e-15);
}

TEST_CASE("height with roots on the unit circle") {
    // Lehmer's polynomial: one root outside the circle, eight on it.
    AlgebraicNumber l = AlgebraicNumber::from_minpoly(make_int_poly({1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1}), 0);
    CHECK(l.irreducibility_trusted);
    HeightValue h = weil_height(l);
    CHECK(std::abs(h.value - std::log(1.1762808182599175) / 10) < 1e-14);
    CHECK(h.error_bound < 1e-12);
}

TEST_CASE("h(a^n) = |n| h(a) on seeded inputs") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        AlgebraicNumber a = random_algebraic(rng, 4, 5);
        if (a.minpoly[0] == 0) continue;
        long n = static_cast<long>(rng() % 11) - 5;
        AlgebraicNumber p = power(a, n);
        HeightValue ha = weil_height(a), hp = weil_height(p);
        double diff = std::abs(hp.value - std::abs(n) * ha.value);
        INFO(a.to_string() << " ^ " << n << " = " << p.to_string());
        CHECK(diff <= 1e-9);
        CHECK(diff <= hp.error_bound + std::abs(n) * ha.error_bound + 1e-14);
        std::complex<double> z = std::pow(a.approx(), static_cast<int>(n)), w = p.approx();
        CHECK(std::abs(z - w) <= 1e-9 * std::max(1.0, std::abs(z)));
    }
}

TEST_CASE("negation and inversion preserve the height") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        AlgebraicNumber a = random_algebraic(rng, 3, 6);
        if (a.minpoly[0] == 0) continue;
        AlgebraicNumber m = negate(a), r = inverse(a);
        CHECK(m.minpoly == primitive_normalized(negated_argument(a.minpoly)));
        CHECK(r.minpoly == primitive_normalized(reversed(a.minpoly)));
        CHECK(std::abs(m.approx() + a.approx()) < 1e-12);
        CHECK(std::abs(r.approx() * a.approx() - 1.0) < 1e-12);
        CHECK(std::abs(weil_height(r).value - weil_height(a).value) < 1e-12);
    }
}

TEST_CASE("product and sum inequalities") {
    std::mt19937_64 rng(77);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        AlgebraicNumber a = random_algebraic(rng, 2, 4), b = random_algebraic(rng, 2, 4);
        AlgebraicNumber p = product(a, b), s = sum(a, b);
        REQUIRE(p.degree() <= 4);
        REQUIRE(s.degree() <= 4);
        CHECK(std::abs(p.approx() - a.approx() * b.approx()) < 1e-12 * std::max(1.0, std::abs(p.approx())));
        CHECK(std::abs(s.approx() - (a.approx() + b.approx())) < 1e-12 * std::max(1.0, std::abs(s.approx())));
        double ha = weil_height(a).value, hb = weil_height(b).value;
        CHECK(weil_height(p).value <= ha + hb + 1e-12);
        CHECK(weil_height(s).value <= std::log(2.0) + ha + hb + 1e-12);
        ++checked;
    }
    CHECK(checked == 60);
    // exact identities: sqrt2 * sqrt2 = 2, sqrt2 + (-sqrt2) = 0
    AlgebraicNumber r2 = num({-2, 0, 1}, 1), m2 = num({-2, 0, 1}, 0);
    CHECK(product(r2, r2).minpoly == make_int_poly({-2, 1}));
    CHECK(sum(r2, m2).minpoly == make_int_poly({0, 1}));
    CHECK(product(r2, num({-3, 0, 1}, 1)).minpoly == make_int_poly({-6, 0, 1}));
}

TEST_CASE("tuple_height examples and errors") {
    CHECK(std::abs(tuple_height({Rat(2), Rat(3)}).value - std::log(3.0)) < 1e-15);
    CHECK(std::abs(tuple_height({Rat(1, 2), Rat(1, 3)}).value - std::log(6.0)) < 1e-15);
    AlgebraicNumber g = num({-1, -1, 1}, 1);
    CHECK(std::abs(tuple_height({g, g}, 2).value - weil_height(g).value) < 1e-15);
    CHECK(std::abs(tuple_height({AlgebraicNumber::rational(2), AlgebraicNumber::rational(3)}, 1).value - std::log(3.0)) <
          1e-15);
    try {
        tuple_height({g, num({-2, 0, 1}, 1)}, 4);
        FAIL("two fields accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::FieldMismatch);
    }
    try {
        tuple_height({g, AlgebraicNumber::rational(2)}, 3);
        FAIL("degree 2 number in a cubic field accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::FieldMismatch);
    }
    NumberField k{g};
    try {
        tuple_height(k, {FieldElement{{Rat(1)}}});
        FAIL("short coordinate vector accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::FieldMismatch);
    }
    CHECK_THROWS_AS(tuple_height(k, {FieldElement{{Rat(1, 2), Rat(0)}}}), Error);
    // (g, 2): embeddings g -> 1.618 and -0.618, so h = (log 2 + log 2) / 2
    CHECK(std::abs(tuple_height({g, AlgebraicNumber::rational(2)}, 2).value - std::log(2.0)) < 1e-14);
}

TEST_CASE("rational tuple height against per-prime sums") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Rat> xs;
        std::size_t n = 1 + rng() % 4;
        for (std::size_t i = 0; i < n; ++i) xs.push_back(make_rat(static_cast<long>(rng() % 61) - 30, 1 + rng() % 40));
        // oracle: sum over primes p of log max_i max(1, |x_i|_p) plus the archimedean place
        double oracle = 0, arch = 1;
        for (const auto& x : xs) arch = std::max(arch, std::abs(x.get_d()));
        oracle += std::log(arch);
        for (long p = 2; p < 40; ++p) {
            bool prime = true;
            for (long q = 2; q * q <= p; ++q) prime = prime && p % q != 0;
            if (!prime) continue;
            int worst = 0;
            for (const auto& x : xs) {
                if (x == 0) continue;
                long den = x.get_den().get_si(), v = 0;
                while (den % p == 0) den /= p, ++v;
                worst = std::max<int>(worst, static_cast<int>(v));
            }
            oracle += worst * std::log(static_cast<double>(p));
        }
        CHECK(std::abs(tuple_height(xs).value - oracle) < 1e-12);
    }
}

TEST_CASE("tuple height sandwich on sampled tuples") {
    std::mt19937_64 rng(31);
    int done = 0;
    while (done < 60) {
        AlgebraicNumber theta = random_algebraic(rng, 3, 3);
        if (!theta.is_algebraic_integer() || theta.degree() < 2) continue;
        NumberField k{theta};
        std::vector<FieldElement> xs;
        std::size_t n = 1 + rng() % 3;
        for (std::size_t i = 0; i < n; ++i) {
            FieldElement e{RatVec(k.degree())};
            for (auto& c : e.coords) c = static_cast<long>(rng() % 7) - 3;
            xs.push_back(e);
        }
        HeightValue t = tuple_height(k, xs);
        double mx = 0, total = 0;
        for (const auto& e : xs) {
            double h = weil_height(to_algebraic(k, e)).value;
            mx = std::max(mx, h);
            total += h;
            CHECK(std::abs(tuple_height(k, {e}).value - h) < 1e-12);
        }
        CHECK(mx <= t.value + 1e-12);
        CHECK(t.value <= total + 1e-12);
        ++done;
    }
}

TEST_CASE("northcott examples") {
    auto zero = northcott_enumerate(0, 2);
    std::vector<std::string> names;
    for (const auto& a : zero) names.push_back(a.to_string());
    CHECK(names == std::vector<std::string>{"1", "0", "-1", "root 0 of x^2 - x + 1", "root 1 of x^2 - x + 1",
                                            "root 0 of x^2 + 1", "root 1 of x^2 + 1", "root 0 of x^2 + x + 1",
                                            "root 1 of x^2 + x + 1"});
    std::set<std::string> one;
    for (const auto& a : northcott_enumerate(std::log(2.0), 1)) one.insert(a.to_string());
    CHECK(one == std::set<std::string>{"0", "1", "-1", "2", "-2", "1/2", "-1/2"});
    auto some = northcott_enumerate(0.3, 3);
    CHECK(std::find(some.begin(), some.end(), AlgebraicNumber::rational(0)) != some.end());
    CHECK(std::find(some.begin(), some.end(), AlgebraicNumber::rational(1)) != some.end());
    try {
        northcott_enumerate(1.2, 2);
        FAIL("budget not enforced");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BudgetExceeded);
    }
    CHECK_THROWS_AS(northcott_enumerate(0.5, 4), Error);
}

TEST_CASE("northcott at (log 2, 2) matches a brute-force filter") {
    const double hmax = std::log(2.0);
    auto want = oracle::northcott_quadratic(hmax);
    std::map<std::vector<long>, int> got;
    for (const auto& x : northcott_enumerate(hmax, 2)) {
        std::vector<long> key;
        for (const auto& c : x.minpoly) key.push_back(c.get_si());
        got[key]++;
    }
    CHECK(got == want);
    CHECK(got.size() > 50);
}

TEST_CASE("northcott output is closed under negation and inversion") {
    auto out = northcott_enumerate(std::log(2.0), 2);
    std::set<IntPoly> polys;
    for (const auto& a : out) polys.insert(a.minpoly);
    for (const auto& f : polys) {
        CHECK(polys.count(primitive_normalized(negated_argument(f))) == 1);
        if (f[0] != 0) CHECK(polys.count(primitive_normalized(reversed(f))) == 1);
    }
}

TEST_CASE("bmz product report") {
    BmzReport r = bmz_product_report({AlgebraicNumber::rational(2), AlgebraicNumber::rational(3)});
    CHECK(std::abs(r.product - std::log(2.0) * std::log(3.0)) < 1e-14);
    CHECK(std::abs(r.product - 0.7615) < 1e-4);
    CHECK(r.field_degree == 1);
    CHECK_FALSE(r.degenerate);
    BmzReport u = bmz_product_report({num({1, 1, 1}, 0), AlgebraicNumber::rational(5)});
    CHECK(u.product == 0);
    CHECK(u.degenerate);
    BmzReport g = bmz_product_report({num({-1, -1, 1}, 1), AlgebraicNumber::rational(2)});
    CHECK(std::abs(g.product - 0.5 * std::log((1 + std::sqrt(5.0)) / 2) * std::log(2.0)) < 1e-14);
    CHECK(g.field_degree == 2);
    BmzReport two = bmz_product_report({num({-1, -1, 1}, 1), num({-2, 0, 1}, 1)});
    CHECK(two.field_degree == 4);
    CHECK(two.field_degree_is_bound);
    CHECK(bmz_product_report({num({-2, 0, 1}, 1)}, 6).field_degree == 6);
}
