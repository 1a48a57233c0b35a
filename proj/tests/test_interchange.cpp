#include <doctest.h>

#include "zpdehn/errors.hpp"
#include "zpdehn/interchange.hpp"
#include "zpdehn/samplers.hpp"

#include <random>

using namespace zpdehn;
using sample::random_hypothesis_family;
using sample::random_vec;

namespace {

RatVec rv(std::initializer_list<long> xs) {
    RatVec r;
    for (long x : xs) r.push_back(Rat(x));
    return r;
}

Rat det(RatMatrix m) {
    Rat d = 1;
    const std::size_t n = m.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && m[p][k] == 0) ++p;
        if (p == n) return 0;
        if (p != k) std::swap(m[p], m[k]), d = -d;
        d *= m[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            Rat f = m[i][k] / m[k][k];
            for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    return d;
}

}  // namespace

TEST_CASE("all transversals dependent examples") {
    CHECK(all_transversals_dependent(PairedVectorFamily({rv({1, 0}), rv({1, 0})}, {rv({1, 0}), rv({1, 0})})));
    CHECK_FALSE(all_transversals_dependent(PairedVectorFamily({rv({1, 0}), rv({1, 0})}, {rv({0, 1}), rv({0, 1})})));
    CHECK(all_transversals_dependent(PairedVectorFamily({rv({1, 0, 0}), rv({0, 1, 0}), rv({1, 1, 0})},
                                                        {rv({2, 1, 0}), rv({0, 3, 0}), rv({1, -1, 0})})));
}

TEST_CASE("transversal dependence agrees with full enumeration") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t n = 2 + rng() % 4;
        PairedVectorFamily fam = trial % 2 ? random_hypothesis_family(rng, n)
                                           : PairedVectorFamily([&] {
                                                 std::vector<RatVec> a;
                                                 for (std::size_t i = 0; i < n; ++i) a.push_back(random_vec(rng, n, -1, 1));
                                                 return a;
                                             }(), [&] {
                                                 std::vector<RatVec> a;
                                                 for (std::size_t i = 0; i < n; ++i) a.push_back(random_vec(rng, n, -1, 1));
                                                 return a;
                                             }());
        bool all_dep = true;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            RatMatrix m;
            for (std::size_t i = 0; i < n; ++i) m.push_back(mask >> i & 1 ? fam.w[i] : fam.v[i]);
            if (rank_q(m) == n) all_dep = false;
        }
        CHECK(all_transversals_dependent(fam) == all_dep);
    }
}

TEST_CASE("interchangeability examples") {
    std::vector<RatVec> b2 = {rv({1, 0}), rv({0, 1})};
    CHECK(is_interchangeable(b2, 0, rv({1, 1})));
    CHECK_FALSE(is_interchangeable(b2, 0, rv({0, 1})));
    std::vector<RatVec> b3 = {rv({1, 0, 0}), rv({0, 1, 0}), rv({0, 0, 1})};
    CHECK(is_interchangeable(b3, 2, rv({2, 0, -5})));
    try {
        is_interchangeable({rv({1, 0, 0})}, 0, rv({0, 1, 0}));
        FAIL("expected NotInSpan");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotInSpan);
    }
    try {
        is_interchangeable({rv({1, 0}), rv({2, 0})}, 0, rv({1, 0}));
        FAIL("expected NotABasis");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotABasis);
    }
}

TEST_CASE("self-interchange") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 1 + rng() % 5;
        std::vector<RatVec> b;
        Echelon e(n);
        while (b.size() < n) {
            RatVec x = random_vec(rng, n, -3, 3);
            if (e.try_add(x)) b.push_back(x);
        }
        for (std::size_t i = 0; i < n; ++i) CHECK(is_interchangeable(b, i, b[i]));
    }
}

TEST_CASE("batch replacement along nested spans is a basis") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t levels = 1 + rng() % 4;
        std::vector<std::size_t> ends;  // level i spans basis[0 .. ends[i])
        std::size_t total = 0;
        for (std::size_t i = 0; i < levels; ++i) ends.push_back(total += 1 + rng() % 3);
        std::vector<RatVec> basis;
        Echelon e(total);
        while (basis.size() < total) {
            RatVec x = random_vec(rng, total, -3, 3);
            if (e.try_add(x)) basis.push_back(x);
        }
        std::vector<std::size_t> picks;
        std::vector<RatVec> repl;
        RatMatrix T(total, RatVec(total, Rat(0)));  // column j: coefficients of the j-th new vector
        for (std::size_t j = 0; j < total; ++j) T[j][j] = 1;
        Rat diag = 1;
        std::size_t start = 0;
        for (std::size_t i = 0; i < levels; ++i) {
            std::size_t pick = start + rng() % (ends[i] - start);
            RatVec coeff = random_vec(rng, ends[i], -3, 3);
            if (coeff[pick] == 0) coeff[pick] = 1;
            RatVec x(total, Rat(0));
            for (std::size_t k = 0; k < ends[i]; ++k)
                for (std::size_t j = 0; j < total; ++j) x[j] += coeff[k] * basis[k][j];
            std::vector<RatVec> level_basis(basis.begin(), basis.begin() + static_cast<long>(ends[i]));
            CHECK(is_interchangeable(level_basis, pick, x));
            for (std::size_t k = 0; k < total; ++k) T[k][pick] = k < ends[i] ? coeff[k] : Rat(0);
            diag *= coeff[pick];
            picks.push_back(pick);
            repl.push_back(x);
            start = ends[i];
        }
        // Block-triangular transformation: determinant is the product of the picked coefficients.
        CHECK(det(T) == diag);
        CHECK(diag != 0);
        CHECK(batch_replacement_is_basis(basis, picks, repl));
    }
}

TEST_CASE("deficient subset examples") {
    PairedVectorFamily f1({rv({1, 0, 0}), rv({1, 0, 0}), rv({1, 1, 0})}, {rv({0, 1, 0}), rv({0, 1, 0}), rv({2, 2, 0})});
    DeficientSubsetTrace tr;
    auto s1 = find_deficient_subset(f1, TransversalSearch::Exhaustive, &tr);
    REQUIRE(s1);
    CHECK(*s1 == std::vector<std::size_t>{2});
    CHECK(tr.designated == std::vector<std::size_t>{0, 1});
    CHECK(is_deficient(f1, tr.designated));
    CHECK(brute_force_deficient_subset(f1) == std::vector<std::size_t>{2});

    PairedVectorFamily f2({rv({1, 0}), rv({0, 0})}, {rv({1, 0}), rv({0, 0})});
    CHECK(find_deficient_subset(f2) == std::vector<std::size_t>{1});
    // {1} and {2} (1-based) are both valid; brute force returns the lexicographically first.
    CHECK(brute_force_deficient_subset(f2) == std::vector<std::size_t>{0});

    PairedVectorFamily f3({rv({1, 0}), rv({1, 0})}, {rv({0, 1}), rv({0, 1})});
    try {
        find_deficient_subset(f3);
        FAIL("expected HypothesisViolated");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::HypothesisViolated);
    }
    CHECK_FALSE(brute_force_deficient_subset(f3));

    PairedVectorFamily f4({rv({0})}, {rv({0})});
    CHECK_FALSE(brute_force_deficient_subset(f4));
    CHECK_THROWS_AS(find_deficient_subset(f4), Error);
}

TEST_CASE("deficient subset of a family in a plane") {
    std::mt19937_64 rng(4);
    std::vector<RatVec> v, w;
    for (int i = 0; i < 4; ++i) {
        RatVec a = random_vec(rng, 2, -2, 2), b = random_vec(rng, 2, -2, 2);
        v.push_back({a[0], a[1], 0, 0});
        w.push_back({b[0], b[1], 0, 0});
    }
    PairedVectorFamily fam(v, w);
    auto bf = brute_force_deficient_subset(fam);
    REQUIRE(bf);
    CHECK(bf->size() <= 3);
    auto s = find_deficient_subset(fam);
    REQUIRE(s);
    CHECK(is_deficient(fam, *s));
}

TEST_CASE("construction agrees with brute force on random hypothesis families") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 400; ++trial) {
        std::size_t n = 2 + rng() % 5;
        auto fam = random_hypothesis_family(rng, n);
        REQUIRE(all_transversals_dependent(fam));
        DeficientSubsetTrace tr;
        auto s = find_deficient_subset(fam, TransversalSearch::Exhaustive, &tr);
        REQUIRE(s);
        CHECK(!s->empty());
        CHECK(s->size() < n);
        CHECK(is_deficient(fam, *s));
        CHECK(is_deficient(fam, tr.designated));
        auto bf = brute_force_deficient_subset(fam);
        REQUIRE(bf);
        CHECK(bf->size() <= s->size());
    }
}
