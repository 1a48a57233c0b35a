#pragma once

// Seeded random inputs shared by the sweeps, the tools and the tests.

#include "zpdehn/anomalous.hpp"
#include "zpdehn/errors.hpp"
#include "zpdehn/heights.hpp"
#include "zpdehn/hpnum.hpp"
#include "zpdehn/interchange.hpp"

#include <algorithm>
#include <random>

namespace zpdehn::sample {

// Random single-copy subgroup at n cusps with entries in [-2, 2]. Each row is
// supported on a random set of cusps; sometimes a cusp pair (a, b) is copied
// from another row so that proportional pairs, the source of deficiency, are common.
inline IntMatrix random_rows(std::mt19937_64& rng, std::size_t n, std::size_t r) {
    std::uniform_int_distribution<long> e(-2, 2);
    IntMatrix m(r, 2 * n);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t c = 0; c < n; ++c) {
            if (rng() % 2) continue;
            if (i > 0 && rng() % 3 == 0) {
                std::size_t src = rng() % i;
                long k = rng() % 2 ? 1 : -1;
                m.at(i, 2 * c) = m.at(src, 2 * c) * k;
                m.at(i, 2 * c + 1) = m.at(src, 2 * c + 1) * k;
            } else {
                m.at(i, 2 * c) = e(rng);
                m.at(i, 2 * c + 1) = e(rng);
            }
        }
    return m;
}

// Planted deficiency: the pairs of a random cusp set S lie in the column span
// of an r x s' matrix with s' < |S|; other cusps are dense.
inline IntMatrix planted_rows(std::mt19937_64& rng, std::size_t n, std::size_t r) {
    std::uniform_int_distribution<long> e(-2, 2), c(-1, 1);
    std::size_t s = 2 + rng() % (n - 1), sp = 1 + rng() % (s - 1);
    std::vector<std::size_t> cusps(n);
    for (std::size_t i = 0; i < n; ++i) cusps[i] = i;
    std::shuffle(cusps.begin(), cusps.end(), rng);
    std::vector<std::vector<long>> B(r, std::vector<long>(sp));
    for (auto& row : B)
        for (auto& x : row) x = e(rng);
    IntMatrix m(r, 2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t cusp = cusps[k];
        if (k < s) {
            for (std::size_t half = 0; half < 2; ++half) {
                std::vector<long> x(sp);
                for (auto& v : x) v = c(rng);
                for (std::size_t i = 0; i < r; ++i) {
                    long sum = 0;
                    for (std::size_t t = 0; t < sp; ++t) sum += B[i][t] * x[t];
                    m.at(i, 2 * cusp + half) = sum;
                }
            }
        } else {
            for (std::size_t i = 0; i < r; ++i) m.at(i, 2 * cusp) = e(rng), m.at(i, 2 * cusp + 1) = e(rng);
        }
    }
    return m;
}

// One nonzero linear form in n variables with entries in [-max_abs, max_abs].
inline IntMatrix random_form(std::mt19937_64& rng, std::size_t n, long max_abs) {
    std::uniform_int_distribution<long> e(-max_abs, max_abs);
    IntMatrix m(1, n);
    bool nonzero = false;
    while (!nonzero)
        for (std::size_t i = 0; i < n; ++i) {
            m.at(0, i) = e(rng);
            nonzero = nonzero || m.at(0, i) != 0;
        }
    return m;
}

inline RatVec random_vec(std::mt19937_64& rng, std::size_t n, long lo, long hi) {
    std::uniform_int_distribution<long> e(lo, hi);
    RatVec v(n);
    for (auto& x : v) x = e(rng);
    return v;
}

// Families whose transversals are all dependent: either every vector satisfies
// a random linear functional, or the pairs on a random index set T live in a
// subspace of dimension |T| - 1.
inline PairedVectorFamily random_hypothesis_family(std::mt19937_64& rng, std::size_t n) {
    std::vector<RatVec> v(n), w(n);
    if (rng() % 2 == 0) {
        RatVec f;
        do f = random_vec(rng, n, -1, 1);
        while (std::all_of(f.begin(), f.end(), [](const Rat& x) { return x == 0; }));
        auto sample = [&] {
            while (true) {
                RatVec x = random_vec(rng, n, -2, 2);
                Rat s = 0;
                for (std::size_t i = 0; i < n; ++i) s += f[i] * x[i];
                if (s == 0) return x;
            }
        };
        for (std::size_t i = 0; i < n; ++i) v[i] = sample(), w[i] = sample();
    } else {
        std::size_t t = 1 + rng() % n;
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<RatVec> gens;
        for (std::size_t g = 0; g + 1 < t; ++g) gens.push_back(random_vec(rng, n, -1, 1));
        auto combo = [&] {
            RatVec x(n, Rat(0));
            std::uniform_int_distribution<long> c(-1, 1);
            for (const auto& g : gens) {
                long k = c(rng);
                for (std::size_t j = 0; j < n; ++j) x[j] += k * g[j];
            }
            return x;
        };
        for (std::size_t i = 0; i < n; ++i) {
            bool in_t = std::find(perm.begin(), perm.begin() + static_cast<long>(t), i) != perm.begin() + static_cast<long>(t);
            v[i] = in_t ? combo() : random_vec(rng, n, -2, 2);
            w[i] = in_t ? combo() : random_vec(rng, n, -2, 2);
        }
    }
    if (rng() % 5 == 0) v[rng() % n] = RatVec(n, Rat(0));
    return PairedVectorFamily(v, w);
}

// Root of a random irreducible integer polynomial of degree <= max_degree
// with coefficients in [-coeff, coeff] and positive leading coefficient.
inline AlgebraicNumber random_algebraic(std::mt19937_64& rng, std::size_t max_degree, long coeff) {
    std::uniform_int_distribution<long> e(-coeff, coeff), lead(1, coeff);
    while (true) {
        std::size_t d = 1 + rng() % max_degree;
        IntPoly f(d + 1);
        for (std::size_t k = 0; k < d; ++k) f[k] = e(rng);
        f[d] = lead(rng);
        if (f[0] == 0 && d > 1) continue;
        try {
            return AlgebraicNumber::from_minpoly(f, static_cast<unsigned>(rng() % d));
        } catch (const Error&) {
        }
    }
}

inline HighComplex mp_pow(HighComplex z, long e) {
    if (e < 0) return HighComplex(1) / mp_pow(z, -e);
    HighComplex p(1);
    for (; e; e >>= 1) {
        if (e & 1) p *= z;
        z *= z;
    }
    return p;
}

struct PlantedRelation {
    std::vector<HighComplex> numbers;
    IntVec exponents;  // primitive, first nonzero entry positive
};

// m in [2, 5] numbers exp(x + iy) with a planted relation of exponents in
// [-bound, bound] and gcd 1; the last number is an a_m-th root of the product
// of the others, so no other relation holds generically.
inline PlantedRelation planted_relation(std::mt19937_64& rng, long bound) {
    std::uniform_real_distribution<double> re(-1.0, 1.0), im(-3.0, 3.0);
    std::uniform_int_distribution<long> e(-bound, bound);
    std::size_t m = 2 + rng() % 4;
    PlantedRelation out;
    for (std::size_t i = 0; i < m; ++i) {
        HighReal x = HighReal(re(rng)) / 3 + HighReal(1) / 7, y = HighReal(im(rng)) / 2 + HighReal(1) / 11;
        out.numbers.emplace_back(exp(x) * cos(y), exp(x) * sin(y));
    }
    IntVec a(m);
    do {
        for (std::size_t i = 0; i + 1 < m; ++i) a[i] = e(rng);
        a[m - 1] = 1 + static_cast<long>(rng() % static_cast<unsigned long>(bound));
    } while (content(a) != 1);
    HighComplex rhs(1);
    for (std::size_t i = 0; i + 1 < m; ++i) rhs *= mp_pow(out.numbers[i], -a[i].get_si());
    HighReal rad = pow(abs(rhs), HighReal(1) / a[m - 1].get_si());
    HighReal ang = atan2(rhs.imag(), rhs.real()) / a[m - 1].get_si();
    out.numbers[m - 1] = HighComplex(rad * cos(ang), rad * sin(ang));
    for (const auto& x : a)
        if (x != 0) {
            if (x < 0)
                for (auto& y : a) y = -y;
            break;
        }
    out.exponents = a;
    return out;
}

// Rejection sampling until the spec is well formed and anomalous; n in [2, 3].
inline SubgroupSpec random_anomalous_spec(std::mt19937_64& rng, std::size_t n) {
    while (true) {
        std::size_t r = 1 + rng() % (2 * n);
        IntMatrix m = rng() % 2 ? random_rows(rng, n, r) : planted_rows(rng, n, r);
        if (rank_q(m) != r) continue;
        SubgroupSpec spec(n, 1, m);
        if (anomaly_verdict(spec).tag == AnomalyVerdict::Anomalous) return spec;
    }
}

}  // namespace zpdehn::sample
