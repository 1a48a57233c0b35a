#include <doctest.h>

#include "zpdehn/errors.hpp"
#include "zpdehn/nzdehn.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace zpdehn;

namespace {

const double kTwoPi = 2 * 3.14159265358979323846;

NZPotential quadratic(CVec shapes) {
    NZPotential p;
    p.n_cusps = shapes.size();
    p.shapes = std::move(shapes);
    return p;
}

CVec random_point(std::mt19937_64& rng, std::size_t n, double radius) {
    std::uniform_real_distribution<double> d(-radius / std::sqrt(2.0), radius / std::sqrt(2.0));
    CVec u(n);
    for (auto& z : u) z = {d(rng), d(rng)};
    return u;
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvariantViolation;
}

}  // namespace

TEST_CASE("v_of_u examples") {
    auto pot = synth_potential(1, 2);
    CHECK(std::abs(v_of_u(pot, {0, 0})[0]) == 0);
    auto q = quadratic({Cplx(0.3, 1.1)});
    CHECK(std::abs(v_of_u(q, {Cplx(0.2, -0.4)})[0] - Cplx(0.3, 1.1) * Cplx(0.2, -0.4)) < 1e-15);

    NZPotential m = quadratic({Cplx(0, 1), Cplx(0.5, 2)});
    Cplx c(0.7, -0.2);
    m.coefficients[{2, 2}] = c;
    CVec u = {Cplx(0.1, 0.2), Cplx(-0.3, 0.05)};
    auto v = v_of_u(m, u);
    CHECK(std::abs(v[0] - (m.shapes[0] * u[0] + c * u[0] * u[1] * u[1])) < 1e-15);
    CHECK(std::abs(v[1] - (m.shapes[1] * u[1] + c * u[0] * u[0] * u[1])) < 1e-15);
    CHECK(kind_of([&] { v_of_u(m, {Cplx(0.6, 0), Cplx(0, 0)}); }) == ErrorKind::OutOfTrustRadius);
}

TEST_CASE("gradient matches central differences of the potential") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 1 + trial % 3;
        auto pot = synth_potential(static_cast<std::uint64_t>(trial), n);
        CVec u = random_point(rng, n, 0.45);
        auto v = v_of_u(pot, u);
        auto J = dv_du(pot, u);
        const double h = 1e-5;
        for (std::size_t i = 0; i < n; ++i) {
            CVec up = u, um = u;
            up[i] += h, um[i] -= h;
            Cplx dphi = (phi(pot, up) - phi(pot, um)) / (2 * h);
            CHECK(std::abs(v[i] - 0.5 * dphi) < 1e-8);
            auto vp = v_of_u(pot, up), vm = v_of_u(pot, um);
            for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(J[k][i] - (vp[k] - vm[k]) / (2 * h)) < 1e-8);
        }
    }
}

TEST_CASE("potential is even and v is odd") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 1 + trial % 3;
        auto pot = synth_potential(100 + static_cast<std::uint64_t>(trial), n);
        CVec u = random_point(rng, n, 0.45), mu = u;
        for (auto& z : mu) z = -z;
        CHECK(std::abs(phi(pot, u) - phi(pot, mu)) < 1e-14);
        auto v = v_of_u(pot, u), vm = v_of_u(pot, mu);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(v[i] + vm[i]) < 1e-14);
    }
}

TEST_CASE("filling coefficients") {
    for (long p = -20; p <= 20; ++p)
        for (long q = -20; q <= 20; ++q) {
            if (std::gcd(p, q) != 1) continue;
            auto f = make_filling(p, q);
            CHECK(-f.q * f.r + f.p * f.s == 1);
            for (long k : {-2L, 3L}) {
                auto g = shifted(f, k);
                CHECK(-g.q * g.r + g.p * g.s == 1);
            }
        }
    CHECK(make_filling(1, 0) == CuspFilling{1, 0, 0, 1});
    CHECK(kind_of([] { make_filling(4, 6); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("solver agrees with the closed form on quadratic potentials") {
    for (Cplx tau : default_shapes(3)) {
        auto pot = quadratic({tau});
        for (long p = -20; p <= 20; ++p)
            for (long q = -20; q <= 20; ++q) {
                if (std::abs(p) + std::abs(q) > 20 || std::gcd(p, q) != 1) continue;
                auto f = make_filling(p, q);
                auto res = solve_filling(pot, {f});
                Cplx z = std::exp(Cplx(0, kTwoPi) * (double(f.r) + double(f.s) * tau) / (double(p) + double(q) * tau));
                if (std::abs(z) < 1) z = 1.0 / z;
                CHECK(std::abs(res.t[0] - z) < 1e-10);
                CHECK(std::abs(res.t[0]) > 1);
                CHECK(res.residual < 1e-12);
            }
    }
}

TEST_CASE("meridian filling with tau = i") {
    auto pot = quadratic({Cplx(0, 1)});
    auto f = make_filling(1, 0);
    auto res = solve_filling(pot, {f});
    CHECK(std::abs(res.u[0] - Cplx(0, kTwoPi)) < 1e-12);
    CHECK(std::abs(res.v[0] - Cplx(-kTwoPi, 0)) < 1e-12);
    CHECK(std::abs(res.t[0] - std::exp(kTwoPi)) < 1e-9);
    CHECK(res.inverted[0]);
    auto set = core_holonomy_set(res);
    REQUIRE(set.size() == 1);
    CHECK(std::abs(set[0] - std::exp(kTwoPi)) < 1e-9);
}

TEST_CASE("holonomies are normalized and independent of the (r, s) choice") {
    ShapeSpec spec;
    spec.trust_radius = 2.0;
    std::mt19937_64 rng(21);
    int done = 0;
    while (done < 200) {
        std::size_t n = 1 + done % 3;
        auto pot = synth_potential(static_cast<std::uint64_t>(done), n, 8, spec);
        FillingCoefficient fc;
        std::uniform_int_distribution<long> d(-12, 12);
        while (fc.size() < n) {
            long p = d(rng), q = d(rng);
            if (std::abs(p) + std::abs(q) < 8 || std::gcd(p, q) != 1) continue;
            // Resample slopes whose initial guess leaves the trust radius.
            if (kTwoPi / std::abs(double(p) + double(q) * pot.shapes[fc.size()]) > spec.trust_radius) continue;
            fc.push_back(make_filling(p, q));
        }
        FillingResult base;
        try {
            base = solve_filling(pot, fc);
        } catch (const Error& e) {
            // The solution itself may leave the trust radius; resample.
            REQUIRE(e.kind() == ErrorKind::OutOfTrustRadius);
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(base.t[i]) > 1);
        FillingCoefficient moved = fc;
        for (auto& f : moved) f = shifted(f, static_cast<long>(rng() % 7) - 3);
        auto other = solve_filling(pot, moved);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(other.t[i] - base.t[i]) < 1e-10);
        ++done;
    }
}

TEST_CASE("solutions approach the complete structure") {
    ShapeSpec spec;
    spec.trust_radius = 2.0;
    auto pot = synth_potential(5, 2, 8, spec);
    const std::vector<std::pair<long, long>> slopes = {{3, 7}, {7, 13}, {17, 23}};  // |p| + |q| = 10, 20, 40
    // u -> 0 and log|t| -> 0; the argument of t need not tend to 0.
    double prev_u = INFINITY, prev_t = INFINITY;
    for (auto [p, q] : slopes) {
        auto res = solve_filling(pot, {make_filling(p, q), make_filling(q, -p)});
        double mu = 0, mt = 0;
        for (std::size_t i = 0; i < 2; ++i) {
            mu = std::max(mu, std::abs(res.u[i]));
            mt = std::max(mt, std::abs(std::log(std::abs(res.t_raw[i]))));
        }
        CHECK(mu < prev_u);
        CHECK(mt < prev_t);
        prev_u = mu, prev_t = mt;
    }
}

TEST_CASE("solver preconditions") {
    auto pot = synth_potential(0, 1);
    CHECK(kind_of([&] { solve_filling(pot, {make_filling(1, 1)}); }) == ErrorKind::OutOfTrustRadius);
    CHECK(kind_of([&] { solve_filling(pot, {CuspFilling{5, 3, 0, 0}}); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { solve_filling(pot, {make_filling(5, 3), make_filling(5, 3)}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("minus branch conjugates a real-shape-symmetric solution") {
    // With tau -> conj(tau) and the -2 pi i branch the solution is the complex conjugate.
    auto pot = quadratic({Cplx(0.4, 1.3)});
    auto con = quadratic({Cplx(0.4, -1.3)});
    SolveOptions minus;
    minus.branch = Branch::Minus;
    auto a = solve_filling(pot, {make_filling(5, 3)});
    auto b = solve_filling(con, {make_filling(5, 3)}, minus);
    CHECK(std::abs(a.u[0] - std::conj(b.u[0])) < 1e-14);
}

TEST_CASE("high precision solve refines the double solution") {
    auto pot = synth_potential(3, 2);
    FillingCoefficient fc = {make_filling(31, 4), make_filling(-19, 17)};
    auto lo = solve_filling(pot, fc);
    auto hi = solve_filling_high(pot, fc);
    CHECK(hi.residual < HighReal("1e-140"));
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(to_cd(hi.t[i]) - lo.t[i]) < 1e-10);
}

TEST_CASE("holonomy set comparison") {
    CVec a = {Cplx(2, 1), Cplx(1, 3)}, b = {Cplx(1, 3), Cplx(2, 1 + 1e-10)};
    CHECK(holonomy_sets_equal(a, b));
    CHECK_FALSE(holonomy_sets_equal(a, {Cplx(1, 3), Cplx(2, 1.001)}));
    CHECK_FALSE(holonomy_sets_equal(a, {Cplx(1, 3)}));
}

TEST_CASE("scan slopes") {
    auto s = scan_slopes(25);
    for (const auto& f : s) {
        long w = std::abs(f.p) + std::abs(f.q);
        CHECK(w >= 13);
        CHECK(w <= 25);
    }
    // Every slope appears with both signs.
    std::size_t twins = 0;
    for (const auto& f : s)
        for (const auto& g : s) twins += f.p == -g.p && f.q == -g.q;
    CHECK(twins == s.size());
}

TEST_CASE("cosmetic scan of a quadratic potential") {
    auto pot = quadratic(default_shapes(1));
    auto rep = cosmetic_scan(pot, 25, 1e-8);
    CHECK(rep.fillings == scan_slopes(25).size());
    CHECK(rep.nontrivial == 0);
    CHECK(rep.trivial == rep.fillings / 2);
    for (const auto& c : rep.collisions) {
        CHECK(c.trivial);
        CHECK(same_slope(c.a[0], c.b[0]));
    }
    // Oracle: compare the closed forms of all pairs directly.
    auto slopes = scan_slopes(25);
    std::size_t oracle = 0;
    for (std::size_t i = 0; i < slopes.size(); ++i)
        for (std::size_t j = i + 1; j < slopes.size(); ++j) {
            auto ti = quadratic_holonomies(pot, {slopes[i]}), tj = quadratic_holonomies(pot, {slopes[j]});
            if (std::abs(ti[0] - tj[0]) <= 1e-8) {
                ++oracle;
                CHECK(same_slope(slopes[i], slopes[j]));
            }
        }
    CHECK(oracle == rep.collisions.size());
}

TEST_CASE("cosmetic scan budget and trust radius") {
    auto q = quadratic(default_shapes(1));
    CHECK(kind_of([&] { cosmetic_scan(q, 61, 1e-8); }) == ErrorKind::BudgetExceeded);
    CHECK(kind_of([&] { cosmetic_scan(synth_potential(0, 1), 25, 1e-8); }) == ErrorKind::OutOfTrustRadius);
}

TEST_CASE("cosmetic scan of a two-cusp synthetic potential at a small bound") {
    ShapeSpec spec;
    spec.trust_radius = 2.0;
    auto pot = synth_potential(7, 2, 8, spec);
    auto rep = cosmetic_scan(pot, 22, 1e-8);
    CHECK(rep.nontrivial == 0);
    // Each tuple has 3 sign twins.
    CHECK(rep.trivial == rep.fillings * 3 / 2);
}

TEST_CASE("SGI and difference collapse") {
    NZPotential p = quadratic({Cplx(0, 1), Cplx(0, 2)});
    CHECK(sgi_check(p));
    CHECK(difference_collapse_check(p));
    p.coefficients[{4, 0}] = 1;
    p.coefficients[{0, 4}] = 1;
    CHECK(sgi_check(p));
    CHECK_FALSE(difference_collapse_check(p));
    p.coefficients[{2, 2}] = 6;
    CHECK_FALSE(sgi_check(p));
    CHECK(difference_collapse_check(p));

    NZPotential lone = quadratic({Cplx(0, 1), Cplx(0, 2)});
    lone.coefficients[{2, 2}] = 1;
    CHECK_FALSE(difference_collapse_check(lone));
    CHECK(kind_of([] { sgi_check(quadratic({Cplx(0, 1)})); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("difference collapse holds for even parts of powers of u1 - u2") {
    // Oracle: binomial expansion of sum_k c_k (u1 - u2)^k, keeping even-even monomials.
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        NZPotential p = quadratic({Cplx(0, 1), Cplx(0, 2)});
        p.trunc_degree = 10;
        for (unsigned k = 4; k <= 10; k += 2) {
            Cplx ck(static_cast<double>(rng() % 7) - 3, static_cast<double>(rng() % 5) - 2);
            double b = 1;
            for (unsigned i = 0; i <= k; ++i) {
                if (i % 2 == 0 && ck != Cplx(0)) p.coefficients[{i, k - i}] += ck * b;
                b = b * (k - i) / (i + 1);
            }
        }
        CHECK(difference_collapse_check(p));
        if (!p.coefficients.empty()) {
            p.coefficients.begin()->second += 1.0;
            CHECK_FALSE(difference_collapse_check(p));
        }
    }
}

TEST_CASE("synthetic potentials") {
    auto a = synth_potential(0, 2), b = synth_potential(0, 2);
    CHECK(a.coefficients == b.coefficients);
    CHECK(a.shapes == b.shapes);
    CHECK_FALSE(sgi_check(a));
    ShapeSpec pure;
    pure.mixing = false;
    auto c = synth_potential(0, 2, 8, pure);
    CHECK(sgi_check(c));
    for (const auto& [k, m] : c.coefficients) CHECK(a.coefficients.at(k) == m);
    for (std::size_t n = 1; n <= 3; ++n) CHECK(tail_bound(synth_potential(9, n), 0.3) < 1e-6);
    // Shapes are the documented cubic roots.
    auto s = default_shapes(3);
    CHECK(std::abs(s[0] * s[0] * s[0] - s[0] + 1.0) < 1e-14);
    CHECK(std::abs(s[1] * s[1] * s[1] + Cplx(0, 2)) < 1e-14);
    CHECK(std::abs(s[2] * s[2] * s[2] - 2.0 * s[2] + 2.0) < 1e-14);
    for (const auto& z : s) CHECK(z.imag() > 0);
}

TEST_CASE("tail bound against an explicit longer series") {
    // Extend a one-cusp potential geometrically and measure the omitted part of v directly.
    auto pot = synth_potential(4, 1, 8);
    double c8 = std::abs(pot.coefficients.at({8})), c6 = std::abs(pot.coefficients.at({6}));
    double rho = c8 / c6, r = 0.3, omitted = 0, c = c8;
    for (unsigned d = 10; d <= 60; d += 2) {
        c *= rho;
        omitted += 0.5 * d * c * std::pow(r, d - 1);
    }
    CHECK(tail_bound(pot, r) == doctest::Approx(omitted).epsilon(1e-9));
}

TEST_CASE("manifold files round-trip") {
    auto pot = synth_potential(2, 2);
    auto back = parse_manifold(write_manifold(pot));
    CHECK(back.n_cusps == 2);
    CHECK(back.shapes == pot.shapes);
    CHECK(back.coefficients == pot.coefficients);
    CHECK(back.trunc_degree == pot.trunc_degree);
    CHECK(back.trust_radius == pot.trust_radius);
}

TEST_CASE("manifold errors carry line numbers") {
    auto msg = [](const std::string& text) {
        try {
            parse_manifold(text, "m.json");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::ParseError);
            return std::string(e.what());
        }
        return std::string("no error");
    };
    const std::string head = "{\n  \"cusps\": 1,\n  \"truncation\": 8,\n  \"shapes\": [[0.5, 1.0]],\n  \"coefficients\": [\n";
    CHECK(msg(head + "    {\"alpha\": [4], \"value\": [1, 0]},\n    {\"alpha\": [3], \"value\": [1, 0]}\n  ]\n}\n")
              .find("m.json:7: odd exponent") != std::string::npos);
    CHECK(msg(head + "    {\"alpha\": [0], \"value\": [1, 0]}\n  ]\n}\n").find("m.json:6: constant term") !=
          std::string::npos);
    CHECK(msg("{\n  \"cusps\": 2,\n  \"truncation\": 8,\n  \"shapes\": [\n    [0.5, 1.0],\n    [2.0, 0]\n  ],\n"
              "  \"coefficients\": []\n}\n")
              .find("m.json:6: shape 2 is real") != std::string::npos);
    CHECK(msg("{\n  \"cusps\": 1,\n  \"truncation\": 7,\n  \"shapes\": [[0.5, 1.0]],\n  \"coefficients\": []\n}\n")
              .find("m.json:3:") != std::string::npos);
    CHECK(msg("{\n  \"cusps\": 1,\n  \"shapes\": [[0.5, 1.0]]\n  \"truncation\": 8\n}\n").find("m.json:4: syntax error") !=
          std::string::npos);
}
