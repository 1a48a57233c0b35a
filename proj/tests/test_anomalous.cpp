#include <doctest.h>

#include "zpdehn/anomalous.hpp"
#include "zpdehn/samplers.hpp"
#include "zpdehn/errors.hpp"

#include <random>

using namespace zpdehn;

namespace {

QPoly tau(unsigned nv, unsigned i) { return QPoly::variable(nv, i); }
QPoly cst(unsigned nv, long c) { return QPoly::constant(nv, Rat(c)); }

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvariantViolation;
}

SubgroupSpec cusp_trivial(std::size_t n, std::size_t i) {
    IntMatrix m(2, 2 * n);
    m.at(0, 2 * i) = 1;
    m.at(1, 2 * i + 1) = 1;
    return SubgroupSpec(n, 1, m);
}

// Oracle: the cusp stays at u = v = 0 along two random kernel directions on two potentials.
bool forced_numerically(const SubgroupSpec& spec, std::size_t cusp, std::uint64_t seed) {
    for (std::uint64_t s = 0; s < 2; ++s) {
        ContinuationOptions opt;
        opt.seed = seed + s;
        if (!continuation_check(spec, synth_potential(seed * 7 + s, spec.n_cusps), cusp, opt)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("jacobian examples") {
    auto j1 = jacobian_at_complete(SubgroupSpec(2, 1, IntMatrix{{1, 0, 0, 0}, {0, 1, 0, 0}}));
    CHECK(j1.at(0, 0) == cst(2, 1));
    CHECK(j1.at(0, 1).is_zero());
    CHECK(j1.at(1, 0) == tau(2, 0));
    CHECK(j1.at(1, 1).is_zero());

    auto j2 = jacobian_at_complete(SubgroupSpec(2, 1, IntMatrix{{1, 0, 1, 0}, {0, 1, 0, 1}}));
    CHECK(j2.at(0, 0) == cst(2, 1));
    CHECK(j2.at(0, 1) == cst(2, 1));
    CHECK(j2.at(1, 0) == tau(2, 0));
    CHECK(j2.at(1, 1) == tau(2, 1));

    auto j3 = jacobian_at_complete(SubgroupSpec(1, 2, IntMatrix{{1, 0, -1, 0}, {0, 1, 0, -1}}));
    CHECK(j3.at(0, 0) == cst(1, 1));
    CHECK(j3.at(0, 1) == cst(1, -1));
    CHECK(j3.at(1, 0) == tau(1, 0));
    CHECK(j3.at(1, 1) == tau(1, 0) * Rat(-1));

    // sigma relabels the primed shapes.
    auto j4 = jacobian_at_complete(SubgroupSpec(2, 2, IntMatrix{{0, 0, 0, 0, 0, 1, 0, 0}}), {1, 0});
    CHECK(j4.at(0, 2) == tau(2, 1));
}

TEST_CASE("spec validation") {
    CHECK(kind_of([] { SubgroupSpec(2, 1, IntMatrix{{1, 0, 0}}); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { SubgroupSpec(2, 1, IntMatrix{{1, 0, 0, 0}, {2, 0, 0, 0}}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("anomaly verdict examples") {
    auto h = anomaly_verdict(cusp_trivial(2, 0));
    CHECK(h.tag == AnomalyVerdict::Anomalous);
    CHECK(h.jacobian_rank == 1);
    CHECK(h.deficiency == 1);
    CHECK(anomaly_verdict(SubgroupSpec(2, 1, IntMatrix{{1, 0, 1, 0}, {0, 1, 0, 1}})).tag == AnomalyVerdict::Isolated);

    // Cross-wired product spec: cusp 1 with primed cusp 2 under (2,3),(1,2);
    // cusp 2 with primed cusp 1 under (3,1),(1,-1).
    SubgroupSpec cross(2, 2,
                       IntMatrix{{1, 0, 0, 0, 0, 0, 0, 3}, {0, 1, 0, 0, 0, 0, 0, -2}, {0, 0, 1, 0, 1, 0, 0, 0},
                                 {0, 0, 0, 1, 0, -3, 0, 0}});
    CHECK(anomaly_verdict(cross).tag == AnomalyVerdict::Isolated);
}

TEST_CASE("cusp-trivial subgroups are anomalous") {
    for (std::size_t n = 2; n <= 5; ++n)
        for (std::size_t i = 0; i < n; ++i) {
            auto v = anomaly_verdict(cusp_trivial(n, i));
            CHECK(v.tag == AnomalyVerdict::Anomalous);
            auto c = containment_cascade(cusp_trivial(n, i));
            CHECK(c.tag == CascadeResult::CuspIndex);
            CHECK(c.index == i + 1);
        }
}

TEST_CASE("cascade examples") {
    auto a = containment_cascade(cusp_trivial(2, 1));
    CHECK(a.tag == CascadeResult::CuspIndex);
    CHECK(a.index == 2);
    CHECK(containment_cascade(SubgroupSpec(2, 1, IntMatrix{{1, 0, 1, 0}, {0, 1, 0, 1}})).tag == CascadeResult::Isolated);
    SubgroupSpec three(3, 1, IntMatrix{{1, 1, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0}, {0, 0, 0, 1, 0, 0}});
    auto c = containment_cascade(three);
    CHECK(c.tag == CascadeResult::CuspIndex);
    CHECK(c.index == 2);
    CHECK(c.forced == std::vector<std::size_t>{0, 1});
    CHECK(kind_of([] { containment_cascade(SubgroupSpec(1, 2, IntMatrix{{1, 0, -1, 0}})); }) ==
          ErrorKind::InvalidArgument);
}

TEST_CASE("continuation examples") {
    auto pot = synth_potential(3, 2);
    unsigned taken = 0;
    CHECK(continuation_check(cusp_trivial(2, 0), pot, 1, {}, &taken));
    CHECK(taken == 8);
    SubgroupSpec iso(2, 1, IntMatrix{{1, 0, 1, 0}, {0, 1, 0, 1}});
    CHECK(continuation_check(iso, pot, 1, {}, &taken));
    CHECK(taken == 0);
    SubgroupSpec three(3, 1, IntMatrix{{1, 1, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0}, {0, 0, 0, 1, 0, 0}});
    auto pot3 = synth_potential(4, 3);
    CHECK(continuation_check(three, pot3, 2));
    CHECK(continuation_check(three, pot3, 1));
    // Cusp 3 is free on the component.
    CHECK_FALSE(continuation_check(three, pot3, 3));
    CHECK_FALSE(continuation_check(cusp_trivial(2, 0), pot, 2));
}

TEST_CASE("cascade on random anomalous specs") {
    std::mt19937_64 rng(606);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t n = 2 + trial % 2;
        auto spec = sample::random_anomalous_spec(rng, n);
        CascadeResult c;
        REQUIRE_NOTHROW(c = containment_cascade(spec));
        REQUIRE(c.tag == CascadeResult::CuspIndex);
        CHECK(c.index >= 1);
        CHECK(c.index <= n);
        for (std::size_t j : c.forced) CHECK(forced_numerically(spec, j + 1, static_cast<std::uint64_t>(trial)));
    }
}

TEST_CASE("verdict is the rank comparison") {
    std::mt19937_64 rng(607);
    for (int trial = 0; trial < 500; ++trial) {
        std::size_t n = 1 + trial % 3, r = 1 + rng() % (2 * n);
        IntMatrix m = sample::random_rows(rng, n, r);
        if (rank_q(m) != r) continue;
        SubgroupSpec spec(n, 1, m);
        auto v = anomaly_verdict(spec);
        // Oracle: rank of the Jacobian at random rational shapes (generic rank with high probability).
        std::size_t sampled = 0;
        for (int k = 0; k < 3; ++k) {
            RatVec pt;
            for (std::size_t i = 0; i < n; ++i) pt.push_back(make_rat(static_cast<long>(rng() % 1000) + 1, 7 + k));
            sampled = std::max(sampled, rank_q(jacobian_at_complete(spec).evaluate(pt)));
        }
        CHECK(v.jacobian_rank == sampled);
        CHECK((v.tag == AnomalyVerdict::Isolated) == (sampled == std::min(r, n)));
    }
}

TEST_CASE("product classification examples") {
    // Cusp 1: M_1 = M'_1, L_1 = L'_1. Cusp 2: rows (1,0,0,1), (0,1,1,0) of tau-rank 2.
    SubgroupSpec one(2, 2,
                     IntMatrix{{1, 0, 0, 0, -1, 0, 0, 0}, {0, 1, 0, 0, 0, -1, 0, 0}, {0, 0, 1, 0, 0, 0, 0, 1},
                               {0, 0, 0, 1, 0, 0, 1, 0}});
    auto c1 = product_anomaly_classify(one, {{5, 7}, {2, 3}}, {{5, 7}, {3, 2}});
    CHECK(c1.kind == ProductClassification::OneDimensional);
    REQUIRE(c1.relations.size() == 1);
    CHECK(c1.relations[0] == PairVerdict::SamePair);
    CHECK(c1.containment == "M_1=M'_1, L_1=L'_1, M_2=M'_2=L_2=L'_2=1");
    CHECK(anomaly_verdict(one).jacobian_rank == 3);

    SubgroupSpec two(2, 2,
                     IntMatrix{{1, 0, 0, 0, -1, 0, 0, 0}, {0, 1, 0, 0, 0, -1, 0, 0}, {0, 0, 1, 0, 0, 0, -1, 0},
                               {0, 0, 0, 1, 0, 0, 0, -1}});
    auto c2 = product_anomaly_classify(two, {{5, 7}, {2, 3}}, {{5, 7}, {2, 3}});
    CHECK(c2.kind == ProductClassification::TwoDimensional);
    CHECK(c2.relations == std::vector<PairVerdict>{PairVerdict::SamePair, PairVerdict::SamePair});

    SubgroupSpec neg(2, 2,
                     IntMatrix{{1, 0, 0, 0, 1, 0, 0, 0}, {0, 1, 0, 0, 0, 1, 0, 0}, {0, 0, 1, 0, 0, 0, 0, 1},
                               {0, 0, 0, 1, 0, 0, 1, 0}});
    auto c3 = product_anomaly_classify(neg, {{5, 7}, {2, 3}}, {{-5, -7}, {3, 2}});
    CHECK(c3.relations == std::vector<PairVerdict>{PairVerdict::NegatedPair});
    CHECK(c3.containment == "M_1=1/M'_1, L_1=1/L'_1, M_2=M'_2=L_2=L'_2=1");

    SubgroupSpec cross(2, 2,
                       IntMatrix{{1, 0, 0, 0, 0, 0, 0, 3}, {0, 1, 0, 0, 0, 0, 0, -2}, {0, 0, 1, 0, 1, 0, 0, 0},
                                 {0, 0, 0, 1, 0, -3, 0, 0}});
    auto c4 = product_anomaly_classify(cross, {{2, 3}, {3, 1}}, {{1, -1}, {1, 2}});
    CHECK(c4.kind == ProductClassification::Isolated);
    CHECK(c4.cross_wired);

    SubgroupSpec full(2, 2,
                      IntMatrix{{1, 0, 0, 1, 0, 0, 0, 0}, {0, 1, 1, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 1, 0, 0, 1},
                                {0, 0, 0, 0, 0, 1, 1, 0}});
    CHECK(kind_of([&] { product_anomaly_classify(full, {{2, 3}, {3, 2}}, {{2, 3}, {3, 2}}); }) ==
          ErrorKind::ConstraintViolated);
    CHECK(kind_of([&] { product_anomaly_classify(one, {{5, 7}, {2, 3}}, {{5, 8}, {3, 2}}); }) ==
          ErrorKind::ConstraintViolated);
    SubgroupSpec both_full(2, 2,
                           IntMatrix{{1, 0, 0, 0, 0, 1, 0, 0}, {0, 1, 0, 0, 1, 0, 0, 0}, {0, 0, 1, 0, 0, 0, 0, 1},
                                     {0, 0, 0, 1, 0, 0, 1, 0}});
    CHECK(kind_of([&] { product_anomaly_classify(both_full, {{2, 3}, {2, 3}}, {{3, 2}, {3, 2}}); }) ==
          ErrorKind::NotAnomalous);
}

TEST_CASE("product classification agrees with per-block verdicts") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<long> e(-9, 9);
    auto pair = [&] {
        while (true) {
            long p = e(rng), q = e(rng);
            if (std::gcd(p, q) == 1) return CoprimePair{p, q};
        }
    };
    int checked = 0, anomalous = 0;
    while (checked < 300) {
        std::vector<CoprimePair> P(2), Q(2);
        std::vector<IntMatrix> blk;
        for (std::size_t i = 0; i < 2; ++i) {
            P[i] = pair();
            int kind = static_cast<int>(rng() % 3);
            Q[i] = kind == 0 ? P[i] : kind == 1 ? -P[i] : pair();
            // Two random kernel vectors of (-q, p, -q', p'), biased to the proportional forms.
            IntMatrix m(2, 4);
            for (std::size_t k = 0; k < 2; ++k) {
                long x = e(rng) % 4, y = e(rng) % 4;
                IntVec row(4);
                if (kind < 2 && rng() % 2) {
                    long s = kind == 0 ? -1 : 1;
                    row = {BigInt(x), BigInt(y), BigInt(s * x), BigInt(s * y)};
                } else {
                    // x (p, q, 0, 0) + y (0, 0, p', q') + z (p', q', p, q) lies in the kernel.
                    long z = e(rng) % 3;
                    row = {BigInt(x * P[i].p + z * Q[i].p), BigInt(x * P[i].q + z * Q[i].q),
                           BigInt(y * Q[i].p + z * P[i].p), BigInt(y * Q[i].q + z * P[i].q)};
                }
                for (std::size_t c = 0; c < 4; ++c) m.at(k, c) = row[c];
            }
            blk.push_back(m);
        }
        IntMatrix rows(4, 8);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t k = 0; k < 2; ++k) {
                rows.at(2 * i + k, 2 * i) = blk[i].at(k, 0);
                rows.at(2 * i + k, 2 * i + 1) = blk[i].at(k, 1);
                rows.at(2 * i + k, 4 + 2 * i) = blk[i].at(k, 2);
                rows.at(2 * i + k, 4 + 2 * i + 1) = blk[i].at(k, 3);
            }
        if (rank_q(rows) != 4) continue;
        SubgroupSpec spec(2, 2, rows);
        std::size_t low = 0;
        std::vector<PairVerdict> expect;
        for (std::size_t i = 0; i < 2; ++i) {
            CuspBlock b(blk[i], TauMode::OneTau);
            REQUIRE(pair_constraints_hold(b, P[i], Q[i]));
            if (tau_block_rank(b) == 1) ++low, expect.push_back(dehn_pair_verdict(b, P[i], Q[i]));
        }
        std::size_t rank = anomaly_verdict(spec).jacobian_rank;
        CHECK(rank == 4 - low);
        if (low == 0) {
            CHECK(kind_of([&] { product_anomaly_classify(spec, P, Q); }) == ErrorKind::NotAnomalous);
        } else {
            auto c = product_anomaly_classify(spec, P, Q);
            CHECK(c.relations == expect);
            CHECK(c.kind == (low == 1 ? ProductClassification::OneDimensional : ProductClassification::TwoDimensional));
            ++anomalous;
        }
        ++checked;
    }
    CHECK(anomalous > 30);
}
