#include "zpdehn/sweeps.hpp"

#include "zpdehn/anomalous.hpp"
#include "zpdehn/cusplemmas.hpp"
#include "zpdehn/errors.hpp"
#include "zpdehn/interchange.hpp"
#include "zpdehn/lattice.hpp"
#include "zpdehn/parallel.hpp"
#include "zpdehn/samplers.hpp"

#include <random>
#include <sstream>

namespace zpdehn {

namespace {

std::mt19937_64 item_rng(std::uint64_t seed, std::size_t i) {
    std::seed_seq s{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(static_cast<std::uint64_t>(i) >> 32)};
    return std::mt19937_64(s);
}

std::vector<CoprimePair> coprime_pairs(int max_l1) {
    std::vector<CoprimePair> out;
    for (long p = -max_l1; p <= max_l1; ++p)
        for (long q = -max_l1; q <= max_l1; ++q)
            if (std::labs(p) + std::labs(q) <= max_l1 && is_coprime({p, q})) out.push_back({p, q});
    return out;
}

std::string pair_str(const CoprimePair& c) {
    return "(" + std::to_string(c.p) + "," + std::to_string(c.q) + ")";
}

std::string row_str(const IntMatrix& m) {
    std::ostringstream os;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? " / " : "");
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m.at(i, j).get_str();
    }
    return os.str();
}

// Two random rows in the kernel lattice of (-q, p, -q', p'), or a planted
// proportional block when (p', q') = s (p, q).
IntMatrix constrained_block(std::mt19937_64& rng, const CoprimePair& a, const CoprimePair& b, bool plant) {
    std::uniform_int_distribution<long> e(-2, 2);
    int s = b == a ? 1 : (b == -a ? -1 : 0);
    if (plant && s != 0) {
        IntMatrix m(2, 4);
        while (rank_q(m) < 2)
            for (std::size_t i = 0; i < 2; ++i) {
                long x = e(rng), y = e(rng);
                m.at(i, 0) = x, m.at(i, 1) = y, m.at(i, 2) = -s * x, m.at(i, 3) = -s * y;
            }
        return m;
    }
    auto ker = siegel_basis(IntMatrix{{-a.q, a.p, -b.q, b.p}}).basis.vectors;
    IntMatrix m(2, 4);
    while (rank_q(m) < 2)
        for (std::size_t i = 0; i < 2; ++i) {
            IntVec row(4);
            for (const auto& k : ker) {
                long c = e(rng);
                for (std::size_t j = 0; j < 4; ++j) row[j] += c * k[j];
            }
            for (std::size_t j = 0; j < 4; ++j) m.at(i, j) = row[j];
        }
    return m;
}

}  // namespace

PairSweepReport dehn_pair_sweep(int max_l1, std::size_t samples, std::uint64_t seed) {
    if (max_l1 < 1 || max_l1 > 12) throw Error(ErrorKind::BudgetExceeded, "pair sweep bound must lie in [1, 12]");
    const auto pairs = coprime_pairs(max_l1);
    const std::size_t combos = pairs.size() * pairs.size();
    auto parts = parallel_chunks<PairSweepReport>(samples, [&](std::size_t, std::size_t b, std::size_t e) {
        PairSweepReport r;
        for (std::size_t i = b; i < e; ++i) {
            auto rng = item_rng(seed, i);
            CoprimePair pq, pq2;
            bool plant = i >= combos;
            if (!plant) {
                pq = pairs[i / pairs.size()];
                pq2 = pairs[i % pairs.size()];
            } else {
                pq = pairs[rng() % pairs.size()];
                pq2 = rng() % 2 ? pq : -pq;
            }
            IntMatrix m = constrained_block(rng, pq, pq2, plant);
            CuspBlock one(m, TauMode::OneTau);
            if (tau_block_rank(one) == 1) {
                ++r.one_tau_rank_one;
                PairVerdict v = dehn_pair_verdict(one, pq, pq2);
                PairVerdict want = pq2 == pq ? PairVerdict::SamePair
                                             : (pq2 == -pq ? PairVerdict::NegatedPair : PairVerdict::Impossible);
                if (want == PairVerdict::Impossible || v != want) {
                    if (!r.violations++)
                        r.first_violation = "one-tau " + row_str(m) + " pairs " + pair_str(pq) + " " + pair_str(pq2) +
                                            " verdict " + pair_verdict_name(v);
                }
            }
            if (pq.p && pq.q && pq2.p && pq2.q) {
                ++r.two_tau_checked;
                CuspBlock two(m, TauMode::TwoTau);
                if (tau_block_rank(two) != 2 && !r.violations++)
                    r.first_violation = "two-tau rank 1 " + row_str(m) + " pairs " + pair_str(pq) + " " + pair_str(pq2);
            }
        }
        return r;
    });
    PairSweepReport out;
    out.max_l1 = max_l1;
    out.samples = samples;
    out.seed = seed;
    out.pair_combinations = combos;
    for (const auto& p : parts) {
        out.one_tau_rank_one += p.one_tau_rank_one;
        out.two_tau_checked += p.two_tau_checked;
        if (p.violations && !out.violations) out.first_violation = p.first_violation;
        out.violations += p.violations;
    }
    return out;
}

DeficientSweepReport deficient_subset_sweep(std::size_t families, std::size_t max_n, std::uint64_t seed) {
    if (max_n < 2 || max_n > 8) throw Error(ErrorKind::BudgetExceeded, "family size must lie in [2, 8]");
    auto parts = parallel_chunks<DeficientSweepReport>(families, [&](std::size_t, std::size_t b, std::size_t e) {
        DeficientSweepReport r;
        for (std::size_t i = b; i < e; ++i) {
            auto rng = item_rng(seed, i);
            std::size_t n = 2 + rng() % (max_n - 1);
            auto fam = sample::random_hypothesis_family(rng, n);
            auto fail = [&](const std::string& what) {
                if (!r.failures++) r.first_failure = "family " + std::to_string(i) + ": " + what;
            };
            if (!all_transversals_dependent(fam)) {
                fail("sampled family violates the hypothesis");
                continue;
            }
            auto s = find_deficient_subset(fam);
            if (!s || !is_deficient(fam, *s)) {
                fail("constructed subset missing or not deficient");
                continue;
            }
            ++r.constructed;
            if (!brute_force_deficient_subset(fam)) {
                fail("brute force finds no deficient subset");
                continue;
            }
            ++r.brute_force_confirmed;
        }
        return r;
    });
    DeficientSweepReport out;
    out.families = families;
    out.max_n = max_n;
    out.seed = seed;
    for (const auto& p : parts) {
        out.constructed += p.constructed;
        out.brute_force_confirmed += p.brute_force_confirmed;
        if (p.failures && !out.failures) out.first_failure = p.first_failure;
        out.failures += p.failures;
    }
    return out;
}

CascadeSweepReport cascade_sweep(std::size_t specs, std::size_t max_n, std::uint64_t seed, double tol) {
    if (max_n < 2 || max_n > 3) throw Error(ErrorKind::BudgetExceeded, "cascade sweep supports 2 or 3 cusps");
    auto parts = parallel_chunks<CascadeSweepReport>(specs, [&](std::size_t, std::size_t b, std::size_t e) {
        CascadeSweepReport r;
        auto note = [&](const std::string& what) {
            if (r.first_failure.empty()) r.first_failure = what;
        };
        for (std::size_t i = b; i < e; ++i) {
            auto rng = item_rng(seed, i);
            std::size_t n = 2 + rng() % (max_n - 1);
            SubgroupSpec spec = sample::random_anomalous_spec(rng, n);
            CascadeResult c;
            try {
                c = containment_cascade(spec);
            } catch (const Error& err) {
                if (err.kind() != ErrorKind::CascadeExhausted) throw;
                ++r.exhausted;
                note("spec " + std::to_string(i) + ": cascade exhausted on " + row_str(spec.rows));
                continue;
            }
            if (c.tag != CascadeResult::CuspIndex) {
                ++r.isolated;
                note("spec " + std::to_string(i) + ": anomalous spec reported isolated");
                continue;
            }
            ++r.cusp_index;
            ContinuationOptions opt;
            opt.tol = tol;
            opt.seed = seed + i;
            if (!continuation_check(spec, synth_potential(seed + i, n), c.index, opt)) {
                ++r.continuation_failures;
                note("spec " + std::to_string(i) + ": cusp " + std::to_string(c.index) + " moves on " + row_str(spec.rows));
            }
        }
        return r;
    });
    CascadeSweepReport out;
    out.specs = specs;
    out.max_n = max_n;
    out.seed = seed;
    out.tol = tol;
    for (const auto& p : parts) {
        out.cusp_index += p.cusp_index;
        out.isolated += p.isolated;
        out.exhausted += p.exhausted;
        out.continuation_failures += p.continuation_failures;
        if (out.first_failure.empty()) out.first_failure = p.first_failure;
    }
    return out;
}

}  // namespace zpdehn
