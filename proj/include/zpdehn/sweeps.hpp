#pragma once

// Seeded sweeps that check the lemma and cascade statements on many inputs.
// Item i draws from its own generator seeded by (seed, i), so reports do not
// depend on the thread count.

#include <cstddef>
#include <cstdint>
#include <string>

namespace zpdehn {

// Rank-2 blocks whose rows satisfy -q a + p b - q' c + p' d = 0 for coprime
// pairs with |p| + |q|, |p'| + |q'| <= max_l1. The first samples walk every
// pair of pairs; the rest plant proportional blocks with (p', q') = +-(p, q).
// Checks: one-shape tau-rank 1 forces (p, q) = +-(p', q') with the matching
// verdict; two-shape blocks with all of p, q, p', q' nonzero have tau-rank 2.
struct PairSweepReport {
    int max_l1 = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::uint64_t pair_combinations = 0;
    std::uint64_t one_tau_rank_one = 0;
    std::uint64_t two_tau_checked = 0;
    std::uint64_t violations = 0;
    std::string first_violation;
};

PairSweepReport dehn_pair_sweep(int max_l1, std::size_t samples, std::uint64_t seed);

// Random families with all transversals dependent, 2 <= n <= max_n. Checks
// that the constructed subset is deficient and that brute force finds one.
struct DeficientSweepReport {
    std::size_t families = 0, max_n = 0;
    std::uint64_t seed = 0;
    std::uint64_t constructed = 0;
    std::uint64_t brute_force_confirmed = 0;
    std::uint64_t failures = 0;
    std::string first_failure;
};

DeficientSweepReport deficient_subset_sweep(std::size_t families, std::size_t max_n, std::uint64_t seed);

// Random anomalous single-copy specs with 2 <= n <= max_n. Checks that the
// cascade certifies a cusp and that the cusp stays at u = v = 0 along the
// anomalous component of a synthetic potential.
struct CascadeSweepReport {
    std::size_t specs = 0, max_n = 0;
    std::uint64_t seed = 0;
    double tol = 0;
    std::uint64_t cusp_index = 0;
    std::uint64_t isolated = 0;
    std::uint64_t exhausted = 0;
    std::uint64_t continuation_failures = 0;
    std::string first_failure;
    std::uint64_t failures() const { return isolated + exhausted + continuation_failures; }
};

CascadeSweepReport cascade_sweep(std::size_t specs, std::size_t max_n, std::uint64_t seed, double tol = 1e-9);

}  // namespace zpdehn
