#pragma once

// Algebraic subgroups of the holonomy torus, their Jacobians at the complete
// structure, anomaly verdicts and the containment cascade.
//
// Row r of a subgroup is the monomial prod_j M_j^{a_rj} L_j^{b_rj} = 1. In
// logarithmic coordinates it reads sum_j a_rj u_j + b_rj v_j = 0, and at the
// complete structure v_j = tau_j u_j + O(u^3), so the Jacobian entry is
// a_rj + b_rj tau_j. Cusp indices are 0-based; CuspIndex::index is 1-based.

#include "zpdehn/cusplemmas.hpp"
#include "zpdehn/exactalg.hpp"
#include "zpdehn/interchange.hpp"
#include "zpdehn/nzdehn.hpp"

#include <optional>
#include <string>
#include <vector>

namespace zpdehn {

struct SubgroupSpec {
    std::size_t n_cusps = 0;
    unsigned copies = 1;  // 1 for X, 2 for X x X
    IntMatrix rows;       // columns (a_1, b_1, ..., a_n, b_n[, a'_1, ..., b'_n])

    SubgroupSpec() = default;
    // Throws InvalidArgument on a column count mismatch or dependent rows.
    SubgroupSpec(std::size_t n, unsigned copies, IntMatrix rows);
    std::size_t variables() const { return n_cusps * copies; }
};

struct AnomalyVerdict {
    enum Tag { Isolated, Anomalous } tag = Isolated;
    std::size_t jacobian_rank = 0;
    std::size_t deficiency = 0;  // row count - rank when Anomalous
    std::string to_string() const;
};

// Entry (r, j) = a_rj + b_rj tau_{shape(j)} over Q(tau_1..tau_n). Primed cusp j
// uses tau_{sigma[j]}; sigma defaults to the identity (tau'_j = tau_j).
QPolyMatrix jacobian_at_complete(const SubgroupSpec& spec, const std::vector<std::size_t>& sigma = {});

// Isolated iff the generic rank equals min(rows, variables): below that the
// component through the complete structure has more than the expected dimension.
AnomalyVerdict anomaly_verdict(const SubgroupSpec& spec);

struct CascadeStep {
    std::vector<std::size_t> cusps;   // cusps of the current subsystem
    std::size_t rows = 0;
    std::vector<std::size_t> deficient;  // subset returned by the deficient-subset search
    std::size_t top_rows = 0;            // rows left nonzero on that subset
    unsigned refinements = 0;            // repeated searches inside the top block
};

struct CascadeResult {
    enum Tag { Isolated, CuspIndex } tag = Isolated;
    std::size_t index = 0;              // 1-based cusp index when CuspIndex
    std::vector<std::size_t> forced;    // 0-based cusps with u_j = v_j = 0 on the component
    std::vector<CascadeStep> steps;
    std::string to_string() const;
};

// Requires copies = 1. Throws CascadeExhausted when the recursion cannot certify a cusp.
CascadeResult containment_cascade(const SubgroupSpec& spec);

struct ContinuationOptions {
    unsigned samples = 8;
    double radius = 0.1;
    double tol = 1e-9;
    std::uint64_t seed = 0;
};

// Traces the solution set of A_a u + A_b v(u) = 0 from u = 0 along a random
// kernel direction of the Jacobian and checks |u_i|, |v_i| < tol at every sample
// (cusp_index 1-based). Isolated specs return true without sampling.
bool continuation_check(const SubgroupSpec& spec, const NZPotential& pot, std::size_t cusp_index,
                        const ContinuationOptions& opt = {}, unsigned* samples_taken = nullptr);

struct ProductClassification {
    enum Kind { OneDimensional, TwoDimensional, Isolated } kind = Isolated;
    bool cross_wired = false;
    std::vector<PairVerdict> relations;   // per straight block with tau-rank 1, in cusp order
    std::vector<std::size_t> related_cusps;  // 1-based cusps of those blocks
    std::string containment;
    std::string to_string() const;
};

// Two cusps, two copies. Rows must split into two 2-row blocks, each supported
// on one unprimed and one primed cusp.
ProductClassification product_anomaly_classify(const SubgroupSpec& spec, const std::vector<CoprimePair>& pairs,
                                               const std::vector<CoprimePair>& primed_pairs);

}  // namespace zpdehn
