#pragma once

// Paired vector families {(v_i, w_i)} and the extraction of a deficient index
// set S with dim span{v_i, w_i : i in S} <= |S| when every transversal
// (u_i in {v_i, w_i}) is linearly dependent. Indices are 0-based.

#include "zpdehn/exactalg.hpp"

#include <optional>
#include <vector>

namespace zpdehn {

struct PairedVectorFamily {
    std::size_t n = 0;
    std::vector<RatVec> v, w;

    PairedVectorFamily() = default;
    PairedVectorFamily(std::vector<RatVec> v_, std::vector<RatVec> w_);
    // Dimension of the ambient space (length of every vector).
    std::size_t dim() const { return n ? v[0].size() : 0; }
};

// Incremental row echelon basis used for independence tests.
class Echelon {
public:
    explicit Echelon(std::size_t dim) : dim_(dim) {}
    // Adds x if it is independent of the current rows; returns whether it was added.
    bool try_add(const RatVec& x);
    bool contains(const RatVec& x) const;
    std::size_t rank() const { return rows_.size(); }

private:
    RatVec reduce(const RatVec& x) const;
    std::size_t dim_;
    std::vector<RatVec> rows_;  // rows_[k] has a leading 1 at pivots_[k]
    std::vector<std::size_t> pivots_;
};

std::size_t span_dimension(const std::vector<RatVec>& vs);

bool all_transversals_dependent(const PairedVectorFamily& fam);

// Coefficients of candidate in the given basis.
RatVec expansion_coefficients(const std::vector<RatVec>& basis, const RatVec& candidate);

bool is_interchangeable(const std::vector<RatVec>& basis, std::size_t index, const RatVec& candidate);

// Whether replacing basis[indices[k]] by replacements[k] for all k at once
// still yields a basis of the same span.
bool batch_replacement_is_basis(const std::vector<RatVec>& basis, const std::vector<std::size_t>& indices,
                                const std::vector<RatVec>& replacements);

// dim span{v_i, w_i : i in S} <= |S|.
bool is_deficient(const PairedVectorFamily& fam, const std::vector<std::size_t>& S);

enum class TransversalSearch { Exhaustive, Greedy };

struct DeficientSubsetTrace {
    std::vector<std::size_t> transversal;  // index set of U, ascending
    std::vector<bool> uses_w;              // per entry of transversal: chosen vector is w
    std::vector<std::size_t> counter;      // index set of U', subset of transversal
    std::vector<std::vector<std::size_t>> levels;  // V_1, V_2, ... as index sets
    std::vector<std::size_t> designated;   // subset the construction designates
    std::vector<std::size_t> result;       // smallest valid candidate returned
};

// Requires all transversals dependent, 2 <= n <= 12. The construction takes a
// maximum independent transversal subfamily U (ties: lexicographically smallest
// index set, v before w), a maximum counter-family U', then grows the levels
// V_1, V_2, ... through interchangeability until a level is empty.
std::optional<std::vector<std::size_t>> find_deficient_subset(const PairedVectorFamily& fam,
                                                              TransversalSearch search = TransversalSearch::Exhaustive,
                                                              DeficientSubsetTrace* trace = nullptr);

// Smallest proper nonempty S (then lexicographic) with the deficiency property; n <= 8.
std::optional<std::vector<std::size_t>> brute_force_deficient_subset(const PairedVectorFamily& fam);

}  // namespace zpdehn
