#pragma once

// Rank classification of 2x4 cusp blocks with rows (a_i, b_i, c_i, d_i).
//
// One-shape mode uses the tau-matrix [[a1+b1 t, c1+d1 t], [a2+b2 t, c2+d2 t]],
// two-shape mode [[a1+b1 t1, c1+d1 t2], [a2+b2 t1, c2+d2 t2]]. A rank-2 integer
// block has tau-rank 1 exactly when it has one of the forms
//   Proportional(m): (c_i, d_i) = m (a_i, b_i) for both rows  (one-shape only)
//   LeftOnly:        c_i = d_i = 0
//   RightOnly:       a_i = b_i = 0

#include "zpdehn/exactalg.hpp"

#include <array>
#include <cstdint>
#include <string>

namespace zpdehn {

enum class TauMode { OneTau, TwoTau };

const char* tau_mode_name(TauMode m);

class CuspBlock {
public:
    CuspBlock(IntMatrix m, TauMode mode);
    const IntMatrix& matrix() const { return m_; }
    TauMode mode() const { return mode_; }
    std::size_t rank() const { return rank_q_; }
    const BigInt& a(int i) const { return m_.at(static_cast<std::size_t>(i), 0); }
    const BigInt& b(int i) const { return m_.at(static_cast<std::size_t>(i), 1); }
    const BigInt& c(int i) const { return m_.at(static_cast<std::size_t>(i), 2); }
    const BigInt& d(int i) const { return m_.at(static_cast<std::size_t>(i), 3); }

private:
    IntMatrix m_;
    TauMode mode_;
    std::size_t rank_q_;
};

struct BlockForm {
    enum Tag { Proportional, LeftOnly, RightOnly, NoForm };
    Tag tag = NoForm;
    Rat m = 0;  // nonzero iff tag == Proportional

    bool operator==(const BlockForm& o) const { return tag == o.tag && m == o.m; }
    std::string to_string() const;
};

struct CoprimePair {
    long p = 0, q = 0;
    bool operator==(const CoprimePair& o) const { return p == o.p && q == o.q; }
    CoprimePair operator-() const { return {-p, -q}; }
};

bool is_coprime(const CoprimePair& pq);

enum class PairVerdict { SamePair, NegatedPair, Impossible };

const char* pair_verdict_name(PairVerdict v);

QPolyMatrix tau_matrix(const CuspBlock& block);
std::size_t tau_block_rank(const CuspBlock& block);

// Form read off the integer entries alone, without any rank computation.
BlockForm syntactic_form(const CuspBlock& block);

// Requires rank_q = 2. NoForm when tau-rank is 2; otherwise the matching form.
BlockForm classify_block(const CuspBlock& block);

// One-shape, tau-rank 1: SamePair when (p,q) = (p',q'), NegatedPair when
// (p,q) = -(p',q'). Tau-rank 2 (either mode): Impossible.
// Requires rank_q = 2, coprime pairs and the constraints
//   -q a_i + p b_i - q' c_i + p' d_i = 0,  i = 1, 2.
PairVerdict dehn_pair_verdict(const CuspBlock& block, const CoprimePair& pq, const CoprimePair& pq2);

bool pair_constraints_hold(const CuspBlock& block, const CoprimePair& pq, const CoprimePair& pq2);

struct SweepReport {
    int entry_bound = 0;
    TauMode mode = TauMode::OneTau;
    std::uint64_t candidates = 0;
    std::uint64_t rank_two = 0;
    std::array<std::uint64_t, 4> form_counts{};  // indexed by BlockForm::Tag
    std::uint64_t violations = 0;
    std::string first_violation;
};

// Enumerates all 2x4 integer matrices with entries in [-bound, bound] of rank 2
// and checks: tau-rank 1 <=> a form applies, and the classified form is the
// syntactic one. entry_bound <= 3.
SweepReport exhaustive_lemma_sweep(int entry_bound, TauMode mode);

}  // namespace zpdehn
