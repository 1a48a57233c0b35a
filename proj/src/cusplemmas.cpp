#include "zpdehn/cusplemmas.hpp"

#include "zpdehn/errors.hpp"
#include "zpdehn/parallel.hpp"

#include <numeric>
#include <sstream>

namespace zpdehn {

const char* tau_mode_name(TauMode m) { return m == TauMode::OneTau ? "one-tau" : "two-tau"; }

const char* pair_verdict_name(PairVerdict v) {
    switch (v) {
        case PairVerdict::SamePair: return "SamePair";
        case PairVerdict::NegatedPair: return "NegatedPair";
        case PairVerdict::Impossible: return "Impossible";
    }
    return "?";
}

std::string BlockForm::to_string() const {
    switch (tag) {
        case Proportional: return "Proportional(" + m.get_str() + ")";
        case LeftOnly: return "LeftOnly";
        case RightOnly: return "RightOnly";
        case NoForm: return "NoForm";
    }
    return "?";
}

CuspBlock::CuspBlock(IntMatrix m, TauMode mode) : m_(std::move(m)), mode_(mode) {
    if (m_.rows() != 2 || m_.cols() != 4)
        throw Error(ErrorKind::InvalidArgument, "cusp block must be 2x4");
    rank_q_ = rank_q(m_);
}

bool is_coprime(const CoprimePair& pq) { return std::gcd(pq.p, pq.q) == 1; }

QPolyMatrix tau_matrix(const CuspBlock& block) {
    const unsigned nv = block.mode() == TauMode::OneTau ? 1 : 2;
    const unsigned right = block.mode() == TauMode::OneTau ? 0 : 1;
    QPolyMatrix t(2, 2, nv);
    for (int i = 0; i < 2; ++i) {
        const std::size_t r = static_cast<std::size_t>(i);
        t.at(r, 0) = QPoly::constant(nv, Rat(block.a(i))) + QPoly::variable(nv, 0) * Rat(block.b(i));
        t.at(r, 1) = QPoly::constant(nv, Rat(block.c(i))) + QPoly::variable(nv, right) * Rat(block.d(i));
    }
    return t;
}

std::size_t tau_block_rank(const CuspBlock& block) { return generic_rank(tau_matrix(block)); }

BlockForm syntactic_form(const CuspBlock& block) {
    bool left_zero = true, right_zero = true;
    for (int i = 0; i < 2; ++i) {
        left_zero = left_zero && block.a(i) == 0 && block.b(i) == 0;
        right_zero = right_zero && block.c(i) == 0 && block.d(i) == 0;
    }
    if (left_zero && !right_zero) return {BlockForm::RightOnly, 0};
    if (right_zero && !left_zero) return {BlockForm::LeftOnly, 0};
    if (left_zero || block.mode() == TauMode::TwoTau) return {BlockForm::NoForm, 0};

    // Proportional: a common nonzero m with (c_i, d_i) = m (a_i, b_i).
    Rat m = 0;
    bool have = false;
    for (int i = 0; i < 2 && !have; ++i) {
        if (block.a(i) != 0) {
            m = Rat(block.c(i)) / Rat(block.a(i));
            have = true;
        } else if (block.b(i) != 0) {
            m = Rat(block.d(i)) / Rat(block.b(i));
            have = true;
        }
    }
    if (!have || m == 0) return {BlockForm::NoForm, 0};
    for (int i = 0; i < 2; ++i)
        if (Rat(block.c(i)) != m * Rat(block.a(i)) || Rat(block.d(i)) != m * Rat(block.b(i)))
            return {BlockForm::NoForm, 0};
    return {BlockForm::Proportional, m};
}

BlockForm classify_block(const CuspBlock& block) {
    if (block.rank() != 2)
        throw Error(ErrorKind::RankPreconditionViolated,
                    "block has rank " + std::to_string(block.rank()) + " over Q, expected 2");
    if (tau_block_rank(block) == 2) return {BlockForm::NoForm, 0};
    BlockForm f = syntactic_form(block);
    if (f.tag == BlockForm::NoForm)
        throw Error(ErrorKind::InvariantViolation, "tau-rank 1 block matches no classified form");
    return f;
}

bool pair_constraints_hold(const CuspBlock& block, const CoprimePair& pq, const CoprimePair& pq2) {
    for (int i = 0; i < 2; ++i) {
        BigInt s = -pq.q * block.a(i) + pq.p * block.b(i) - pq2.q * block.c(i) + pq2.p * block.d(i);
        if (s != 0) return false;
    }
    return true;
}

PairVerdict dehn_pair_verdict(const CuspBlock& block, const CoprimePair& pq, const CoprimePair& pq2) {
    if (block.rank() != 2)
        throw Error(ErrorKind::RankPreconditionViolated,
                    "block has rank " + std::to_string(block.rank()) + " over Q, expected 2");
    if (!is_coprime(pq) || !is_coprime(pq2))
        throw Error(ErrorKind::InvalidArgument, "filling pairs must be coprime");
    if (!pair_constraints_hold(block, pq, pq2))
        throw Error(ErrorKind::ConstraintViolated, "-q a + p b - q' c + p' d != 0 for some row");

    BlockForm f = classify_block(block);
    if (f.tag == BlockForm::NoForm) return PairVerdict::Impossible;
    if (f.tag != BlockForm::Proportional)
        throw Error(ErrorKind::InvariantViolation,
                    f.to_string() + " block cannot satisfy the constraints with rank 2");
    // (-q, p) = -m (-q', p'): coprimality forces m = -1 (same pair) or m = 1 (negated pair).
    if (f.m == -1 && pq == pq2) return PairVerdict::SamePair;
    if (f.m == 1 && pq == -pq2) return PairVerdict::NegatedPair;
    throw Error(ErrorKind::InvariantViolation,
                "proportional block with m = " + f.m.get_str() + " inconsistent with the pairs");
}

SweepReport exhaustive_lemma_sweep(int entry_bound, TauMode mode) {
    if (entry_bound < 0 || entry_bound > 3)
        throw Error(ErrorKind::BudgetExceeded, "entry bound must lie in [0, 3]");
    const long base = 2L * entry_bound + 1;
    std::uint64_t total = 1;
    for (int k = 0; k < 8; ++k) total *= static_cast<std::uint64_t>(base);

    auto parts = parallel_chunks<SweepReport>(total, [&](std::size_t, std::size_t b, std::size_t e) {
        SweepReport rep;
        IntMatrix m(2, 4);
        for (std::size_t idx = b; idx < e; ++idx) {
            std::size_t x = idx;
            for (std::size_t k = 0; k < 8; ++k) {
                m.at(k / 4, k % 4) = static_cast<long>(x % static_cast<std::size_t>(base)) - entry_bound;
                x /= static_cast<std::size_t>(base);
            }
            ++rep.candidates;
            CuspBlock block(m, mode);
            if (block.rank() != 2) continue;
            ++rep.rank_two;
            std::size_t tr = tau_block_rank(block);
            BlockForm syn = syntactic_form(block);
            std::string problem;
            BlockForm got;
            try {
                got = classify_block(block);
            } catch (const Error& err) {
                problem = err.what();
            }
            if (problem.empty()) {
                if (tr == 1 && syn.tag == BlockForm::NoForm) problem = "tau-rank 1 without a form";
                else if (tr == 2 && syn.tag != BlockForm::NoForm) problem = "form present but tau-rank 2";
                else if (!(got == syn)) problem = "classified form differs from syntactic form";
            }
            rep.form_counts[static_cast<std::size_t>(got.tag)]++;
            if (!problem.empty()) {
                if (rep.violations++ == 0) {
                    std::ostringstream os;
                    os << problem << " at rows (" << m.at(0, 0) << "," << m.at(0, 1) << "," << m.at(0, 2)
                       << "," << m.at(0, 3) << "),(" << m.at(1, 0) << "," << m.at(1, 1) << ","
                       << m.at(1, 2) << "," << m.at(1, 3) << ")";
                    rep.first_violation = os.str();
                }
            }
        }
        return rep;
    });

    SweepReport out;
    out.entry_bound = entry_bound;
    out.mode = mode;
    for (const auto& p : parts) {
        out.candidates += p.candidates;
        out.rank_two += p.rank_two;
        for (std::size_t k = 0; k < 4; ++k) out.form_counts[k] += p.form_counts[k];
        if (out.violations == 0 && p.violations > 0) out.first_violation = p.first_violation;
        out.violations += p.violations;
    }
    return out;
}

}  // namespace zpdehn
