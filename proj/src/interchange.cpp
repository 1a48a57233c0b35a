#include "zpdehn/interchange.hpp"

#include "zpdehn/errors.hpp"

#include <algorithm>
#include <functional>

namespace zpdehn {

PairedVectorFamily::PairedVectorFamily(std::vector<RatVec> v_, std::vector<RatVec> w_)
    : n(v_.size()), v(std::move(v_)), w(std::move(w_)) {
    if (w.size() != n) throw Error(ErrorKind::InvalidArgument, "v and w lists differ in length");
    for (std::size_t i = 0; i < n; ++i)
        if (v[i].size() != n || w[i].size() != n)
            throw Error(ErrorKind::InvalidArgument, "every vector of a paired family must have length n");
}

RatVec Echelon::reduce(const RatVec& x) const {
    RatVec y = x;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        const Rat f = y[pivots_[k]];
        if (f == 0) continue;
        for (std::size_t j = 0; j < dim_; ++j)
            if (rows_[k][j] != 0) y[j] -= f * rows_[k][j];
    }
    return y;
}

bool Echelon::try_add(const RatVec& x) {
    RatVec y = reduce(x);
    std::size_t p = 0;
    while (p < dim_ && y[p] == 0) ++p;
    if (p == dim_) return false;
    const Rat inv = 1 / y[p];
    for (auto& e : y) e *= inv;
    rows_.push_back(std::move(y));
    pivots_.push_back(p);
    return true;
}

bool Echelon::contains(const RatVec& x) const {
    RatVec y = reduce(x);
    return std::all_of(y.begin(), y.end(), [](const Rat& e) { return e == 0; });
}

std::size_t span_dimension(const std::vector<RatVec>& vs) {
    if (vs.empty()) return 0;
    Echelon e(vs[0].size());
    for (const auto& x : vs) e.try_add(x);
    return e.rank();
}

bool all_transversals_dependent(const PairedVectorFamily& fam) {
    if (fam.n > 20) throw Error(ErrorKind::BudgetExceeded, "transversal enumeration limited to n <= 20");
    // Depth-first over selections; a dependent prefix prunes its whole subtree.
    std::function<bool(std::size_t, const Echelon&)> independent_completion = [&](std::size_t i,
                                                                                 const Echelon& ech) {
        if (i == fam.n) return true;
        for (const RatVec* u : {&fam.v[i], &fam.w[i]}) {
            Echelon next = ech;
            if (next.try_add(*u) && independent_completion(i + 1, next)) return true;
        }
        return false;
    };
    return !independent_completion(0, Echelon(fam.dim()));
}

RatVec expansion_coefficients(const std::vector<RatVec>& basis, const RatVec& candidate) {
    const std::size_t k = basis.size(), d = candidate.size();
    // Solve sum_j c_j basis[j] = candidate via RREF of the augmented system.
    RatMatrix a(d, RatVec(k + 1));
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t j = 0; j < k; ++j) a[r][j] = basis[j].at(r);
        a[r][k] = candidate[r];
    }
    auto piv = rref(a);
    std::size_t basis_rank = 0;
    for (auto p : piv) {
        if (p == k) throw Error(ErrorKind::NotInSpan, "candidate lies outside the span of the basis");
        ++basis_rank;
    }
    if (basis_rank < k) throw Error(ErrorKind::NotABasis, "basis vectors are linearly dependent");
    RatVec c(k);
    for (std::size_t r = 0; r < piv.size(); ++r) c[piv[r]] = a[r][k];
    return c;
}

bool is_interchangeable(const std::vector<RatVec>& basis, std::size_t index, const RatVec& candidate) {
    if (index >= basis.size()) throw Error(ErrorKind::InvalidArgument, "index out of range");
    return expansion_coefficients(basis, candidate)[index] != 0;
}

bool batch_replacement_is_basis(const std::vector<RatVec>& basis, const std::vector<std::size_t>& indices,
                                const std::vector<RatVec>& replacements) {
    if (indices.size() != replacements.size())
        throw Error(ErrorKind::InvalidArgument, "indices and replacements differ in length");
    if (span_dimension(basis) != basis.size()) throw Error(ErrorKind::NotABasis, "basis is dependent");
    std::vector<RatVec> out = basis;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        expansion_coefficients(basis, replacements[k]);  // span membership check
        out.at(indices[k]) = replacements[k];
    }
    return span_dimension(out) == basis.size();
}

bool is_deficient(const PairedVectorFamily& fam, const std::vector<std::size_t>& S) {
    std::vector<RatVec> vs;
    for (auto i : S) {
        vs.push_back(fam.v.at(i));
        vs.push_back(fam.w.at(i));
    }
    return span_dimension(vs) <= S.size();
}

namespace {

// Next k-combination of {0..n-1} in lexicographic order.
bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
    const std::size_t k = c.size();
    for (std::size_t i = k; i-- > 0;) {
        if (c[i] < n - k + i) {
            ++c[i];
            for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::vector<std::size_t> first_combination(std::size_t k) {
    std::vector<std::size_t> c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = i;
    return c;
}

// Lexicographically first v/w choice on `idx` (v before w) keeping `base` plus
// the chosen vectors independent; empty optional when none exists.
std::optional<std::vector<bool>> first_independent_choice(const PairedVectorFamily& fam,
                                                          const std::vector<std::size_t>& idx,
                                                          const Echelon& base) {
    std::vector<bool> choice(idx.size());
    std::function<bool(std::size_t, const Echelon&)> go = [&](std::size_t k, const Echelon& ech) {
        if (k == idx.size()) return true;
        for (bool use_w : {false, true}) {
            Echelon next = ech;
            if (next.try_add(use_w ? fam.w[idx[k]] : fam.v[idx[k]])) {
                choice[k] = use_w;
                if (go(k + 1, next)) return true;
            }
        }
        return false;
    };
    if (!go(0, base)) return std::nullopt;
    return choice;
}

struct Transversal {
    std::vector<std::size_t> idx;
    std::vector<bool> uses_w;
};

Transversal max_transversal(const PairedVectorFamily& fam, TransversalSearch search) {
    Transversal t;
    if (search == TransversalSearch::Greedy) {
        Echelon ech(fam.dim());
        for (std::size_t i = 0; i < fam.n; ++i) {
            if (ech.try_add(fam.v[i])) {
                t.idx.push_back(i);
                t.uses_w.push_back(false);
            } else if (ech.try_add(fam.w[i])) {
                t.idx.push_back(i);
                t.uses_w.push_back(true);
            }
        }
        return t;
    }
    std::size_t best = 0;
    std::function<void(std::size_t, const Echelon&, std::size_t)> dfs = [&](std::size_t i, const Echelon& ech,
                                                                           std::size_t size) {
        if (size + (fam.n - i) <= best) return;
        if (i == fam.n) {
            best = size;
            return;
        }
        for (const RatVec* u : {&fam.v[i], &fam.w[i]}) {
            Echelon next = ech;
            if (next.try_add(*u)) dfs(i + 1, next, size + 1);
        }
        dfs(i + 1, ech, size);
    };
    dfs(0, Echelon(fam.dim()), 0);
    if (best == 0) return t;
    auto comb = first_combination(best);
    do {
        if (auto ch = first_independent_choice(fam, comb, Echelon(fam.dim()))) {
            t.idx = comb;
            t.uses_w = *ch;
            return t;
        }
    } while (next_combination(comb, fam.n));
    throw Error(ErrorKind::InvariantViolation, "maximum transversal vanished on re-search");
}

const RatVec& primary(const PairedVectorFamily& fam, std::size_t i, bool uses_w) {
    return uses_w ? fam.w[i] : fam.v[i];
}

const RatVec& counterpart(const PairedVectorFamily& fam, std::size_t i, bool uses_w) {
    return uses_w ? fam.v[i] : fam.w[i];
}

// Maximum J within the transversal such that U together with the counter vectors
// of J stays independent; ties broken lexicographically.
std::vector<std::size_t> max_counter_family(const PairedVectorFamily& fam, const Transversal& t,
                                            TransversalSearch search) {
    const std::size_t h = t.idx.size();
    Echelon base(fam.dim());
    for (std::size_t k = 0; k < h; ++k) base.try_add(primary(fam, t.idx[k], t.uses_w[k]));
    auto counters_ok = [&](const std::vector<std::size_t>& pos) {
        Echelon e = base;
        for (auto k : pos)
            if (!e.try_add(counterpart(fam, t.idx[k], t.uses_w[k]))) return false;
        return true;
    };
    std::vector<std::size_t> pos_best;
    if (search == TransversalSearch::Greedy) {
        Echelon e = base;
        for (std::size_t k = 0; k < h; ++k)
            if (e.try_add(counterpart(fam, t.idx[k], t.uses_w[k]))) pos_best.push_back(k);
    } else {
        std::size_t best = 0;
        std::function<void(std::size_t, const Echelon&, std::size_t)> dfs = [&](std::size_t k, const Echelon& ech,
                                                                               std::size_t size) {
            if (size + (h - k) <= best) return;
            if (k == h) {
                best = size;
                return;
            }
            Echelon next = ech;
            if (next.try_add(counterpart(fam, t.idx[k], t.uses_w[k]))) dfs(k + 1, next, size + 1);
            dfs(k + 1, ech, size);
        };
        dfs(0, base, 0);
        if (best > 0) {
            auto comb = first_combination(best);
            do {
                if (counters_ok(comb)) {
                    pos_best = comb;
                    break;
                }
            } while (next_combination(comb, h));
        }
    }
    std::vector<std::size_t> J;
    for (auto k : pos_best) J.push_back(t.idx[k]);
    return J;
}

}  // namespace

std::optional<std::vector<std::size_t>> find_deficient_subset(const PairedVectorFamily& fam,
                                                              TransversalSearch search,
                                                              DeficientSubsetTrace* trace) {
    if (fam.n < 2) throw Error(ErrorKind::InvalidArgument, "deficient subsets need n >= 2");
    if (fam.n > 12) throw Error(ErrorKind::BudgetExceeded, "deficient subset search limited to n <= 12");

    const Transversal t = max_transversal(fam, search);
    if (t.idx.size() == fam.n)
        throw Error(ErrorKind::HypothesisViolated, "an independent transversal exists");
    const std::vector<std::size_t> J = max_counter_family(fam, t, search);

    std::vector<bool> in_u(fam.n, false), in_j(fam.n, false), uses_w(fam.n, false);
    for (std::size_t k = 0; k < t.idx.size(); ++k) {
        in_u[t.idx[k]] = true;
        uses_w[t.idx[k]] = t.uses_w[k];
    }
    for (auto j : J) in_j[j] = true;

    std::vector<std::size_t> outside;  // indices not in U
    for (std::size_t i = 0; i < fam.n; ++i)
        if (!in_u[i]) outside.push_back(i);

    std::vector<std::vector<std::size_t>> levels;
    std::vector<std::size_t> designated;
    if (J.size() == t.idx.size()) {
        designated = outside;
    } else {
        // Basis of the span of the primary vectors indexed by U \ U'.
        std::vector<std::size_t> free_idx;
        std::vector<RatVec> basis;
        for (auto i : t.idx)
            if (!in_j[i]) {
                free_idx.push_back(i);
                basis.push_back(primary(fam, i, uses_w[i]));
            }
        auto coeffs = [&](const RatVec& x) {
            try {
                return expansion_coefficients(basis, x);
            } catch (const Error&) {
                throw Error(ErrorKind::InvariantViolation,
                            "vector expected in the span of the free transversal vectors is not");
            }
        };
        std::vector<bool> used(free_idx.size(), false);
        std::vector<RatVec> sources;
        for (auto i : outside) {
            sources.push_back(fam.v[i]);
            sources.push_back(fam.w[i]);
        }
        while (true) {
            std::vector<std::size_t> level;
            std::vector<bool> hit(free_idx.size(), false);
            for (const auto& x : sources) {
                RatVec c = coeffs(x);
                for (std::size_t k = 0; k < free_idx.size(); ++k)
                    if (!used[k] && c[k] != 0) hit[k] = true;
            }
            for (std::size_t k = 0; k < free_idx.size(); ++k)
                if (hit[k]) {
                    used[k] = true;
                    level.push_back(free_idx[k]);
                }
            if (level.empty()) break;
            sources.clear();
            for (auto i : level) sources.push_back(counterpart(fam, i, uses_w[i]));
            levels.push_back(level);
        }
        if (levels.empty()) {
            designated = outside;
        } else {
            for (const auto& lv : levels) designated.insert(designated.end(), lv.begin(), lv.end());
            std::sort(designated.begin(), designated.end());
        }
    }

    if (!is_deficient(fam, designated))
        throw Error(ErrorKind::InvariantViolation, "designated subset fails the dimension check");

    // Among the subsets the construction certifies, prefer the smaller one.
    std::vector<std::size_t> result = designated;
    if (outside.size() < result.size() && is_deficient(fam, outside)) result = outside;

    if (trace) {
        trace->transversal = t.idx;
        trace->uses_w = t.uses_w;
        trace->counter = J;
        trace->levels = levels;
        trace->designated = designated;
        trace->result = result;
    }
    return result;
}

std::optional<std::vector<std::size_t>> brute_force_deficient_subset(const PairedVectorFamily& fam) {
    if (fam.n > 8) throw Error(ErrorKind::BudgetExceeded, "brute-force search limited to n <= 8");
    for (std::size_t s = 1; s < fam.n; ++s) {
        auto comb = first_combination(s);
        do {
            if (is_deficient(fam, comb)) return comb;
        } while (next_combination(comb, fam.n));
    }
    return std::nullopt;
}

}  // namespace zpdehn
