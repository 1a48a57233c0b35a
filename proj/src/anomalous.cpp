#include "zpdehn/anomalous.hpp"

#include "zpdehn/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <random>
#include <sstream>

namespace zpdehn {

namespace {

std::string join(const std::vector<std::size_t>& xs, std::size_t offset = 1) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i] + offset);
    return s;
}

// Jacobian of rational rows restricted to the given cusps: entry a_rc + b_rc tau_c.
QPolyMatrix restricted_jacobian(const RatMatrix& rows, const std::vector<std::size_t>& cusps, unsigned nvars) {
    QPolyMatrix J(rows.size(), cusps.size(), nvars);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t k = 0; k < cusps.size(); ++k) {
            std::size_t c = cusps[k];
            J.at(r, k) = QPoly::constant(nvars, rows[r][2 * c]) +
                         QPoly::variable(nvars, static_cast<unsigned>(c)) * rows[r][2 * c + 1];
        }
    return J;
}

// Row-reduces so that the rows with pivots on the columns of S come first;
// every later row vanishes on S. Returns the number of leading rows.
std::size_t reduce_on(RatMatrix& R, const std::vector<std::size_t>& S) {
    if (R.empty()) return 0;
    const std::size_t cols = R[0].size();
    std::vector<std::size_t> order;
    for (std::size_t c : S) order.push_back(2 * c), order.push_back(2 * c + 1);
    for (std::size_t j = 0; j < cols; ++j)
        if (std::find(order.begin(), order.end(), j) == order.end()) order.push_back(j);
    RatMatrix P(R.size(), RatVec(cols));
    for (std::size_t r = 0; r < R.size(); ++r)
        for (std::size_t j = 0; j < cols; ++j) P[r][j] = R[r][order[j]];
    auto piv = rref(P);
    std::size_t k = std::count_if(piv.begin(), piv.end(), [&](std::size_t p) { return p < 2 * S.size(); });
    for (std::size_t r = 0; r < R.size(); ++r)
        for (std::size_t j = 0; j < cols; ++j) R[r][order[j]] = P[r][j];
    return k;
}

// Deficient subset (as cusps) of the pairs (a_c, b_c) restricted to the rows, over the given cusps.
std::vector<std::size_t> deficient_cusps(const RatMatrix& rows, const std::vector<std::size_t>& cusps) {
    std::vector<RatVec> v, w;
    for (std::size_t c : cusps) {
        RatVec a, b;
        for (const auto& row : rows) a.push_back(row[2 * c]), b.push_back(row[2 * c + 1]);
        v.push_back(a), w.push_back(b);
    }
    std::optional<std::vector<std::size_t>> S;
    try {
        S = find_deficient_subset(PairedVectorFamily(v, w));
    } catch (const Error& e) {
        throw Error(ErrorKind::CascadeExhausted, std::string("deficient-subset search failed: ") + e.what());
    }
    if (!S) throw Error(ErrorKind::CascadeExhausted, "no deficient subset for cusps {" + join(cusps) + "}");
    std::vector<std::size_t> out;
    for (std::size_t i : *S) out.push_back(cusps[i]);
    return out;
}

std::vector<std::size_t> minus(const std::vector<std::size_t>& C, const std::vector<std::size_t>& S) {
    std::vector<std::size_t> out;
    for (std::size_t c : C)
        if (std::find(S.begin(), S.end(), c) == S.end()) out.push_back(c);
    return out;
}

// Rows vanish outside C and their Jacobian over C has rank < |rows| (or rank < |C|).
// Returns cusps on which u_j = v_j = 0 is forced.
std::vector<std::size_t> cascade(RatMatrix R, std::vector<std::size_t> C, unsigned nvars,
                                 std::vector<CascadeStep>& steps) {
    if (C.empty() || R.empty()) throw Error(ErrorKind::CascadeExhausted, "empty subsystem");
    std::size_t rank = generic_rank(restricted_jacobian(R, C, nvars));
    CascadeStep step;
    step.cusps = C;
    step.rows = R.size();
    if (rank == C.size()) {
        // A(u) u_C = 0 with A(0) of full column rank.
        steps.push_back(step);
        return C;
    }
    if (R.size() > C.size()) {
        rref(R);
        R.resize(C.size());
    }
    if (rank >= R.size())
        throw Error(ErrorKind::CascadeExhausted, "subsystem on cusps {" + join(C) + "} is not rank deficient");

    std::vector<std::size_t> first(C.begin(), C.begin() + static_cast<long>(R.size()));
    std::vector<std::size_t> S = deficient_cusps(R, first);
    std::size_t k = reduce_on(R, S);
    while (true) {
        step.deficient = S;
        step.top_rows = k;
        if (k == 0) break;
        RatMatrix top(R.begin(), R.begin() + static_cast<long>(k));
        if (generic_rank(restricted_jacobian(top, S, nvars)) == k) break;
        std::vector<std::size_t> head(S.begin(), S.begin() + static_cast<long>(k));
        S = deficient_cusps(top, head);
        ++step.refinements;
        k = reduce_on(R, S);
    }
    steps.push_back(step);
    RatMatrix rest(R.begin() + static_cast<long>(k), R.end());
    if (rest.empty()) throw Error(ErrorKind::CascadeExhausted, "no rows left after eliminating cusps {" + join(S) + "}");
    return cascade(rest, minus(C, S), nvars, steps);
}

}  // namespace

SubgroupSpec::SubgroupSpec(std::size_t n, unsigned c, IntMatrix r) : n_cusps(n), copies(c), rows(std::move(r)) {
    if (n == 0 || (copies != 1 && copies != 2)) throw Error(ErrorKind::InvalidArgument, "need n >= 1 and 1 or 2 copies");
    if (rows.cols() != 2 * n * copies)
        throw Error(ErrorKind::InvalidArgument, "subgroup rows need " + std::to_string(2 * n * copies) + " columns");
    if (rank_q(rows) != rows.rows()) throw Error(ErrorKind::InvalidArgument, "subgroup rows are linearly dependent");
}

std::string AnomalyVerdict::to_string() const {
    if (tag == Isolated) return "Isolated(rank " + std::to_string(jacobian_rank) + ")";
    return "Anomalous(rank " + std::to_string(jacobian_rank) + ", deficiency " + std::to_string(deficiency) + ")";
}

std::string CascadeResult::to_string() const {
    if (tag == Isolated) return "Isolated";
    return "CuspIndex " + std::to_string(index) + " (forced {" + join(forced) + "})";
}

std::string ProductClassification::to_string() const {
    std::string s = kind == Isolated ? "Isolated" : kind == OneDimensional ? "OneDimensional" : "TwoDimensional";
    if (cross_wired) s += " cross-wired";
    for (std::size_t i = 0; i < relations.size(); ++i)
        s += " cusp " + std::to_string(related_cusps[i]) + ": " + pair_verdict_name(relations[i]);
    if (!containment.empty()) s += " [" + containment + "]";
    return s;
}

QPolyMatrix jacobian_at_complete(const SubgroupSpec& spec, const std::vector<std::size_t>& sigma) {
    const std::size_t n = spec.n_cusps;
    const unsigned nv = static_cast<unsigned>(n);
    if (!sigma.empty() && sigma.size() != n) throw Error(ErrorKind::InvalidArgument, "sigma must permute the cusps");
    QPolyMatrix J(spec.rows.rows(), spec.variables(), nv);
    for (std::size_t r = 0; r < spec.rows.rows(); ++r)
        for (std::size_t col = 0; col < spec.variables(); ++col) {
            std::size_t cusp = col % n;
            std::size_t shape = col < n || sigma.empty() ? cusp : sigma[cusp];
            J.at(r, col) = QPoly::constant(nv, Rat(spec.rows.at(r, 2 * col))) +
                           QPoly::variable(nv, static_cast<unsigned>(shape)) * Rat(spec.rows.at(r, 2 * col + 1));
        }
    return J;
}

AnomalyVerdict anomaly_verdict(const SubgroupSpec& spec) {
    AnomalyVerdict v;
    v.jacobian_rank = generic_rank(jacobian_at_complete(spec));
    if (v.jacobian_rank == std::min(spec.rows.rows(), spec.variables())) return v;
    v.tag = AnomalyVerdict::Anomalous;
    v.deficiency = spec.rows.rows() - v.jacobian_rank;
    return v;
}

CascadeResult containment_cascade(const SubgroupSpec& spec) {
    if (spec.copies != 1) throw Error(ErrorKind::InvalidArgument, "the cascade runs on single-copy subgroups");
    CascadeResult res;
    if (anomaly_verdict(spec).tag == AnomalyVerdict::Isolated) return res;
    std::vector<std::size_t> C(spec.n_cusps);
    for (std::size_t i = 0; i < C.size(); ++i) C[i] = i;
    res.forced = cascade(spec.rows.to_rat(), C, static_cast<unsigned>(spec.n_cusps), res.steps);
    std::sort(res.forced.begin(), res.forced.end());
    res.tag = CascadeResult::CuspIndex;
    res.index = res.forced.back() + 1;
    return res;
}

bool continuation_check(const SubgroupSpec& spec, const NZPotential& pot, std::size_t cusp_index,
                        const ContinuationOptions& opt, unsigned* samples_taken) {
    using Mat = Eigen::MatrixXcd;
    using Vec = Eigen::VectorXcd;
    if (spec.copies != 1 || pot.n_cusps != spec.n_cusps)
        throw Error(ErrorKind::InvalidArgument, "continuation needs a single-copy spec matching the potential");
    if (cusp_index < 1 || cusp_index > spec.n_cusps) throw Error(ErrorKind::InvalidArgument, "cusp index out of range");
    if (samples_taken) *samples_taken = 0;
    AnomalyVerdict verdict = anomaly_verdict(spec);
    if (verdict.tag == AnomalyVerdict::Isolated) return true;

    const std::size_t n = spec.n_cusps, r = spec.rows.rows();
    Mat Aa(r, n), Ab(r, n);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Aa(i, j) = spec.rows.at(i, 2 * j).get_d();
            Ab(i, j) = spec.rows.at(i, 2 * j + 1).get_d();
        }
    auto to_vec = [](const CVec& x) {
        Vec y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y(i) = x[i];
        return y;
    };
    auto to_cvec = [](const Vec& x) {
        CVec y(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) y[i] = x(i);
        return y;
    };
    auto F = [&](const Vec& u) { return Vec(Aa * u + Ab * to_vec(v_of_u(pot, to_cvec(u)))); };
    auto J = [&](const Vec& u) {
        auto d = dv_du(pot, to_cvec(u));
        Mat D(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) D(i, j) = d[i][j];
        return Mat(Aa + Ab * D);
    };

    const std::size_t rho = verdict.jacobian_rank;
    Eigen::JacobiSVD<Mat> svd0(J(Vec::Zero(n)), Eigen::ComputeFullV);
    Mat K = svd0.matrixV().rightCols(static_cast<Eigen::Index>(n - rho));
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> g;
    Vec coef(K.cols());
    for (Eigen::Index i = 0; i < coef.size(); ++i) coef(i) = Cplx(g(rng), g(rng));
    Vec dir = K * coef;
    dir /= dir.norm();

    Vec u = Vec::Zero(n);
    const std::size_t ci = cusp_index - 1;
    for (unsigned s = 1; s <= opt.samples; ++s) {
        u += dir * (opt.radius / opt.samples);
        bool ok = false;
        for (int it = 0; it < 50; ++it) {
            Vec f = F(u);
            if (f.cwiseAbs().maxCoeff() < 1e-14) {
                ok = true;
                break;
            }
            // Gauss-Newton step with the pseudo-inverse truncated to the generic rank.
            Eigen::JacobiSVD<Mat> svd(J(u), Eigen::ComputeThinU | Eigen::ComputeThinV);
            Vec step = Vec::Zero(n);
            for (std::size_t k = 0; k < rho; ++k) {
                auto kk = static_cast<Eigen::Index>(k);
                step += svd.matrixV().col(kk) * (svd.matrixU().col(kk).adjoint() * f)(0) / svd.singularValues()(kk);
            }
            u -= step;
        }
        if (!ok) throw Error(ErrorKind::NewtonDiverged, "continuation corrector did not converge at sample " + std::to_string(s));
        if (samples_taken) ++*samples_taken;
        Cplx v = v_of_u(pot, to_cvec(u))[ci];
        if (std::abs(u(static_cast<Eigen::Index>(ci))) >= opt.tol || std::abs(v) >= opt.tol) return false;
    }
    return true;
}

ProductClassification product_anomaly_classify(const SubgroupSpec& spec, const std::vector<CoprimePair>& pairs,
                                               const std::vector<CoprimePair>& primed_pairs) {
    if (spec.n_cusps != 2 || spec.copies != 2 || spec.rows.rows() != 4)
        throw Error(ErrorKind::InvalidArgument, "product classification needs two cusps, two copies and four rows");
    if (pairs.size() != 2 || primed_pairs.size() != 2)
        throw Error(ErrorKind::InvalidArgument, "one filling pair per cusp and copy required");

    // Column block of unprimed cusp i is 2i..2i+1, of primed cusp j is 4+2j..4+2j+1.
    auto supported = [&](std::size_t r, std::size_t i, std::size_t j) {
        for (std::size_t c = 0; c < 8; ++c) {
            bool inside = c / 2 == i || c / 2 == 2 + j;
            if (!inside && spec.rows.at(r, c) != 0) return false;
        }
        return true;
    };
    auto try_wiring = [&](std::size_t j0, std::size_t j1, std::vector<std::vector<std::size_t>>& groups) {
        groups.assign(2, {});
        for (std::size_t r = 0; r < 4; ++r) {
            bool in0 = supported(r, 0, j0), in1 = supported(r, 1, j1);
            if (in0 && (!in1 || groups[0].size() < 2)) groups[0].push_back(r);
            else if (in1) groups[1].push_back(r);
            else return false;
        }
        return groups[0].size() == 2 && groups[1].size() == 2;
    };
    std::vector<std::vector<std::size_t>> groups;
    ProductClassification out;
    if (!try_wiring(0, 1, groups)) {
        if (!try_wiring(1, 0, groups))
            throw Error(ErrorKind::ConstraintViolated, "rows do not split into two per-cusp blocks");
        out.cross_wired = true;
    }

    std::vector<CuspBlock> blocks;
    std::vector<std::size_t> primed_of(2);
    for (std::size_t i = 0; i < 2; ++i) {
        std::size_t j = out.cross_wired ? 1 - i : i;
        primed_of[i] = j;
        IntMatrix m(2, 4);
        for (std::size_t k = 0; k < 2; ++k) {
            std::size_t r = groups[i][k];
            m.at(k, 0) = spec.rows.at(r, 2 * i);
            m.at(k, 1) = spec.rows.at(r, 2 * i + 1);
            m.at(k, 2) = spec.rows.at(r, 4 + 2 * j);
            m.at(k, 3) = spec.rows.at(r, 4 + 2 * j + 1);
        }
        blocks.emplace_back(m, out.cross_wired ? TauMode::TwoTau : TauMode::OneTau);
        if (!is_coprime(pairs[i]) || !is_coprime(primed_pairs[j]))
            throw Error(ErrorKind::InvalidArgument, "filling pairs must be coprime");
        if (!pair_constraints_hold(blocks.back(), pairs[i], primed_pairs[j]))
            throw Error(ErrorKind::ConstraintViolated,
                        "block of cusp " + std::to_string(i + 1) + " violates -q a + p b - q' c + p' d = 0");
    }

    if (out.cross_wired) {
        for (std::size_t i = 0; i < 2; ++i)
            if (pairs[i].p == 0 || pairs[i].q == 0 || primed_pairs[i].p == 0 || primed_pairs[i].q == 0)
                throw Error(ErrorKind::ConstraintViolated, "cross-wired classification needs nonzero p, q, p', q'");
        for (const auto& b : blocks)
            if (tau_block_rank(b) != 2)
                throw Error(ErrorKind::InvariantViolation, "cross-wired block with nonzero pairs has tau-rank 1");
        out.kind = ProductClassification::Isolated;
        return out;
    }

    std::vector<std::size_t> low;
    for (std::size_t i = 0; i < 2; ++i)
        if (tau_block_rank(blocks[i]) == 1) low.push_back(i);
    if (low.empty()) throw Error(ErrorKind::NotAnomalous, "both blocks have tau-rank 2");
    std::ostringstream c;
    for (std::size_t i : low) {
        PairVerdict v = dehn_pair_verdict(blocks[i], pairs[i], primed_pairs[primed_of[i]]);
        out.relations.push_back(v);
        out.related_cusps.push_back(i + 1);
        std::string k = std::to_string(i + 1);
        if (c.tellp() > 0) c << ", ";
        if (v == PairVerdict::SamePair) c << "M_" << k << "=M'_" << k << ", L_" << k << "=L'_" << k;
        else c << "M_" << k << "=1/M'_" << k << ", L_" << k << "=1/L'_" << k;
    }
    if (low.size() == 1) {
        std::string k = std::to_string(2 - low[0]);
        c << ", M_" << k << "=M'_" << k << "=L_" << k << "=L'_" << k << "=1";
        out.kind = ProductClassification::OneDimensional;
    } else {
        out.kind = ProductClassification::TwoDimensional;
    }
    out.containment = c.str();
    return out;
}

}  // namespace zpdehn
