#include "report.hpp"

#include "zpdehn/anomalous.hpp"
#include "zpdehn/cusplemmas.hpp"
#include "zpdehn/errors.hpp"
#include "zpdehn/heights.hpp"
#include "zpdehn/lattice.hpp"
#include "zpdehn/nzdehn.hpp"
#include "zpdehn/sweeps.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace zpdehn;
using cli::Format;
using cli::Report;

namespace {

// Exit 1 is reserved for mathematical invariants found violated.
constexpr int kExitOk = 0, kExitViolation = 1, kExitUsage = 2;

struct Options {
    std::string manifold, coeff, out, format = "text";
    std::string lemma, mode = "one-tau", rows, poly, forms, numbers, height = "log:2", branch = "plus";
    int bound = -1;
    double tol = 1e-8;
    std::optional<std::uint64_t> seed;
    unsigned precision = 256, root = 0, degree = 2, samples = 0, max_n = 0;
    bool include_trivial = false;
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string fmt(const Cplx& z) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.15g%+.15gi", z.real(), z.imag());
    return buf;
}

std::string fmt(const HighComplex& z, unsigned digits) {
    std::string re = z.real().str(digits, std::ios_base::scientific);
    std::string im = z.imag().str(digits, std::ios_base::scientific);
    return re + (im[0] == '-' ? "" : "+") + im + "i";
}

std::string fmt_vec(const IntVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
    return s + ")";
}

std::string fmt_coeff(const FillingCoefficient& fc) {
    std::string s;
    for (std::size_t i = 0; i < fc.size(); ++i) s += (i ? "," : "") + fc[i].to_string();
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

long parse_long(const std::string& tok, const std::string& what) {
    try {
        std::size_t pos = 0;
        long v = std::stol(tok, &pos);
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, what + ": expected an integer, got '" + tok + "'");
    }
}

// "a,b,c;d,e,f" -> rows of an integer matrix
IntMatrix parse_rows(const std::string& s, const std::string& what) {
    if (s.empty()) throw Error(ErrorKind::ParseError, what + " is required");
    std::vector<IntVec> rows;
    for (const auto& r : split(s, ';')) {
        IntVec row;
        for (const auto& tok : split(r, ',')) row.emplace_back(parse_long(tok, what));
        if (!rows.empty() && row.size() != rows[0].size())
            throw Error(ErrorKind::ParseError, what + ": rows have different lengths");
        rows.push_back(row);
    }
    return IntMatrix::from_rows(rows, rows[0].size());
}

CoprimePair parse_pair(const std::string& tok) {
    auto parts = split(tok, '/');
    if (parts.size() != 2) throw Error(ErrorKind::ParseError, "--coeff: expected p/q, got '" + tok + "'");
    return {parse_long(parts[0], "--coeff"), parse_long(parts[1], "--coeff")};
}

FillingCoefficient parse_filling(const std::string& s, std::size_t cusps) {
    if (s.empty()) throw Error(ErrorKind::ParseError, "--coeff is required");
    FillingCoefficient fc;
    for (const auto& tok : split(s, ',')) {
        auto pq = parse_pair(tok);
        fc.push_back(make_filling(pq.p, pq.q));
    }
    if (fc.size() != cusps)
        throw Error(ErrorKind::ParseError, "--coeff: " + std::to_string(fc.size()) + " slopes for " +
                                               std::to_string(cusps) + " cusps");
    return fc;
}

// "re" or "re:im" per entry, read exactly into the working precision
std::vector<HighComplex> parse_numbers(const std::string& s) {
    std::vector<HighComplex> out;
    for (const auto& tok : split(s, ',')) {
        auto parts = split(tok, ':');
        if (parts.empty() || parts.size() > 2) throw Error(ErrorKind::ParseError, "--numbers: bad entry '" + tok + "'");
        try {
            HighReal re(parts[0]), im(parts.size() == 2 ? parts[1] : "0");
            out.emplace_back(re, im);
        } catch (const std::exception&) {
            throw Error(ErrorKind::ParseError, "--numbers: bad entry '" + tok + "'");
        }
    }
    return out;
}

double parse_height(const std::string& s) {
    if (s.rfind("log:", 0) == 0) {
        double x = std::stod(s.substr(4));
        if (!(x >= 1)) throw Error(ErrorKind::ParseError, "--height: log argument must be at least 1");
        return std::log(x);
    }
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, "--height: expected a number or log:N, got '" + s + "'");
    }
}

TauMode parse_mode(const std::string& s) {
    if (s == "one-tau") return TauMode::OneTau;
    if (s == "two-tau") return TauMode::TwoTau;
    throw Error(ErrorKind::ParseError, "--mode: expected one-tau or two-tau, got '" + s + "'");
}

std::uint64_t require_seed(const Options& o, const std::string& what) {
    if (!o.seed) throw Error(ErrorKind::InvalidArgument, what + " is randomized and needs --seed");
    return *o.seed;
}

struct Outcome {
    Report report;
    bool violation = false;
};

Outcome run_lemma_sweep(const Options& o) {
    Outcome out;
    Report& r = out.report;
    r.command = "lemma-sweep";
    r.set("lemma", o.lemma);
    std::uint64_t violations = 0;
    if (o.lemma == "block-classify") {
        int bound = o.bound < 0 ? 2 : o.bound;
        TauMode mode = parse_mode(o.mode);
        r.set("bound", std::to_string(bound));
        r.set("mode", o.mode);
        auto s = exhaustive_lemma_sweep(bound, mode);
        r.add("candidates", std::to_string(s.candidates));
        r.add("rank two", std::to_string(s.rank_two));
        const char* names[] = {"proportional", "left-only", "right-only", "no form"};
        for (std::size_t i = 0; i < 4; ++i) r.add(std::string("form ") + names[i], std::to_string(s.form_counts[i]));
        violations = s.violations;
        if (violations) r.add("first violation", s.first_violation);
    } else if (o.lemma == "dehn-pairs") {
        int bound = o.bound < 0 ? 8 : o.bound;
        std::size_t samples = o.samples ? o.samples : 10000;
        auto seed = require_seed(o, "dehn-pairs");
        r.set("bound", std::to_string(bound));
        r.set("samples", std::to_string(samples));
        r.set("seed", std::to_string(seed));
        auto s = dehn_pair_sweep(bound, samples, seed);
        r.add("pair combinations", std::to_string(s.pair_combinations));
        r.add("one-tau rank one", std::to_string(s.one_tau_rank_one));
        r.add("two-tau checked", std::to_string(s.two_tau_checked));
        violations = s.violations;
        if (violations) r.add("first violation", s.first_violation);
    } else if (o.lemma == "deficient-subset") {
        std::size_t samples = o.samples ? o.samples : 1000, max_n = o.max_n ? o.max_n : 6;
        auto seed = require_seed(o, "deficient-subset");
        r.set("samples", std::to_string(samples));
        r.set("max-n", std::to_string(max_n));
        r.set("seed", std::to_string(seed));
        auto s = deficient_subset_sweep(samples, max_n, seed);
        r.add("constructed", std::to_string(s.constructed));
        r.add("brute force confirmed", std::to_string(s.brute_force_confirmed));
        violations = s.failures;
        if (violations) r.add("first violation", s.first_failure);
    } else if (o.lemma == "cascade") {
        std::size_t samples = o.samples ? o.samples : 10000, max_n = o.max_n ? o.max_n : 3;
        auto seed = require_seed(o, "cascade");
        r.set("samples", std::to_string(samples));
        r.set("max-n", std::to_string(max_n));
        r.set("seed", std::to_string(seed));
        r.set("tol", fmt(o.tol));
        auto s = cascade_sweep(samples, max_n, seed, o.tol);
        r.add("cusp index", std::to_string(s.cusp_index));
        r.add("isolated", std::to_string(s.isolated));
        r.add("exhausted", std::to_string(s.exhausted));
        r.add("continuation failures", std::to_string(s.continuation_failures));
        violations = s.failures();
        if (violations) r.add("first violation", s.first_failure);
    } else {
        throw Error(ErrorKind::InvalidArgument,
                    "--lemma: expected block-classify, dehn-pairs, deficient-subset or cascade, got '" + o.lemma + "'");
    }
    r.add("violations", std::to_string(violations));
    out.violation = violations > 0;
    return out;
}

Outcome run_classify(const Options& o) {
    Outcome out;
    Report& r = out.report;
    r.command = "classify";
    IntMatrix m = parse_rows(o.rows, "--rows");
    if (m.rows() != 2 || m.cols() != 4) throw Error(ErrorKind::InvalidArgument, "--rows: a block is 2 rows of 4 entries");
    TauMode mode = parse_mode(o.mode);
    r.set("rows", o.rows);
    r.set("mode", o.mode);
    CuspBlock block(m, mode);
    r.add("rank", std::to_string(block.rank()));
    r.add("tau rank", std::to_string(tau_block_rank(block)));
    if (block.rank() == 2) r.add("form", classify_block(block).to_string());
    if (!o.coeff.empty()) {
        auto parts = split(o.coeff, ',');
        if (parts.size() != 2) throw Error(ErrorKind::ParseError, "--coeff: classify takes two pairs p/q,p'/q'");
        auto a = parse_pair(parts[0]), b = parse_pair(parts[1]);
        r.set("coeff", o.coeff);
        r.add("constraints hold", pair_constraints_hold(block, a, b) ? "yes" : "no");
        r.add("pair verdict", pair_verdict_name(dehn_pair_verdict(block, a, b)));
    }
    return out;
}

Outcome run_cascade(const Options& o) {
    Outcome out;
    Report& r = out.report;
    r.command = "cascade";
    IntMatrix m = parse_rows(o.rows, "--rows");
    if (m.cols() % 2) throw Error(ErrorKind::InvalidArgument, "--rows: need (a, b) pairs, an even column count");
    std::size_t n = m.cols() / 2;
    r.set("rows", o.rows);
    SubgroupSpec spec(n, 1, m);
    auto verdict = anomaly_verdict(spec);
    r.add("verdict", verdict.to_string());
    auto c = containment_cascade(spec);
    r.add("cascade", c.to_string());
    r.columns = {"step", "cusps", "rows", "deficient", "top rows", "refinements"};
    for (std::size_t i = 0; i < c.steps.size(); ++i) {
        const auto& s = c.steps[i];
        auto list = [](const std::vector<std::size_t>& v) {
            std::string t;
            for (std::size_t j = 0; j < v.size(); ++j) t += (j ? " " : "") + std::to_string(v[j] + 1);
            return t;
        };
        r.rows.push_back({std::to_string(i + 1), list(s.cusps), std::to_string(s.rows), list(s.deficient),
                          std::to_string(s.top_rows), std::to_string(s.refinements)});
    }
    if (o.seed && c.tag == CascadeResult::CuspIndex) {
        r.set("seed", std::to_string(*o.seed));
        r.set("tol", fmt(o.tol));
        ContinuationOptions opt;
        opt.seed = *o.seed;
        opt.tol = o.tol;
        bool ok = continuation_check(spec, synth_potential(*o.seed, n), c.index, opt);
        r.add("continuation check", ok ? "pass" : "fail");
        out.violation = !ok;
    }
    return out;
}

Outcome run_height(const Options& o) {
    Outcome out;
    Report& r = out.report;
    r.command = "height";
    if (o.poly.empty()) throw Error(ErrorKind::ParseError, "--poly is required");
    r.set("poly", o.poly);
    r.set("root", std::to_string(o.root));
    r.set("precision", std::to_string(o.precision));
    auto a = AlgebraicNumber::from_minpoly(parse_coefficients(o.poly), o.root, o.precision);
    auto h = weil_height(a);
    r.add("number", a.to_string());
    r.add("degree", std::to_string(a.degree()));
    r.add("value", fmt(a.approx()));
    r.add("height", fmt(h.value));
    r.add("error bound", fmt(h.error_bound));
    if (a.irreducibility_trusted) r.add("note", "irreducibility not checked above degree 6");
    r.columns = {"index", "conjugate"};
    auto conj = conjugates(a);
    for (std::size_t i = 0; i < conj.size(); ++i) r.rows.push_back({std::to_string(i), fmt(conj[i])});
    return out;
}

Outcome run_northcott(const Options& o) {
    Outcome out;
    Report& r = out.report;
    r.command = "northcott";
    double h = parse_height(o.height);
    r.set("height", o.height);
    r.set("degree", std::to_string(o.degree));
    auto xs = northcott_enumerate(h, o.degree);
    r.add("count", std::to_string(xs.size()));
    r.columns = {"minpoly", "root", "value", "height"};
    for (const auto& a : xs)
        r.rows.push_back({poly_to_string(a.minpoly), std::to_string(a.root_index), fmt(a.approx()), fmt(weil_height(a).value)});
    return out;
}

Outcome run_siegel(const Options& o) {
    Outcome out;
    Report& r = out.report;
    r.command = "siegel";
    IntMatrix forms = parse_rows(o.forms, "--forms");
    r.set("forms", o.forms);
    auto s = siegel_basis(forms);
    r.add("rank", std::to_string(s.basis.vectors.size()));
    r.add("ratio", fmt(s.ratio));
    r.add("lll bound", fmt(lll_product_bound(s.basis.vectors.size())));
    r.columns = {"vector", "norm"};
    for (std::size_t i = 0; i < s.basis.vectors.size(); ++i)
        r.rows.push_back({fmt_vec(s.basis.vectors[i]), fmt(s.basis.norms[i])});
    return out;
}

Branch parse_branch(const std::string& s) {
    if (s == "plus") return Branch::Plus;
    if (s == "minus") return Branch::Minus;
    throw Error(ErrorKind::ParseError, "--branch: expected plus or minus, got '" + s + "'");
}

Outcome run_multrel(const Options& o) {
    Outcome out;
    Report& r = out.report;
    r.command = "multrel";
    long bound = o.bound < 0 ? 10 : o.bound;
    std::vector<HighComplex> xs;
    if (!o.numbers.empty()) {
        r.set("numbers", o.numbers);
        xs = parse_numbers(o.numbers);
    } else if (!o.manifold.empty()) {
        auto pot = read_manifold(o.manifold);
        auto fc = parse_filling(o.coeff, pot.n_cusps);
        r.set("manifold", o.manifold);
        r.set("coeff", fmt_coeff(fc));
        r.set("branch", o.branch);
        SolveOptions opt;
        opt.branch = parse_branch(o.branch);
        xs = solve_filling_high(pot, fc, opt).t;
    } else {
        throw Error(ErrorKind::ParseError, "multrel needs --numbers or --manifold with --coeff");
    }
    r.set("bound", std::to_string(bound));
    r.set("precision", std::to_string(o.precision));
    auto rel = find_multiplicative_relation(xs, bound, o.precision);
    if (rel) {
        r.add("relation", fmt_vec(rel->exponents));
        r.add("residual", fmt(rel->residual));
    } else {
        r.add("relation", "none");
    }
    return out;
}

Outcome run_fill(const Options& o) {
    Outcome out;
    Report& r = out.report;
    r.command = "fill";
    if (o.manifold.empty()) throw Error(ErrorKind::ParseError, "--manifold is required");
    auto pot = read_manifold(o.manifold);
    auto fc = parse_filling(o.coeff, pot.n_cusps);
    r.set("manifold", o.manifold);
    r.set("coeff", fmt_coeff(fc));
    r.set("branch", o.branch);
    r.set("precision", std::to_string(o.precision));
    SolveOptions opt;
    opt.branch = parse_branch(o.branch);
    auto res = solve_filling(pot, fc, opt);
    r.add("residual", fmt(res.residual));
    r.add("newton iterations", std::to_string(res.newton_iters));
    for (const auto& w : res.warnings) r.add("warning", w);
    r.columns = {"cusp", "slope", "u", "v", "t"};
    for (std::size_t i = 0; i < pot.n_cusps; ++i)
        r.rows.push_back({std::to_string(i + 1), fc[i].to_string(), fmt(res.u[i]), fmt(res.v[i]), fmt(res.t[i])});
    if (o.precision > 53) {
        auto hi = solve_filling_high(pot, fc, opt);
        unsigned digits = std::min(150u, static_cast<unsigned>(o.precision * 0.30103));
        for (std::size_t i = 0; i < pot.n_cusps; ++i) r.add("t" + std::to_string(i + 1) + " refined", fmt(hi.t[i], digits));
        r.add("refined residual", hi.residual.str(3, std::ios_base::scientific));
    }
    return out;
}

Outcome run_scan(const Options& o) {
    Outcome out;
    Report& r = out.report;
    r.command = "scan";
    if (o.manifold.empty()) throw Error(ErrorKind::ParseError, "--manifold is required");
    int bound = o.bound < 0 ? 25 : o.bound;
    auto pot = read_manifold(o.manifold);
    r.set("manifold", o.manifold);
    r.set("bound", std::to_string(bound));
    r.set("tol", fmt(o.tol));
    r.set("trunc", std::to_string(pot.trunc_degree));
    auto rep = cosmetic_scan(pot, bound, o.tol);
    r.add("fillings", std::to_string(rep.fillings));
    r.add("candidates", std::to_string(rep.candidates));
    r.add("trivial", std::to_string(rep.trivial));
    r.add("nontrivial", std::to_string(rep.nontrivial));
    r.columns = {"filling_a", "filling_b", "trivial", "distance"};
    for (const auto& c : rep.collisions)
        if (!c.trivial || o.include_trivial)
            r.rows.push_back({fmt_coeff(c.a), fmt_coeff(c.b), c.trivial ? "1" : "0", fmt(c.distance)});
    return out;
}

Outcome run_sgi(const Options& o) {
    Outcome out;
    Report& r = out.report;
    r.command = "sgi";
    if (o.manifold.empty()) throw Error(ErrorKind::ParseError, "--manifold is required");
    auto pot = read_manifold(o.manifold);
    r.set("manifold", o.manifold);
    bool sgi = sgi_check(pot), collapse = difference_collapse_check(pot);
    r.add("sgi", sgi ? "yes" : "no");
    r.add("difference collapse", collapse ? "yes" : "no");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and numerical checks for cusp ranks, heights, lattices and Dehn fillings", "zpdehn"};
    app.require_subcommand(1);
    Options o;
    std::map<std::string, Outcome (*)(const Options&)> handlers = {
        {"lemma-sweep", run_lemma_sweep}, {"classify", run_classify}, {"cascade", run_cascade},
        {"height", run_height},           {"northcott", run_northcott}, {"siegel", run_siegel},
        {"multrel", run_multrel},         {"fill", run_fill},           {"scan", run_scan},
        {"sgi", run_sgi}};
    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", o.out, "write the report here instead of stdout");
        sub->add_option("--format", o.format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
    };
    auto* sweep = app.add_subcommand("lemma-sweep", "exhaustive or seeded verification sweeps");
    sweep->add_option("--lemma", o.lemma, "block-classify, dehn-pairs, deficient-subset or cascade")->required();
    sweep->add_option("--bound", o.bound, "entry bound or |p| + |q| bound");
    sweep->add_option("--mode", o.mode, "one-tau or two-tau");
    sweep->add_option("--samples", o.samples, "sample count for seeded sweeps");
    sweep->add_option("--max-n", o.max_n, "largest size for seeded sweeps");
    sweep->add_option("--seed", o.seed, "RNG seed, required for seeded sweeps");
    sweep->add_option("--tol", o.tol, "continuation tolerance");
    auto* classify = app.add_subcommand("classify", "classify a 2x4 cusp block");
    classify->add_option("--rows", o.rows, "a1,b1,c1,d1;a2,b2,c2,d2")->required();
    classify->add_option("--mode", o.mode, "one-tau or two-tau");
    classify->add_option("--coeff", o.coeff, "p/q,p'/q' for the pair verdict");
    auto* cascade = app.add_subcommand("cascade", "anomaly verdict and containment cascade");
    cascade->add_option("--rows", o.rows, "rows over (a_1, b_1, ..., a_n, b_n), ';' between rows")->required();
    cascade->add_option("--seed", o.seed, "run the continuation check on a synthetic potential");
    cascade->add_option("--tol", o.tol, "continuation tolerance");
    auto* height = app.add_subcommand("height", "Weil height of a root of an integer polynomial");
    height->add_option("--poly", o.poly, "coefficients from the leading one down, e.g. 1,-1,-1")->required();
    height->add_option("--root", o.root, "root index in (real, imaginary) order");
    height->add_option("--precision", o.precision, "bits")->check(CLI::Range(64u, 1063u));
    auto* northcott = app.add_subcommand("northcott", "enumerate numbers of bounded height and degree");
    northcott->add_option("--height", o.height, "height bound, a number or log:N");
    northcott->add_option("--degree", o.degree, "degree bound")->check(CLI::Range(1u, 3u));
    auto* siegel = app.add_subcommand("siegel", "small integer basis of the common kernel of linear forms");
    siegel->add_option("--forms", o.forms, "rows of coefficients, ';' between forms")->required();
    auto* multrel = app.add_subcommand("multrel", "search for a multiplicative relation");
    multrel->add_option("--numbers", o.numbers, "entries re or re:im, comma separated");
    multrel->add_option("--manifold", o.manifold, "use core holonomies of a filling instead");
    multrel->add_option("--coeff", o.coeff, "p/q per cusp");
    multrel->add_option("--branch", o.branch, "plus or minus");
    multrel->add_option("--bound", o.bound, "coefficient bound (default 10)");
    multrel->add_option("--precision", o.precision, "bits")->check(CLI::Range(1u, 4096u));
    auto* fill = app.add_subcommand("fill", "solve the Dehn filling equations");
    fill->add_option("--manifold", o.manifold, "manifold file")->required();
    fill->add_option("--coeff", o.coeff, "p/q per cusp")->required();
    fill->add_option("--branch", o.branch, "plus or minus");
    fill->add_option("--precision", o.precision, "bits; above 53 the holonomies are refined")->check(CLI::Range(53u, 1063u));
    auto* scan = app.add_subcommand("scan", "cosmetic collision scan");
    scan->add_option("--manifold", o.manifold, "manifold file")->required();
    scan->add_option("--bound", o.bound, "|p| + |q| bound (default 25)");
    scan->add_option("--tol", o.tol, "collision tolerance");
    scan->add_flag("--include-trivial", o.include_trivial, "also list same-slope collisions");
    auto* sgi = app.add_subcommand("sgi", "mixed-coefficient and difference-collapse checks");
    sgi->add_option("--manifold", o.manifold, "manifold file (two cusps)")->required();
    for (auto* sub : app.get_subcommands({})) common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    const std::string name = app.get_subcommands().front()->get_name();
    try {
        Outcome res = handlers.at(name)(o);
        Format format = o.format == "csv" ? Format::Csv : Format::Text;
        if (o.out.empty()) {
            res.report.write(std::cout, format);
        } else {
            std::ofstream f(o.out);
            if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + o.out);
            res.report.write(f, format);
        }
        return res.violation ? kExitViolation : kExitOk;
    } catch (const Error& e) {
        std::cerr << "zpdehn " << name << ": " << e.what() << "\n";
        bool invariant = e.kind() == ErrorKind::InvariantViolation || e.kind() == ErrorKind::CascadeExhausted;
        return invariant ? kExitViolation : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "zpdehn " << name << ": " << e.what() << "\n";
        return kExitUsage;
    }
}
