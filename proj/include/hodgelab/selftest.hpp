#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hodgelab/cobar/cobar.hpp"
#include "hodgelab/crystal/crystal.hpp"
#include "hodgelab/derham/cech_alexander.hpp"
#include "hodgelab/derham/forms.hpp"
#include "hodgelab/exactlin/smith.hpp"
#include "hodgelab/gralg/pd.hpp"
#include "hodgelab/gralg/witt2.hpp"
#include "hodgelab/report/report.hpp"
#include "hodgelab/specseq/specseq.hpp"
#include "hodgelab/stacks/stacks.hpp"

namespace hodgelab {

// Bounds and seeds of the acceptance run. Every key can be set from a config file.
struct SelftestOptions {
    int cobar_nmax = 3;
    int cobar_wmax = 54;
    int census_wmax = 32;
    std::uint64_t seed_snf = 20240611;
    std::uint64_t seed_pd = 777;
    std::uint64_t seed_witt = 4242;
    std::uint64_t seed_forms = 31337;
    std::uint64_t seed_specseq = 8128;
    std::uint64_t seed_stacks = 1618;
    std::uint64_t seed_cartier = 1000;  // per config: + 10 p + vars

    json to_json() const {
        return json{{"cobar_nmax", cobar_nmax},     {"cobar_wmax", cobar_wmax},   {"census_wmax", census_wmax},
                    {"seed_snf", seed_snf},         {"seed_pd", seed_pd},         {"seed_witt", seed_witt},
                    {"seed_forms", seed_forms},     {"seed_specseq", seed_specseq}, {"seed_stacks", seed_stacks},
                    {"seed_cartier", seed_cartier}};
    }
    // false for an unknown key
    bool set(const std::string& key, long long v) {
        std::map<std::string, std::function<void()>> setters{
            {"cobar_nmax", [&] { cobar_nmax = static_cast<int>(v); }},
            {"cobar_wmax", [&] { cobar_wmax = static_cast<int>(v); }},
            {"census_wmax", [&] { census_wmax = static_cast<int>(v); }},
            {"seed_snf", [&] { seed_snf = static_cast<std::uint64_t>(v); }},
            {"seed_pd", [&] { seed_pd = static_cast<std::uint64_t>(v); }},
            {"seed_witt", [&] { seed_witt = static_cast<std::uint64_t>(v); }},
            {"seed_forms", [&] { seed_forms = static_cast<std::uint64_t>(v); }},
            {"seed_specseq", [&] { seed_specseq = static_cast<std::uint64_t>(v); }},
            {"seed_stacks", [&] { seed_stacks = static_cast<std::uint64_t>(v); }},
            {"seed_cartier", [&] { seed_cartier = static_cast<std::uint64_t>(v); }},
        };
        auto it = setters.find(key);
        if (it == setters.end()) return false;
        it->second();
        return true;
    }
};

struct CriterionResult {
    int index = 0;
    std::string title;
    bool pass = false;
    std::vector<ReportEntry> checks;  // sub-checks and informational lines
    long elapsed_ms = 0;
};

namespace acceptance {

class Run {
public:
    explicit Run(const SelftestOptions& o) : opt_(o) {}

    const SelftestOptions& options() const { return opt_; }

    // integral cobar table shared by criteria 1, 2, 10
    const std::map<std::pair<int, int>, AbGroup>& integral_table() {
        if (!ztab_) {
            StandardComplex sc(opt_.cobar_nmax, opt_.cobar_wmax);
            ztab_ = sc.table(CoeffRing::integers());
        }
        return *ztab_;
    }

private:
    SelftestOptions opt_;
    std::optional<std::map<std::pair<int, int>, AbGroup>> ztab_;
};

class Checks {
public:
    Checks(std::string module, int n) : module_(std::move(module)), n_(n) {}
    explicit Checks(int criterion) : Checks("acceptance", criterion) {}
    bool check(const std::string& id, bool ok, json result, const std::string& claim, json inputs = json::object()) {
        push(id, verdict_of(ok), std::move(result), claim, std::move(inputs));
        all_ &= ok;
        return ok;
    }
    void info(const std::string& id, json result, const std::string& claim, json inputs = json::object()) {
        push(id, Verdict::Info, std::move(result), claim, std::move(inputs));
    }
    bool all() const { return all_; }
    std::vector<ReportEntry> take() { return std::move(entries_); }

private:
    void push(const std::string& id, Verdict v, json result, const std::string& claim, json inputs) {
        ReportEntry e;
        e.module = module_;
        e.n = n_;
        e.w = static_cast<long>(entries_.size()) + 1;
        e.id = id;
        e.inputs = std::move(inputs);
        e.result = std::move(result);
        e.verdict = v;
        e.claim = claim;
        entries_.push_back(std::move(e));
    }
    std::string module_;
    int n_;
    bool all_ = true;
    std::vector<ReportEntry> entries_;
};

inline bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// (p, q) for every prime power q = p^i, i >= 1, q <= bound
inline std::vector<std::pair<long, long>> prime_powers(long bound) {
    std::vector<std::pair<long, long>> out;
    for (long q = 2; q <= bound; ++q)
        for (long p = 2; p <= q; ++p) {
            if (!is_prime(p)) continue;
            long x = q;
            while (x % p == 0) x /= p;
            if (x == 1) out.push_back({p, q});
            if (q % p == 0) break;
        }
    return out;
}

inline bool squarefree(const mpz_class& t) {
    mpz_class x = t;
    for (unsigned long d = 2; d * d <= x; ++d) {
        if (mpz_divisible_ui_p(x.get_mpz_t(), d)) {
            x /= d;
            if (mpz_divisible_ui_p(x.get_mpz_t(), d)) return false;
        }
    }
    return true;
}

inline CohClass minus(CohClass a, const CohClass& b, const mpz_class& scale = 1) {
    for (std::size_t i = 0; i < a.cocycle.size(); ++i) a.cocycle[i] -= scale * b.cocycle[i];
    StandardComplex::reduce(a);
    return a;
}

using CobarTable = std::map<std::pair<int, int>, AbGroup>;

// --- 1 ------------------------------------------------------------------------
inline void integral_checks(Checks& c, const CobarTable& tab, int n_max, int w_max) {
    json in{{"nmax", n_max}, {"wmax", w_max}, {"ring", "Z"}};
    bool h0 = true, h1 = true;
    for (auto& [k, g] : tab) {
        if (k.first == 0) h0 &= g == (k.second == 0 ? AbGroup(1) : AbGroup());
        if (k.first == 1) h1 &= g == (k.second == 2 ? AbGroup(1) : AbGroup());
    }
    c.check("H0", h0, to_json(tab.at({0, 0})), "H^0 = Z in weight 0 and zero elsewhere", in);
    if (n_max >= 1 && w_max >= 2)
        c.check("H1", h1, to_json(tab.at({1, 2})), "H^1 = Z in weight 2 (class v1) and zero elsewhere", in);
    if (n_max >= 2) {
        json found = json::array();
        bool ok = true;
        for (auto [p, q] : prime_powers(27)) {
            if (2 * q > w_max) continue;
            auto cnt = tab.at({2, static_cast<int>(2 * q)}).count_primary(mpz_class(p), 1);
            found.push_back(json{{"w", 2 * q}, {"p", p}, {"count", cnt}});
            ok &= cnt >= 1;
        }
        c.check("H2-prime-powers", ok, found, "H^2 in weight 2q has a Z/p summand for each prime power q = p^i <= 27", in);
    }
    bool elementary = true;
    std::size_t summands = 0;
    for (auto& [k, g] : tab)
        for (auto& t : g.torsion) {
            ++summands;
            elementary &= squarefree(t);
        }
    c.check("torsion-elementary", elementary, json{{"torsion_summands", summands}},
            "every p-primary torsion summand in range is killed by p", in);
    if (n_max >= 2 && w_max >= 4) {
        StandardComplex sc(2, 4);
        auto v1 = StandardComplex::power_class(1, CoeffRing::integers());
        auto v2 = StandardComplex::torsion_class(2, 1);
        bool ok = sc.is_coboundary(minus(sc.cup(v1, v1), v2)) && !sc.is_coboundary(v2);
        c.check("v1-cup-v1", ok, ok ? "v1^2 = v2" : "mismatch", "v1 cup v1 is cohomologous to v2 = [d(x^2)/2]");
    }
}

inline CriterionResult cobar_integral(Run& run) {
    Checks c(1);
    integral_checks(c, run.integral_table(), run.options().cobar_nmax, run.options().cobar_wmax);
    return {1, "cobar cohomology of G_a over Z", c.all(), c.take()};
}

// --- 2 ------------------------------------------------------------------------
inline bool uct_consistent(const CobarTable& ztab, const CobarTable& ftab, std::uint64_t p, int n_max, int w_max,
                           json& detail) {
    bool ok = true;
    std::size_t strands = 0;
    for (auto& [k, g] : ftab) {
        if (k.first > n_max || k.second > w_max) continue;
        auto a = ztab.find(k), b = ztab.find({k.first + 1, k.second});
        if (a == ztab.end() || b == ztab.end()) continue;
        mpz_class pp(static_cast<unsigned long>(p));
        std::size_t expect = a->second.rank + a->second.count_primary(pp, 1) + b->second.count_primary(pp, 1);
        ++strands;
        ok &= expect == g.rank;
    }
    detail = json{{"strands", strands}};
    return ok && strands > 0;
}

// strands where the F_p table and the Hilbert series of `gens` differ
inline json hilbert_mismatch(const CobarTable& ftab, const std::vector<AlgebraGenerator>& gens, int n_max, int w_max) {
    auto h = hilbert_series(gens, n_max, w_max);
    json bad = json::array();
    for (auto& [k, g] : ftab) {
        long e = h.count(k) ? h.at(k) : 0;
        if (static_cast<long>(g.rank) != e)
            bad.push_back(json{{"n", k.first}, {"w", k.second}, {"computed", g.rank}, {"expected", e}});
    }
    return bad;
}

inline std::string generator_names(const std::vector<AlgebraGenerator>& gens) {
    std::string s;
    for (auto& g : gens) s += (s.empty() ? "" : ",") + g.name;
    return s;
}

inline CriterionResult cobar_fp(Run& run) {
    Checks c(2);
    const auto& o = run.options();
    struct Case {
        std::uint64_t p;
        int n_max, w_max;
    };
    for (auto cs : {Case{2, 4, 32}, Case{3, 4, 24}}) {
        StandardComplex sc(cs.n_max, cs.w_max);
        auto ftab = sc.table(CoeffRing::fp(cs.p));
        std::vector<AlgebraGenerator> stated;
        if (cs.p == 2)
            stated = {{"w1", 1, 2, false}, {"w2", 1, 4, false}, {"w4", 1, 8, false}, {"w8", 1, 16, false}, {"w16", 1, 32, false}};
        else
            stated = {{"w1", 1, 2, true}, {"w3", 1, 6, true}, {"w9", 1, 18, true}, {"v3", 2, 6, false}};
        json in{{"p", cs.p}, {"nmax", cs.n_max}, {"wmax", cs.w_max}};
        json bad = hilbert_mismatch(ftab, stated, cs.n_max, cs.w_max);
        c.check("dims-p" + std::to_string(cs.p), bad.empty(), bad.empty() ? json("all strands match") : bad,
                cs.p == 2 ? "F_2 dimensions equal the Hilbert series of F_2[w1,w2,w4,w8,w16]"
                          : "F_3 dimensions equal the Hilbert series of Λ(w1,w3,w9) ⊗ F_3[v3]",
                in);
        if (cs.p == 3) {
            auto gens = fp_cohomology_generators(3, cs.n_max, cs.w_max);
            json bad2 = hilbert_mismatch(ftab, gens, cs.n_max, cs.w_max);
            c.info("dims-p3-with-vbar9", bad2.empty() ? json("all strands match " + generator_names(gens)) : bad2,
                   "Λ(w1,w3,w9) ⊗ F_3[v3,v9] including vbar9 = β(w9) in (2,18)", in);
        }
        json detail;
        bool uct = uct_consistent(run.integral_table(), ftab, cs.p, std::min(cs.n_max, o.cobar_nmax - 1), o.cobar_wmax, detail);
        c.check("uct-p" + std::to_string(cs.p), uct, detail,
                "dim H^n(F_p) = rank H^n(Z) + #Z/p in H^n(Z) + #Z/p in H^{n+1}(Z) strandwise", in);
    }
    return {2, "F_p cohomology of G_a", c.all(), c.take()};
}

// --- 3 ------------------------------------------------------------------------
inline void bockstein_checks(Checks& c, std::uint64_t p, int n_max, int w_max) {
    StandardComplex sc(n_max, w_max);
    auto ring = CoeffRing::fp(p);
    const std::string tag = std::to_string(p);
    json in{{"p", p}, {"nmax", n_max}, {"wmax", w_max}};
    if (p == 2 && n_max >= 2 && w_max >= 4) {
        auto w1 = StandardComplex::power_class(1, ring), w2 = StandardComplex::power_class(2, ring);
        bool ok = sc.is_coboundary(minus(sc.bockstein(w2), sc.cup(w1, w1))) && !sc.is_coboundary(sc.bockstein(w2));
        c.check("beta2-w2", ok, ok ? "w1^2" : "mismatch", "β_2(w2) = w1^2", in);
    }
    if (p == 3 && n_max >= 2 && w_max >= 6) {
        auto w3 = StandardComplex::power_class(3, ring);
        CohClass v3 = StandardComplex::torsion_class(3, 1);
        v3.ring = ring;
        StandardComplex::reduce(v3);
        auto lambda = sc.proportional(sc.bockstein(w3), v3);
        bool ok = lambda && *lambda != 0 && !sc.is_coboundary(v3);
        c.check("beta3-w3", ok, lambda ? json{{"scalar", *lambda}} : json("not proportional"), "β_3(w3) = λ vbar3 with λ != 0", in);
    }
    if (n_max >= 2 && w_max >= 2) {
        bool ok = sc.is_coboundary(sc.bockstein(StandardComplex::power_class(1, ring)));
        c.check("beta" + tag + "-w1", ok, ok ? "0" : "nonzero", "β_p(w1) = 0", in);
    }
    // beta^2 on generators and their products in range
    std::vector<CohClass> gens;
    for (long q = 1; 2 * q <= w_max; q *= static_cast<long>(p)) gens.push_back(StandardComplex::power_class(static_cast<int>(q), ring));
    std::vector<CohClass> all = gens;
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i; j < gens.size(); ++j)
            if (gens[i].w + gens[j].w <= w_max) all.push_back(sc.cup(gens[i], gens[j]));
    std::size_t classes = 0;
    bool sq = true;
    for (auto& x : all) {
        if (x.n + 2 > n_max) continue;
        ++classes;
        sq &= sc.is_coboundary(sc.bockstein(sc.bockstein(x)));
    }
    c.check("beta" + tag + "-squared", sq, json{{"classes", classes}}, "β_p ∘ β_p = 0 on computed classes", in);
}

inline CriterionResult bockstein(Run&) {
    Checks c(3);
    for (std::uint64_t p : {2, 3}) bockstein_checks(c, p, 3, 18);
    return {3, "Bockstein operations", c.all(), c.take()};
}

// --- 4 ------------------------------------------------------------------------
inline CriterionResult cartier(Run& run) {
    Checks c(4);
    struct Cfg {
        std::uint64_t p;
        std::size_t d;
        long w;
    };
    for (auto cf : {Cfg{2, 1, 8}, Cfg{2, 2, 8}, Cfg{3, 1, 12}, Cfg{3, 2, 12}, Cfg{5, 1, 20}}) {
        json in{{"p", cf.p}, {"vars", cf.d}, {"wmax", cf.w}};
        auto rep = verify_cartier_iso(cf.p, cf.d, cf.w);
        c.check("iso-p" + std::to_string(cf.p) + "-d" + std::to_string(cf.d), rep.pass,
                json{{"strands", rep.strands.size()}}, "C^{-1} is an isomorphism onto de Rham cohomology", in);
        auto seed = run.options().seed_cartier + 10 * cf.p + cf.d;
        auto m = cartier_multiplicativity(cf.p, cf.d, cf.w, 100, seed);
        in["seed"] = seed;
        c.check("mult-p" + std::to_string(cf.p) + "-d" + std::to_string(cf.d), m.failures == 0 && m.pairs == 100 && m.df_failures == 0,
                json{{"pairs", m.pairs}, {"failures", m.failures}}, "C^{-1}(ab) = C^{-1}(a) C^{-1}(b) on random pairs", in);
    }
    return {4, "Cartier isomorphism", c.all(), c.take()};
}

// --- 5 ------------------------------------------------------------------------
inline CriterionResult kappa(Run&) {
    Checks c(5);
    struct Cfg {
        SemiperfectModel s;
        long r, w;
    };
    for (auto& cf : {Cfg{SemiperfectModel::monomial(2, 3), 1, 16}, Cfg{SemiperfectModel::monomial(3, 3), 2, 18},
                     Cfg{SemiperfectModel::diagonal(2, 3), 1, 8}}) {
        auto rep = verify_kappa_iso(CrysAlgebra(cf.s), cf.r, cf.w);
        c.check("kappa-" + cf.s.str(), rep.pass && rep.checked > 0, json{{"strands", rep.checked}, {"failures", rep.failures}},
                "κ_r: Γ^r -> gr_r^conj is an isomorphism on every strand",
                json{{"ring", cf.s.str()}, {"depth", cf.s.depth}, {"rmax", cf.r}, {"wmax", cf.w}});
    }
    return {5, "kappa isomorphism", c.all(), c.take()};
}

// --- 6 ------------------------------------------------------------------------
inline CriterionResult splitting(Run&) {
    Checks c(6);
    for (std::uint64_t p : {2, 3}) {
        auto s = SemiperfectModel::monomial(p, 3);
        auto rep = di_splitting(CrysAlgebra(s), 4 * static_cast<long>(p));
        json in{{"ring", s.str()}, {"wmax", 4 * p}};
        std::string tag = "-p" + std::to_string(p);
        c.check("injective" + tag, rep.injective, rep.strands, "f is injective", in);
        c.check("misses-fil0" + tag, rep.misses_fil0, rep.strands, "f misses Fil_0^conj", in);
        c.check("equals-kappa" + tag, rep.matches_kappa && rep.lands_in_fil, rep.strands, "f = κ on gr", in);
        c.check("generator" + tag, rep.generator_formula, p == 3 ? "f(s) = 2 s^[3] mod Fil_0" : "f(s) = s^[2] mod Fil_0",
                "f(s) = (p-1)! s^[p] mod Fil_0", in);
        c.check("lift" + tag, rep.pass, rep.pass ? "pass" : "fail", "splitting exists on the tautological lift", in);
    }
    return {6, "Deligne-Illusie splitting", c.all(), c.take()};
}

// --- 7 ------------------------------------------------------------------------
inline CriterionResult cech(Run&) {
    Checks c(7);
    for (std::uint64_t p : {2, 3, 5}) {
        auto rep = cech_alexander_compare(p, 2 * static_cast<long>(p));
        json in{{"p", p}, {"wmax", 2 * p}};
        std::string tag = "-p" + std::to_string(p);
        c.check("top-class" + tag, rep.top_class_cocycle && rep.top_class_nonzero,
                json{{"a", rep.a_exact}}, "[x^{p-1}dx] goes to a nonzero class with partner a", in);
        c.check("stated-element" + tag, rep.variant_matches_mod_fil0, json{{"a_stated", rep.a_variant}},
                "the stated element a agrees with the partner modulo Fil_0^conj", in);
        c.check("dx" + tag, rep.dx_class_cocycle, "(dx, x1 - x2) = D(x)", "[dx] goes to [x1 - x2]", in);
        c.check("strands" + tag, rep.pass && rep.dd_zero, json{{"strands", rep.strands.size()}},
                "Čech-Alexander H^0, H^1 match de Rham on every strand", in);
    }
    return {7, "Čech-Alexander comparison", c.all(), c.take()};
}

// --- 8 ------------------------------------------------------------------------
inline CriterionResult unfold(Run&) {
    Checks c(8);
    for (std::uint64_t p : {2, 3}) {
        long w = static_cast<long>(p * p);
        auto rep = unfold_derham(p, w);
        c.check("unfold-p" + std::to_string(p), rep.pass, json{{"strands", rep.strands.size()}, {"levels", rep.levels}},
                "H^0, H^1 of the truncated totalization match de Rham of F_p[x]",
                json{{"p", p}, {"wmax", w}, {"depth", rep.depth}});
    }
    return {8, "quasisyntomic unfolding", c.all(), c.take()};
}

// --- 9 ------------------------------------------------------------------------
inline json dims_json(const std::vector<std::size_t>& v) { return json(v); }

inline CriterionResult degeneration(Run&) {
    Checks c(9);
    const std::vector<std::size_t> expect{1, 0, 1, 0, 1};
    for (auto X : {GmQuotient::bgm(), GmQuotient::affine({1})}) {
        auto r = hdr_report(X, 4);
        c.check("hdr-" + r.stack, r.degenerate() && r.agree() && r.derham == expect && r.cross_model_agree,
                json{{"verdict", r.verdict()}, {"derham", r.derham}, {"e1", r.e1_totals}},
                "degenerate at E_1 with de Rham dims (1,0,1,0,1)", json{{"stack", r.stack}, {"nmax", 4}});
    }
    auto r = hdr_report(GmQuotient::bga(), 3);
    json in{{"stack", r.stack}, {"nmax", 3}};
    json loc = r.first_nonzero ? json{{"r", r.first_nonzero->r}, {"p", r.first_nonzero->p}, {"q", r.first_nonzero->q}}
                               : json(nullptr);
    c.check("hdr-BGa", !r.degenerate() && r.agree() && r.first_nonzero && r.first_nonzero->r == 1 &&
                           r.first_nonzero->p == 0 && r.first_nonzero->q == 1,
            json{{"verdict", r.verdict()}, {"d1", loc}}, "non-degenerate with a nonzero d_1 out of (0,1)", in);
    c.check("BGa-H1dR", r.derham[1] == 0, r.derham[1], "dim H^1_dR(BG_a) = 0", in);
    c.check("BGa-E1-total-n1", r.e1_totals[1] == 2, r.e1_totals[1], "sum over p+q=1 of dim E_1^{p,q} = 2", in);
    std::size_t q1 = 0;
    for (int p = 0; p <= 3; ++p) q1 += hodge_cohomology(GmQuotient::bga(), p, 1);
    c.info("BGa-E1-row-q1", q1, "sum over p of dim H^1(BG_a, Λ^p L) (fixed q = 1, not p+q = 1)", in);
    return {9, "Hodge-to-de Rham degeneration verdicts", c.all(), c.take()};
}

// --- 10 -----------------------------------------------------------------------
inline CriterionResult census(Run& run) {
    Checks c(10);
    int wmax = run.options().census_wmax;
    auto rows = torsion_census(2, 2, wmax);
    json found = json::array();
    std::size_t cumulative = 0, distinct = 0;
    bool growing = true;
    for (auto& r : rows) {
        if (!r.count) continue;
        ++distinct;
        std::size_t next = cumulative + r.count;
        growing &= next > cumulative;
        cumulative = next;
        found.push_back(json{{"w", r.w}, {"count", r.count}, {"cumulative", cumulative}, {"group", to_json(r.group)}});
    }
    c.check("census-p2", growing && distinct >= 4, found,
            "Z/2 summands of H^2(G_a,Z)_w keep appearing at new weights (>= 4 weights)", json{{"p", 2}, {"n", 2}, {"wmax", wmax}});
    return {10, "torsion census", c.all(), c.take()};
}

// --- 11 -----------------------------------------------------------------------
inline IntMat random_int_mat(std::mt19937_64& rng, std::size_t r, std::size_t cols, int range, double density) {
    std::uniform_int_distribution<int> val(-range, range);
    std::uniform_real_distribution<double> coin(0, 1);
    IntMat m(r, cols);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (coin(rng) < density) m.set(i, j, val(rng));
    return m;
}

inline CriterionResult properties(Run& run) {
    Checks c(11);
    const auto& o = run.options();
    {
        std::mt19937_64 rng(o.seed_snf);
        std::size_t bad = 0;
        for (int t = 0; t < 60; ++t) {
            std::size_t r = 1 + rng() % 7, cc = 1 + rng() % 7;
            IntMat a = random_int_mat(rng, r, cc, 9, 0.6);
            auto snf = smith_normal_form(a, true);
            IntMat d = (*snf.u) * a * (*snf.v);
            bool ok = (*snf.u) * (*snf.u_inv) == IntMat::identity(r);
            for (std::size_t j = 0; j < d.cols(); ++j)
                for (auto& [i, v] : d.column(j)) ok &= i == j && i < snf.diagonal.size() && v == snf.diagonal[i];
            for (std::size_t i = 0; i + 1 < snf.diagonal.size(); ++i)
                ok &= snf.diagonal[i] > 0 && snf.diagonal[i + 1] % snf.diagonal[i] == 0;
            bad += !ok;
        }
        c.check("snf-contract", bad == 0, json{{"matrices", 60}, {"failures", bad}}, "U A V = diag(d_1 | d_2 | ...), U unimodular",
                json{{"seed", o.seed_snf}});
    }
    {
        std::mt19937_64 rng(o.seed_pd);
        PDAlgebra::Spec spec;
        spec.names = {"x", "y", "z"};
        spec.gens = {PDGenerator{-1, 0}, PDGenerator{1, 2}};
        auto a = PDAlgebra::make(spec);
        auto s = PDElement::gen_power(a, 0, 1), t = PDElement::gen_power(a, 1, 1);
        std::size_t bad = 0, cases = 0;
        std::uniform_int_distribution<long> coef(-4, 4);
        for (int it = 0; it < 12; ++it) {
            long m = 1 + static_cast<long>(rng() % 3), n = 1 + static_cast<long>(rng() % 3);
            auto u = s.scaled(coef(rng)) + t.scaled(coef(rng)) + (PDElement::var(a, 1) * t).scaled(coef(rng));
            ++cases;
            bad += !(u.divided_power(m) * u.divided_power(n) == u.divided_power(m + n).scaled(binomial(m + n, m)));
            bad += !(u.divided_power(n).scaled(factorial(n)) == u.pow(static_cast<unsigned>(n)));
            mpz_class l = coef(rng), ln;
            mpz_pow_ui(ln.get_mpz_t(), l.get_mpz_t(), static_cast<unsigned long>(n));
            bad += !(u.scaled(l).divided_power(n) == u.divided_power(n).scaled(ln));
        }
        c.check("pd-axioms", bad == 0, json{{"cases", cases}, {"failures", bad}},
                "γ_m γ_n = C(m+n,m) γ_{m+n}, n! γ_n(u) = u^n, γ_n(λu) = λ^n γ_n(u)", json{{"seed", o.seed_pd}});
    }
    {
        std::mt19937_64 rng(o.seed_witt);
        std::uniform_int_distribution<long> d(-50, 50);
        std::size_t bad = 0;
        for (std::uint64_t p : {2, 3, 5})
            for (int it = 0; it < 50; ++it) {
                Witt2<mpz_class> a{d(rng), d(rng), p}, b{d(rng), d(rng), p};
                auto ga = a.ghost(), gb = b.ghost(), gs = (a + b).ghost(), gm = (a * b).ghost();
                bad += !(gs.first == ga.first + gb.first && gs.second == ga.second + gb.second &&
                         gm.first == ga.first * gb.first && gm.second == ga.second * gb.second);
            }
        c.check("witt2-ghost", bad == 0, json{{"pairs", 150}, {"failures", bad}}, "ghost map is a ring homomorphism on W_2",
                json{{"seed", o.seed_witt}});
    }
    {
        std::size_t bad = 0, checks = 0;
        StandardComplex sc(4, 16);
        for (int w = 0; w <= 16; w += 2)
            for (int n = 0; n + 1 < 4; ++n) {
                ++checks;
                bad += !(sc.differential(n + 1, w) * sc.differential(n, w)).is_zero();
            }
        std::mt19937_64 rng(o.seed_forms);
        auto b = DeRhamBase::polynomial(CoeffRing::integers(), 3);
        for (int it = 0; it < 40; ++it) {
            auto f = random_form(b, rng, static_cast<int>(rng() % 3), 2 + static_cast<long>(rng() % 3));
            ++checks;
            bad += !f.d().d().is_zero();
        }
        for (auto s : {"BGm", "A:1,2", "Gm:2", "P1:0,1"}) {
            ++checks;
            bad += !nerve_complex(GmQuotient::parse(s), 5).d_squared_zero();
            ++checks;
            bad += !cartan_complex(GmQuotient::parse(s), 5).d_squared_zero();
        }
        for (long w = 0; w <= 3; ++w) {
            ++checks;
            bad += !nerve_complex(GmQuotient::bga(), 5, w).d_squared_zero();
        }
        c.check("d-squared", bad == 0, json{{"checks", checks}, {"failures", bad}},
                "d ∘ d = 0 for cobar, de Rham, nerve and Cartan complexes", json{{"seed", o.seed_forms}});
    }
    {
        std::mt19937_64 rng(o.seed_specseq);
        std::size_t bad = 0;
        for (int it = 0; it < 40; ++it) {
            auto fc = random_filtered_complex(rng, it % 2 ? 3 : 2);
            auto ps = pages(fc, fc.top + 2);
            for (std::size_t i = 0; i + 1 < ps.size(); ++i)
                for (auto& [k, v] : ps[i + 1].table) bad += v > ps[i].table[k];
            auto inf = e_infinity(fc);
            for (int n = 0; n <= fc.max_degree(); ++n) bad += inf.total(n) != fc.cohomology_dim(n);
            for (int r = 1; r <= 3; ++r) bad += !degenerates_at(fc, r).agree;
        }
        c.check("specseq", bad == 0, json{{"complexes", 40}, {"failures", bad}},
                "dim E_{r+1} <= dim E_r, sum of E_inf = dim H^n, both degeneration tests agree",
                json{{"seed", o.seed_specseq}});
    }
    {
        std::mt19937_64 rng(o.seed_stacks);
        std::size_t strands = 0, bad = 0;
        std::vector<GmQuotient> xs{GmQuotient::bga(), GmQuotient::parse("Gm:2"), GmQuotient::p1(0, 1)};
        for (int it = 0; it < 4; ++it) {
            std::size_t m = 1 + rng() % 3;
            long sign = rng() % 2 ? 1 : -1;
            std::vector<long> w;
            for (std::size_t i = 0; i < m; ++i) w.push_back(sign * static_cast<long>(1 + rng() % 3));
            xs.push_back(GmQuotient::affine(w));
        }
        for (auto& X : xs) {
            auto rep = cartan_identity(X, 2, 3);
            strands += rep.strands;
            bad += rep.failures;
        }
        c.check("cartan-homotopy", bad == 0 && strands > 0, json{{"strands", strands}, {"failures", bad}},
                "ι d + d ι = k id on strands of weight k != 0", json{{"seed", o.seed_stacks}});
    }
    return {11, "property suites", c.all(), c.take()};
}

}  // namespace acceptance

inline std::vector<CriterionResult> run_acceptance(const SelftestOptions& opt,
                                                   const std::function<void(const CriterionResult&)>& on_done = {}) {
    acceptance::Run run(opt);
    using Fn = CriterionResult (*)(acceptance::Run&);
    const Fn fns[] = {acceptance::cobar_integral, acceptance::cobar_fp, acceptance::bockstein, acceptance::cartier,
                      acceptance::kappa,          acceptance::splitting, acceptance::cech,     acceptance::unfold,
                      acceptance::degeneration,   acceptance::census,  acceptance::properties};
    std::vector<CriterionResult> out;
    for (auto fn : fns) {
        auto t0 = std::chrono::steady_clock::now();
        auto r = fn(run);
        r.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
        if (on_done) on_done(r);
        out.push_back(std::move(r));
    }
    return out;
}

inline Report acceptance_report(const std::vector<CriterionResult>& results, const SelftestOptions& opt) {
    Report rep;
    rep.command = "selftest";
    rep.params = opt.to_json();
    for (auto& r : results) {
        ReportEntry e;
        e.module = "acceptance";
        e.n = r.index;
        e.w = 0;
        e.id = "criterion-" + std::to_string(r.index);
        e.result = r.title;
        e.verdict = verdict_of(r.pass);
        e.claim = "all checks of criterion " + std::to_string(r.index);
        rep.add(e);
        for (auto& c : r.checks) rep.add(c);
        rep.elapsed_ms["criterion-" + std::to_string(r.index)] = r.elapsed_ms;
    }
    rep.sort();
    return rep;
}

}  // namespace hodgelab
