#include <chrono>
#include <climits>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hodgelab/parallel.hpp"
#include "hodgelab/selftest.hpp"

using namespace hodgelab;

namespace {

struct Param {
    std::string key, def, help;
};

// Resolved parameters of one subcommand: command line, then config file, then default.
class Params {
public:
    explicit Params(std::vector<Param> decl) : decl_(std::move(decl)) {}

    const std::vector<Param>& decl() const { return decl_; }
    bool known(const std::string& k) const {
        for (auto& d : decl_)
            if (d.key == k) return true;
        return false;
    }
    void set_cli(const std::string& k, const std::string& v) { cli_[k] = v; }
    void set_cfg(const std::string& k, const std::string& v) { cfg_[k] = v; }

    std::string str(const std::string& k) const {
        if (auto it = cli_.find(k); it != cli_.end()) return it->second;
        if (auto it = cfg_.find(k); it != cfg_.end()) return it->second;
        for (auto& d : decl_)
            if (d.key == k) return d.def;
        throw ConfigError("unknown key '" + k + "'");
    }
    bool is_auto(const std::string& k) const { return str(k) == "auto"; }

    long long integer(const std::string& k, long long lo = LLONG_MIN) const {
        auto v = str(k);
        long long x = 0;
        if (!parse_int(v, x)) throw ConfigError("key '" + k + "': expected an integer, got '" + v + "'");
        if (x < lo) throw ConfigError("key '" + k + "' must be >= " + std::to_string(lo) + ", got " + v);
        return x;
    }
    int bound(const std::string& k, long long lo = 1) const { return static_cast<int>(integer(k, lo)); }
    std::uint64_t prime(const std::string& k) const {
        auto x = integer(k, 2);
        if (!acceptance::is_prime(x)) throw ConfigError("key '" + k + "': " + std::to_string(x) + " is not prime");
        return static_cast<std::uint64_t>(x);
    }

    json echo() const {
        json j = json::object();
        for (auto& d : decl_) {
            auto v = str(d.key);
            long long x = 0;
            if (parse_int(v, x))
                j[d.key] = x;
            else
                j[d.key] = v;
        }
        return j;
    }

    static bool parse_int(const std::string& s, long long& out) {
        try {
            std::size_t used = 0;
            out = std::stoll(s, &used);
            return used == s.size();
        } catch (const std::exception&) {
            return false;
        }
    }

private:
    std::vector<Param> decl_;
    std::map<std::string, std::string> cli_, cfg_;
};

struct Command {
    std::string name, help;
    std::vector<Param> params;
    std::function<Report(const Params&)> run;
};

// flat key = value, '#' comments
std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    auto trim = [](std::string s) {
        auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::map<std::string, std::string> kv;
    std::string line;
    for (int no = 1; std::getline(in, line); ++no) {
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(no) + ": expected key = value");
        auto k = trim(line.substr(0, eq));
        if (k.empty()) throw ConfigError(path + ":" + std::to_string(no) + ": empty key");
        kv[k] = trim(line.substr(eq + 1));
    }
    return kv;
}

ReportEntry entry(std::string module, int n, long w, std::string id, json result, Verdict v, std::string claim = "",
                  json inputs = json::object()) {
    ReportEntry e;
    e.module = std::move(module);
    e.n = n;
    e.w = w;
    e.id = std::move(id);
    e.inputs = std::move(inputs);
    e.result = std::move(result);
    e.verdict = v;
    e.claim = std::move(claim);
    return e;
}

void absorb(Report& r, acceptance::Checks& c) {
    for (auto& e : c.take()) r.add(std::move(e));
}

void add_table(Report& r, const acceptance::CobarTable& tab, const std::string& ring) {
    for (auto& [k, g] : tab)
        r.add(entry("cobar", k.first, k.second, "H^" + std::to_string(k.first) + "(G_a," + ring + ")_" + std::to_string(k.second),
                    to_json(g), Verdict::Info));
}

SemiperfectModel model_of(const Params& ps) {
    auto m = ps.str("model");
    auto p = ps.prime("p");
    auto depth = static_cast<unsigned>(ps.integer("depth", 1));
    if (m == "monomial") return SemiperfectModel::monomial(p, depth);
    if (m == "diagonal") return SemiperfectModel::diagonal(p, depth);
    throw ConfigError("key 'model': expected monomial or diagonal, got '" + m + "'");
}

// --- commands -------------------------------------------------------------------

Report cmd_bga(const Params& ps) {
    Report r;
    int n = ps.bound("nmax"), w = ps.bound("wmax");
    auto p = static_cast<std::uint64_t>(ps.integer("p", 0));
    auto ring = CoeffRing::parse(ps.str("ring"), p);
    auto tab = StandardComplex(n, w).table(ring);
    add_table(r, tab, ps.str("ring") == "Fp" ? "F" + std::to_string(p) : ps.str("ring"));
    acceptance::Checks c("verify", 0);
    if (ring.kind == CoeffRing::Kind::Z) acceptance::integral_checks(c, tab, n, w);
    if (ring.kind == CoeffRing::Kind::Q) {
        bool ok = true;
        for (auto& [k, g] : tab) ok &= g.rank == ((k == std::pair{0, 0} || k == std::pair{1, 2}) ? 1u : 0u);
        c.check("rational", ok, ok ? "Q in (0,0) and (1,2) only" : "mismatch", "H^*(G_a, Q) = Q ⊕ Q v1");
    }
    if (ring.kind == CoeffRing::Kind::Fp) {
        auto gens = fp_cohomology_generators(ring.p, n, w);
        auto bad = acceptance::hilbert_mismatch(tab, gens, n, w);
        c.check("hilbert", bad.empty(), bad.empty() ? json(acceptance::generator_names(gens)) : bad,
                "dimensions equal the Hilbert series of the free algebra on the listed generators");
    }
    absorb(r, c);
    return r;
}

Report cmd_bga_fp(const Params& ps) {
    Report r;
    auto p = ps.prime("p");
    int n = ps.bound("nmax"), w = ps.bound("wmax");
    StandardComplex sc(n, w);
    auto tab = sc.table(CoeffRing::fp(p));
    add_table(r, tab, "F" + std::to_string(p));
    acceptance::Checks c("verify", 0);
    auto gens = fp_cohomology_generators(p, n, w);
    auto bad = acceptance::hilbert_mismatch(tab, gens, n, w);
    c.check("hilbert", bad.empty(), bad.empty() ? json(acceptance::generator_names(gens)) : bad,
            "dimensions equal the Hilbert series of the free algebra on the listed generators");
    if (ps.integer("uct", 0) && n >= 2) {
        json detail;
        bool ok = acceptance::uct_consistent(sc.table(CoeffRing::integers()), tab, p, n - 1, w, detail);
        c.check("uct", ok, detail, "dim H^n(F_p) = rank H^n(Z) + #Z/p in H^n(Z) + #Z/p in H^{n+1}(Z) strandwise");
    }
    absorb(r, c);
    return r;
}

Report cmd_bockstein(const Params& ps) {
    Report r;
    auto p = ps.prime("p");
    int n = ps.bound("nmax", 2), w = ps.bound("wmax");
    StandardComplex sc(n, w);
    auto ring = CoeffRing::fp(p);
    for (long q = 1; 2 * q <= w; q *= static_cast<long>(p)) {
        auto b = sc.bockstein(StandardComplex::power_class(static_cast<int>(q), ring));
        bool zero = sc.is_coboundary(b);
        r.add(entry("cobar", 2, 2 * q, "beta(w" + std::to_string(q) + ")", zero ? "0" : "nonzero", Verdict::Info));
    }
    acceptance::Checks c("verify", 0);
    acceptance::bockstein_checks(c, p, n, w);
    absorb(r, c);
    return r;
}

Report cmd_cartier(const Params& ps) {
    Report r;
    auto p = ps.prime("p");
    auto d = static_cast<std::size_t>(ps.integer("vars", 1));
    long w = ps.bound("wmax");
    auto rep = verify_cartier_iso(p, d, w);
    for (auto& s : rep.strands)
        r.add(entry("derham", s.degree, s.weight, "C^-1 on H^" + std::to_string(s.degree),
                    json{{"source_dim", s.source_dim}, {"target_dim", s.target_dim}, {"image_rank", s.image_rank}},
                    verdict_of(s.pass), "C^{-1} maps a basis of forms onto a basis of cohomology"));
    auto pairs = static_cast<std::size_t>(ps.integer("pairs", 0));
    if (pairs) {
        auto seed = ps.is_auto("seed") ? 1000 + 10 * p + d : static_cast<std::uint64_t>(ps.integer("seed", 0));
        auto m = cartier_multiplicativity(p, d, w, pairs, seed);
        r.add(entry("verify", 0, 1, "multiplicativity", json{{"pairs", m.pairs}, {"failures", m.failures}, {"seed", seed}},
                    verdict_of(m.failures == 0 && m.df_failures == 0), "C^{-1}(ab) = C^{-1}(a) C^{-1}(b)"));
    }
    return r;
}

Report cmd_cech(const Params& ps) {
    Report r;
    auto p = ps.prime("p");
    long w = ps.is_auto("wmax") ? 2 * static_cast<long>(p) : ps.bound("wmax");
    auto rep = cech_alexander_compare(p, w);
    for (auto& s : rep.strands)
        r.add(entry("derham", 0, s.weight, "cech-alexander strand",
                    json{{"tot_h0", s.tot_h0}, {"derham_h0", s.derham_h0}, {"tot_h1", s.tot_h1}, {"derham_h1", s.derham_h1}},
                    verdict_of(s.pass), "H^0, H^1 of the total complex match de Rham"));
    acceptance::Checks c("verify", 0);
    c.check("d-squared", rep.dd_zero, rep.dd_zero ? "0" : "nonzero", "both differentials square to zero and commute");
    c.check("top-class", rep.top_class_cocycle && rep.top_class_nonzero, json{{"a", rep.a_exact}},
            "[x^{p-1}dx] goes to a nonzero class with partner a");
    c.check("stated-element", rep.variant_matches_mod_fil0, json{{"a_stated", rep.a_variant}},
            "the stated element a agrees with the partner modulo Fil_0^conj");
    c.check("dx", rep.dx_class_cocycle, "(dx, x1 - x2) = D(x)", "[dx] goes to [x1 - x2]");
    absorb(r, c);
    return r;
}

Report cmd_acrys(const Params& ps) {
    Report r;
    CrysAlgebra a(model_of(ps));
    long r_max = ps.integer("rmax", 0), w = ps.bound("wmax");
    const long lp = static_cast<long>(a.p());
    for (long ws = 0; ws <= w * a.den() / lp; ++ws) {
        long wn = ws * lp;
        bool closed_ok = true;
        auto fil = detail::conj_pieces(a, r_max, wn, true, closed_ok);
        json dims = json::array();
        bool nested = true;
        for (std::size_t i = 0; i < fil.size(); ++i) {
            dims.push_back(fil[i].cols);
            if (i) nested &= fil[i - 1].cols <= fil[i].cols && rank(fil[i].hcat(fil[i - 1])) == rank(fil[i]);
        }
        r.add(entry("crystal", 0, wn, "weight " + weight_str(wn, a.den()),
                    json{{"dim", a.basis_frobenius_image(wn).size()}, {"fil", dims}}, verdict_of(nested && closed_ok),
                    "Fil_{-1} ⊆ ... ⊆ Fil_r, matching the closed-form spanning set"));
    }
    return r;
}

Report cmd_kappa(const Params& ps) {
    Report r;
    CrysAlgebra a(model_of(ps));
    auto rep = verify_kappa_iso(a, ps.integer("rmax", 0), ps.bound("wmax"));
    for (auto& s : rep.strands)
        r.add(entry("crystal", static_cast<int>(s.r), s.source_weight, "kappa_" + std::to_string(s.r) + " weight " + weight_str(s.source_weight, a.den()),
                    json{{"source_dim", s.source_dim}, {"graded_dim", s.graded_dim}, {"image_rank", s.image_rank}},
                    verdict_of(s.pass), "κ_r is an isomorphism onto gr_r^conj"));
    return r;
}

Report cmd_di_split(const Params& ps) {
    Report r;
    auto s = model_of(ps);
    long w = ps.is_auto("wmax") ? 4 * static_cast<long>(s.p) : ps.bound("wmax");
    auto rep = di_splitting(CrysAlgebra(s), w);
    acceptance::Checks c("crystal", 0);
    c.check("injective", rep.injective, rep.strands, "f is injective");
    c.check("misses-fil0", rep.misses_fil0, rep.strands, "f misses Fil_0^conj");
    c.check("lands-in-fil", rep.lands_in_fil, rep.strands, "f(Γ^r) ⊆ Fil_r^conj");
    c.check("equals-kappa", rep.matches_kappa, rep.strands, "f = κ on gr");
    c.check("generator", rep.generator_formula, json(rep.generator_images), "f(s) = (p-1)! s^[p] mod Fil_0");
    c.check("phi1", rep.phi1_of_p, rep.phi1_of_p ? "holds" : "fails", "φ_1(p u) = φ_0(u)");
    c.check("theta2", rep.theta2_surjective, rep.theta2_surjective ? "holds" : "fails", "θ_2 is surjective");
    absorb(r, c);
    return r;
}

Report cmd_unfold(const Params& ps) {
    Report r;
    auto p = ps.prime("p");
    long w = ps.is_auto("wmax") ? static_cast<long>(p * p) : ps.bound("wmax");
    auto rep = unfold_derham(p, w, ps.bound("levels", 2), static_cast<unsigned>(ps.integer("depth", 1)));
    for (auto& s : rep.strands)
        r.add(entry("crystal", 0, s.weight, "unfold strand",
                    json{{"h0", s.h0}, {"h1", s.h1}, {"derham_h0", s.derham_h0}, {"derham_h1", s.derham_h1}},
                    verdict_of(s.pass), "H^0, H^1 of the truncated totalization match de Rham"));
    return r;
}

CoeffRing stack_ring(const Params& ps) { return CoeffRing::parse(ps.str("ring"), 0); }

Report cmd_hodge(const Params& ps) {
    Report r;
    auto X = GmQuotient::parse(ps.str("stack"));
    int n = ps.bound("nmax", 0);
    auto ring = stack_ring(ps);
    for (int p = 0; p <= n; ++p)
        for (int q = 0; p + q <= n; ++q)
            r.add(entry("stacks", p + q, p, "H^" + std::to_string(q) + "(X, L^" + std::to_string(p) + ")",
                        hodge_cohomology(X, p, q, ring), Verdict::Info));
    auto rep = hdr_report(X, n);
    acceptance::Checks c("verify", 0);
    c.check("e1-model", rep.e1_model_matches, rep.e1_totals, "E_1 of the filtered model equals the Hodge table");
    c.check("d-squared", rep.d_squared_zero, rep.d_squared_zero ? "0" : "nonzero", "model differentials square to zero");
    if (X.is_gm_quotient()) c.check("koszul", rep.koszul_consistent, rep.koszul_consistent, "Koszul and Cartan graded pieces agree");
    absorb(r, c);
    return r;
}

Report cmd_derham_stack(const Params& ps) {
    Report r;
    auto X = GmQuotient::parse(ps.str("stack"));
    int n = ps.bound("nmax", 0);
    auto ring = stack_ring(ps);
    for (int k = 0; k <= n; ++k) r.add(entry("stacks", k, 0, "H^" + std::to_string(k) + "_dR", derham_cohomology(X, k, ring), Verdict::Info));
    acceptance::Checks c("verify", 0);
    c.check("d-squared", nerve_complex(X, n + 2).d_squared_zero(), "0", "nerve differential squares to zero");
    if (X.is_gm_quotient()) {
        auto a = derham_dims(X, n), b = cartan_dims(X, n);
        c.check("cartan", a == b, json{{"nerve", a}, {"cartan", b}}, "nerve and Cartan models agree");
    }
    absorb(r, c);
    return r;
}

Report cmd_hdr(const Params& ps) {
    Report r;
    auto X = GmQuotient::parse(ps.str("stack"));
    int n = ps.bound("nmax", 0);
    auto expect = ps.str("expect");
    if (expect == "auto") expect = X.kind == GmQuotient::Kind::BGa ? "non-degenerate" : "degenerate";
    if (expect != "degenerate" && expect != "non-degenerate")
        throw ConfigError("key 'expect': expected auto, degenerate or non-degenerate, got '" + expect + "'");
    auto rep = hdr_report(X, n);
    for (auto& [k, v] : rep.hodge)
        r.add(entry("stacks", k.first + k.second, k.first, "E_1^{" + std::to_string(k.first) + "," + std::to_string(k.second) + "}", v, Verdict::Info));
    for (int k = 0; k <= n; ++k)
        r.add(entry("stacks", k, -1, "H^" + std::to_string(k) + "_dR", json{{"derham", rep.derham[k]}, {"e1_total", rep.e1_totals[k]}},
                    Verdict::Info));
    acceptance::Checks c("verify", 0);
    json loc = rep.first_nonzero
                   ? json{{"r", rep.first_nonzero->r}, {"p", rep.first_nonzero->p}, {"q", rep.first_nonzero->q}}
                   : json(nullptr);
    c.check("verdict", rep.verdict() == expect && rep.agree(),
            json{{"verdict", rep.verdict()}, {"expected", expect}, {"first_nonzero", loc}},
            "computed verdict matches the expected one and both degeneration tests agree");
    c.check("d-squared", rep.d_squared_zero, rep.d_squared_zero ? "0" : "nonzero", "model differentials square to zero");
    absorb(r, c);
    return r;
}

Report cmd_census(const Params& ps) {
    Report r;
    auto p = ps.prime("p");
    int n = ps.bound("n"), w = ps.bound("wmax");
    std::size_t cumulative = 0;
    std::map<int, std::size_t> counts;
    for (auto& row : torsion_census(p, n, w)) {
        cumulative += row.count;
        counts[row.w] = row.count;
        r.add(entry("cobar", n, row.w, "Z/" + std::to_string(p) + " summands",
                    json{{"group", to_json(row.group)}, {"count", row.count}, {"cumulative", cumulative}}, Verdict::Info));
    }
    if (n == 2) {
        acceptance::Checks c("verify", 0);
        json hit = json::array();
        bool ok = false;
        for (long q = static_cast<long>(p); 2 * q <= w; q *= static_cast<long>(p)) {
            hit.push_back(json{{"w", 2 * q}, {"count", counts[static_cast<int>(2 * q)]}});
            ok = true;
        }
        for (auto& h : hit) ok &= h["count"].get<std::size_t>() >= 1;
        c.check("growth", ok, hit, "new Z/p summands appear at every weight 2p^i in range");
        absorb(r, c);
    }
    return r;
}

std::vector<Param> selftest_params() {
    std::vector<Param> out;
    const json defaults = SelftestOptions{}.to_json();
    for (auto& [k, v] : defaults.items()) out.push_back({k, v.dump(), "acceptance bound or seed"});
    return out;
}

Report cmd_selftest(const Params& ps) {
    SelftestOptions o;
    for (auto& d : ps.decl()) o.set(d.key, ps.integer(d.key, 0));
    return acceptance_report(run_acceptance(o), o);
}

std::vector<Command> commands() {
    const Param p2{"p", "2", "prime"}, p3{"p", "3", "prime"}, model{"model", "monomial", "monomial or diagonal"},
        depth{"depth", "3", "p-power root depth m"}, stack{"stack", "BGm", "BGm, BGa, A1, A:w1,..., Gm:w, P1:a,b"},
        ring_q{"ring", "Q", "coefficient ring"};
    return {
        {"bga", "cobar cohomology of G_a", {{"ring", "Z", "Z, Q, F<p> or Fp"}, {"p", "0", "prime for Fp"}, {"nmax", "3", ""}, {"wmax", "54", ""}}, cmd_bga},
        {"bga-fp", "F_p cohomology of G_a against the free algebra", {p2, {"nmax", "4", ""}, {"wmax", "32", ""}, {"uct", "1", "check against the integral table"}}, cmd_bga_fp},
        {"bockstein", "Bockstein operations", {p2, {"nmax", "3", ""}, {"wmax", "18", ""}}, cmd_bockstein},
        {"cartier", "inverse Cartier isomorphism", {p3, {"vars", "2", ""}, {"wmax", "12", ""}, {"pairs", "100", "random pairs for multiplicativity"}, {"seed", "auto", ""}}, cmd_cartier},
        {"cech-alexander", "Čech-Alexander comparison for F_p[x]", {p2, {"wmax", "auto", "default 2p"}}, cmd_cech},
        {"acrys", "conjugate filtration of A_crys mod p", {model, p2, depth, {"rmax", "2", ""}, {"wmax", "8", ""}}, cmd_acrys},
        {"kappa", "κ_r isomorphisms", {model, p2, depth, {"rmax", "1", ""}, {"wmax", "16", ""}}, cmd_kappa},
        {"di-split", "Deligne-Illusie splitting", {model, p2, depth, {"wmax", "auto", "default 4p"}}, cmd_di_split},
        {"unfold", "de Rham cohomology by unfolding", {p2, {"wmax", "auto", "default p^2"}, {"levels", "2", "cosimplicial truncation"}, {"depth", "2", ""}}, cmd_unfold},
        {"hodge", "Hodge cohomology of a stack", {stack, {"nmax", "4", ""}, ring_q}, cmd_hodge},
        {"derham-stack", "de Rham cohomology of a stack", {stack, {"nmax", "4", ""}, ring_q}, cmd_derham_stack},
        {"hdr", "Hodge-to-de Rham degeneration", {{"stack", "BGa", stack.help}, {"nmax", "3", ""}, {"expect", "auto", "degenerate, non-degenerate or auto"}}, cmd_hdr},
        {"census", "torsion census of H^n(G_a, Z)", {p2, {"n", "2", ""}, {"wmax", "32", ""}}, cmd_census},
        {"selftest", "full acceptance suite", selftest_params(), cmd_selftest},
    };
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hodgelab: exact weight-truncated cohomology computations"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "text", output, config;
    unsigned threads = 0;
    bool timing = false;
    auto* o_format = app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    auto* o_output = app.add_option("--output", output, "write the report here");
    auto* o_threads = app.add_option("--threads", threads, "worker threads");
    app.add_option("--config", config, "flat key = value file");
    auto* o_timing = app.add_flag("--timing", timing, "include elapsed times");

    auto cmds = commands();
    std::vector<Params> params;
    std::vector<std::map<std::string, std::string>> store(cmds.size());
    std::vector<CLI::App*> subs;
    for (auto& c : cmds) params.emplace_back(c.params);
    for (std::size_t i = 0; i < cmds.size(); ++i) {
        auto* sub = app.add_subcommand(cmds[i].name, cmds[i].help);
        for (auto& p : cmds[i].params) sub->add_option("--" + p.key, store[i][p.key], p.help + (p.help.empty() ? "" : " ") + "[" + p.def + "]");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        std::size_t ci = 0;
        while (ci < subs.size() && !subs[ci]->parsed()) ++ci;
        Params& ps = params[ci];
        for (auto& p : cmds[ci].params)
            if (subs[ci]->get_option("--" + p.key)->count()) ps.set_cli(p.key, store[ci][p.key]);

        if (!config.empty()) {
            for (auto& [k, v] : read_config(config)) {
                if (ps.known(k)) {
                    ps.set_cfg(k, v);
                } else if (k == "format") {
                    if (v != "text" && v != "json") throw ConfigError("key 'format': expected text or json, got '" + v + "'");
                    if (!o_format->count()) format = v;
                } else if (k == "output") {
                    if (!o_output->count()) output = v;
                } else if (k == "threads") {
                    long long t = 0;
                    if (!Params::parse_int(v, t) || t < 1) throw ConfigError("key 'threads': expected a positive integer, got '" + v + "'");
                    if (!o_threads->count()) threads = static_cast<unsigned>(t);
                } else if (k == "timing") {
                    if (v != "0" && v != "1" && v != "true" && v != "false")
                        throw ConfigError("key 'timing': expected true or false, got '" + v + "'");
                    if (!o_timing->count()) timing = v == "1" || v == "true";
                } else {
                    throw ConfigError("unknown key '" + k + "' for command " + cmds[ci].name);
                }
            }
        }
        if (threads) set_thread_count(threads);

        auto t0 = std::chrono::steady_clock::now();
        Report rep = cmds[ci].run(ps);
        rep.command = cmds[ci].name;
        rep.params = ps.echo();
        rep.sort();
        rep.elapsed_ms["total"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();

        std::string text = format == "json" ? rep.to_json(timing).dump(2) + "\n" : rep.text(timing);
        if (output.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(output);
            if (!out) throw ConfigError("key 'output': cannot write '" + output + "'");
            out << text;
        }
        return rep.passed() ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
