#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hodgelab/cobar/cobar.hpp"
#include "hodgelab/derham/forms.hpp"
#include "hodgelab/error.hpp"
#include "hodgelab/exactlin/field.hpp"
#include "hodgelab/parallel.hpp"
#include "hodgelab/specseq/specseq.hpp"

namespace hodgelab {

// Quotient stacks by a one-dimensional group: BG_m, BG_a, [Spec A / G_m] with A a graded
// polynomial or Laurent algebra, and [P^1 / G_m] glued from two charts.
struct GmQuotient {
    enum class Kind { BGm, BGa, Affine, P1 };
    Kind kind = Kind::BGm;
    std::vector<long> weights;   // Affine: weight of each coordinate
    std::vector<bool> laurent;   // Affine: inverted coordinates
    long a = 0, b = 1;           // P1: weights on homogeneous coordinates X0, X1

    static GmQuotient bgm() { return {}; }
    static GmQuotient bga() {
        GmQuotient x;
        x.kind = Kind::BGa;
        return x;
    }
    static GmQuotient affine(std::vector<long> w, std::vector<bool> inv = {}) {
        GmQuotient x;
        x.kind = Kind::Affine;
        if (inv.empty()) inv.assign(w.size(), false);
        if (inv.size() != w.size()) throw DimensionMismatch("laurent mask");
        x.weights = std::move(w);
        x.laurent = std::move(inv);
        return x;
    }
    static GmQuotient p1(long a0, long a1) {
        GmQuotient x;
        x.kind = Kind::P1;
        x.a = a0;
        x.b = a1;
        return x;
    }
    bool is_gm_quotient() const { return kind != Kind::BGa; }

    // BGm | BGa | A1 | A:w1,w2,.. | Gm:w (Laurent line) | P1:a,b
    static GmQuotient parse(const std::string& s) {
        auto nums = [&](const std::string& t) {
            std::vector<long> v;
            std::stringstream ss(t);
            std::string item;
            while (std::getline(ss, item, ',')) {
                try {
                    std::size_t used = 0;
                    v.push_back(std::stol(item, &used));
                    if (used != item.size()) throw ConfigError("bad weight '" + item + "' in stack " + s);
                } catch (const std::logic_error&) {
                    throw ConfigError("bad weight '" + item + "' in stack " + s);
                }
            }
            return v;
        };
        if (s == "BGm") return bgm();
        if (s == "BGa") return bga();
        if (s == "A1") return affine({1});
        auto colon = s.find(':');
        if (colon != std::string::npos) {
            std::string head = s.substr(0, colon), tail = s.substr(colon + 1);
            if (head == "A") return affine(nums(tail));
            if (head == "Gm") {
                auto w = nums(tail);
                if (w.size() != 1) throw ConfigError("Gm takes one weight");
                return affine(w, {true});
            }
            if (head == "P1") {
                auto w = nums(tail);
                if (w.size() != 2) throw ConfigError("P1 takes two weights");
                return p1(w[0], w[1]);
            }
        }
        throw ConfigError("unknown stack '" + s + "'");
    }

    std::string str() const {
        switch (kind) {
            case Kind::BGm: return "BGm";
            case Kind::BGa: return "BGa";
            case Kind::P1: return "[P1/Gm](" + std::to_string(a) + "," + std::to_string(b) + ")";
            case Kind::Affine: {
                std::string out = "[A/Gm](";
                for (std::size_t i = 0; i < weights.size(); ++i)
                    out += (i ? "," : "") + std::to_string(weights[i]) + (laurent[i] ? "^±" : "");
                return out + ")";
            }
        }
        return "?";
    }
};

namespace stk {

using QField = RationalField;
using QMat = Mat<QField>;

// Coordinates of one chart: graded polynomial or Laurent algebra.
struct Chart {
    std::vector<long> w;
    std::vector<bool> laurent;
};

inline void check_chart(const Chart& c) {
    std::size_t inv = 0;
    for (bool l : c.laurent) inv += l;
    if (inv) {
        if (c.w.size() != 1 || c.w[0] == 0)
            throw UnsupportedStack("Laurent coordinates only as a single line of nonzero weight");
        return;
    }
    for (long x : c.w)
        if (x == 0 || (x > 0) != (c.w[0] > 0))
            throw UnsupportedStack("polynomial coordinates need nonzero weights of one sign");
}

enum class Group { Gm, Ga };

// X x G^k: coordinates x_1..x_m then t_1..t_k (G_m, Laurent, weight 0, t-degree 0 only)
// or s_1..s_k (G_a, scaling weight 1).
struct Level {
    Chart chart;
    Group group = Group::Gm;
    std::size_t k = 0;
    std::shared_ptr<const DeRhamBase> base;

    Level(Chart c, Group g, std::size_t kk) : chart(std::move(c)), group(g), k(kk) {
        std::size_t m = chart.w.size();
        DeRhamBase bs = DeRhamBase::make(CoeffRing::rationals(), m + k, [&] {
            std::vector<bool> inv = chart.laurent;
            for (std::size_t i = 0; i < k; ++i) inv.push_back(g == Group::Gm);
            return inv;
        }());
        for (std::size_t i = 0; i < m; ++i) bs.names[i] = m == 1 ? "x" : "x" + std::to_string(i + 1);
        for (std::size_t i = 0; i < k; ++i) bs.names[m + i] = (g == Group::Gm ? "t" : "s") + std::to_string(i + 1);
        base = std::make_shared<const DeRhamBase>(std::move(bs));
    }
    std::size_t m() const { return chart.w.size(); }
    std::size_t nvars() const { return m() + k; }
    // Euler weights: the infinitesimal action only moves the x (or s) coordinates
    std::vector<long> euler() const {
        std::vector<long> e = chart.w;
        for (std::size_t i = 0; i < k; ++i) e.push_back(group == Group::Ga ? 1 : 0);
        return e;
    }

    // Basis of the weight-W, form-degree-q strand (t-degree 0 in every t).
    std::vector<FormKey> strand(long W, int q) const {
        std::vector<FormKey> out;
        FormKey cur{std::vector<long>(nvars(), 0), 0};
        std::function<void(std::size_t, long, int)> rec = [&](std::size_t i, long rem, int deg) {
            if (i == nvars()) {
                if (rem == 0 && deg == 0) out.push_back(cur);
                return;
            }
            for (int bit = 0; bit <= 1; ++bit) {
                if (bit > deg) break;
                if (bit) cur.mask |= 1u << i;
                if (i < m()) {
                    long w = chart.w[i];
                    if (chart.laurent[i]) {
                        if (rem % w == 0) {
                            cur.exp[i] = rem / w - bit;
                            rec(i + 1, 0, deg - bit);
                        }
                    } else {
                        for (long e = 0;; ++e) {
                            long c = w * (e + bit);
                            if (c != 0 && ((c > 0) != (rem > 0) || std::labs(c) > std::labs(rem))) break;
                            cur.exp[i] = e;
                            rec(i + 1, rem - c, deg - bit);
                        }
                    }
                } else if (group == Group::Gm) {
                    cur.exp[i] = -bit;
                    rec(i + 1, rem, deg - bit);
                } else {
                    for (long e = 0; e + bit <= rem; ++e) {
                        cur.exp[i] = e;
                        rec(i + 1, rem - e - bit, deg - bit);
                    }
                }
                cur.exp[i] = 0;
                cur.mask &= ~(1u << i);
            }
        };
        if (q >= 0 && q <= static_cast<int>(nvars())) rec(0, W, q);
        std::sort(out.begin(), out.end());
        return out;
    }

    // Pullback of level-k coordinates along coface j into level k+1.
    std::vector<Form> coface_images(const Level& up, std::size_t j) const {
        std::vector<Form> img;
        const std::size_t mm = m();
        auto var = [&](std::size_t v, long e = 1) {
            std::vector<long> ex(up.nvars(), 0);
            ex[v] = e;
            return Form::monomial(up.base, ex, 0);
        };
        for (std::size_t i = 0; i < mm; ++i) {
            if (j == 0 && group == Group::Gm) {
                std::vector<long> ex(up.nvars(), 0);
                ex[i] = 1;
                ex[mm] = chart.w[i];
                img.push_back(Form::monomial(up.base, ex, 0));
            } else {
                img.push_back(var(i));
            }
        }
        for (std::size_t l = 1; l <= k; ++l) {
            std::size_t self = mm + l - 1, next = mm + l;
            if (j == 0 || (j >= 1 && j <= k && l > j))
                img.push_back(var(next));
            else if (j >= 1 && j <= k && l == j)
                img.push_back(group == Group::Gm ? var(self) * var(next) : var(self) + var(next));
            else
                img.push_back(var(self));
        }
        return img;
    }
};

// f(y_1..y_n) with y_v replaced by img[v]; negative powers need monomial images.
inline Form pullback(const Form& f, const std::vector<Form>& img, const std::shared_ptr<const DeRhamBase>& tgt) {
    Form out(tgt);
    std::vector<std::optional<Form>> dimg(img.size()), inv(img.size());
    for (auto& [key, c] : f.terms()) {
        Form acc = Form::monomial(tgt, std::vector<long>(tgt->nvars(), 0), 0, c);
        for (std::size_t v = 0; v < key.exp.size(); ++v) {
            long e = key.exp[v];
            if (e < 0) {
                if (!inv[v]) {
                    const auto& t = img[v].terms();
                    if (t.size() != 1 || t.begin()->first.mask) throw RingMismatch("inverting a non-monomial");
                    auto ex = t.begin()->first.exp;
                    for (auto& x : ex) x = -x;
                    inv[v] = Form::monomial(tgt, ex, 0, 1 / t.begin()->second);
                }
                for (long r = 0; r < -e; ++r) acc = acc * *inv[v];
            } else {
                for (long r = 0; r < e; ++r) acc = acc * img[v];
            }
        }
        for (std::size_t v = 0; v < key.exp.size(); ++v)
            if (key.mask >> v & 1u) {
                if (!dimg[v]) dimg[v] = img[v].d();
                acc = acc * *dimg[v];
            }
        out += acc;
    }
    return out;
}

// Contraction with the Euler field sum_i e_i y_i d/dy_i.
inline Form contract(const Form& f, const std::vector<long>& euler) {
    Form out(f.base_ptr());
    for (auto& [key, c] : f.terms()) {
        int pos = 0;
        for (std::size_t i = 0; i < key.exp.size(); ++i) {
            if (!(key.mask >> i & 1u)) continue;
            FormKey t{key.exp, key.mask & ~(1u << i)};
            t.exp[i] += 1;
            out.add_term(std::move(t), c * euler[i] * (pos % 2 ? -1 : 1));
            ++pos;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cochain complexes with tagged form bases. tag = cosimplicial level or power of u;
// chart indexes the Čech cover.

struct Term {
    int chart = 0;
    int tag = 0;
    FormKey key;
    auto operator<=>(const Term&) const = default;
};
using TermVec = std::vector<std::pair<Term, mpq_class>>;

struct QComplex {
    std::vector<std::vector<Term>> basis;   // degrees 0..N
    std::vector<std::vector<int>> level;    // Hodge level (or auxiliary filtration level)
    std::vector<QMat> d;                    // d[n]: n -> n+1, n < N
    int n_valid = 0;

    int top_degree() const { return static_cast<int>(basis.size()) - 1; }
    std::size_t dim(int n) const { return n < 0 || n > top_degree() ? 0 : basis[n].size(); }
    std::size_t cohomology_dim(int n) const {
        std::size_t out = n < top_degree() ? rank(d[n]) : 0;
        std::size_t in = n > 0 && n <= top_degree() ? rank(d[n - 1]) : 0;
        return dim(n) - out - in;
    }
    bool d_squared_zero() const {
        for (std::size_t n = 0; n + 1 < d.size(); ++n)
            if (!(d[n + 1] * d[n]).is_zero()) return false;
        return true;
    }
    int top_level() const {
        int t = 0;
        for (auto& lv : level)
            for (int x : lv) t = std::max(t, x);
        return t;
    }
    FilteredComplex<QField> filtered() const {
        auto fc = FilteredComplex<QField>::basis_aligned(QField{}, d, level, top_level());
        fc.n_valid = n_valid;
        return fc;
    }
};

// A model on one chart: basis per degree and the differential on basis terms.
struct ChartModel {
    std::function<std::vector<Term>(int n)> basis;
    std::function<TermVec(int n, const Term&)> apply;
    std::function<int(const Term&)> level;
};

inline QComplex assemble(const std::vector<std::vector<Term>>& basis, const std::vector<std::vector<int>>& level,
                         const std::function<TermVec(int, const Term&)>& apply, int n_valid) {
    QComplex c;
    c.basis = basis;
    c.level = level;
    c.n_valid = n_valid;
    const int N = static_cast<int>(basis.size()) - 1;
    for (int n = 0; n < N; ++n) {
        std::map<Term, std::size_t> idx;
        for (std::size_t i = 0; i < basis[n + 1].size(); ++i) idx[basis[n + 1][i]] = i;
        QMat m(QField{}, basis[n + 1].size(), basis[n].size());
        std::vector<TermVec> cols(basis[n].size());
        parallel_for(basis[n].size(), [&](std::size_t j) { cols[j] = apply(n, basis[n][j]); });
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (auto& [t, v] : cols[j]) {
                auto it = idx.find(t);
                if (it == idx.end()) throw DimensionMismatch("differential leaves the truncated complex");
                m(it->second, j) += v;
            }
        c.d.push_back(std::move(m));
    }
    return c;
}

inline QComplex single_chart(const ChartModel& M, int N, int n_valid) {
    std::vector<std::vector<Term>> basis;
    std::vector<std::vector<int>> level;
    for (int n = 0; n <= N; ++n) {
        basis.push_back(M.basis(n));
        std::vector<int> lv;
        for (auto& t : basis.back()) lv.push_back(M.level(t));
        level.push_back(std::move(lv));
    }
    return assemble(basis, level, M.apply, n_valid);
}

// Čech bicomplex of the cover {U0, U1} with U01: (a, b, c) -> (Da, Db, r1 b - r0 a - Dc).
inline QComplex two_chart(const ChartModel& M0, const ChartModel& M1, const ChartModel& M01,
                          const std::function<TermVec(const Term&)>& restrict, int N, int n_valid) {
    auto retag = [](std::vector<Term> v, int chart) {
        for (auto& t : v) t.chart = chart;
        return v;
    };
    const ChartModel* ms[3] = {&M0, &M1, &M01};
    std::vector<std::vector<Term>> basis;
    std::vector<std::vector<int>> level;
    for (int n = 0; n <= N; ++n) {
        std::vector<Term> b;
        for (int c = 0; c < 2; ++c) {
            auto v = retag(ms[c]->basis(n), c);
            b.insert(b.end(), v.begin(), v.end());
        }
        if (n >= 1) {
            auto v = retag(M01.basis(n - 1), 2);
            b.insert(b.end(), v.begin(), v.end());
        }
        std::vector<int> lv;
        for (auto& t : b) lv.push_back(ms[t.chart]->level(t));
        basis.push_back(std::move(b));
        level.push_back(std::move(lv));
    }
    auto apply = [&](int n, const Term& t) {
        TermVec out;
        auto push = [&](TermVec v, int chart, int sign) {
            for (auto& [u, c] : v) {
                u.chart = chart;
                out.push_back({u, c * sign});
            }
        };
        if (t.chart < 2) {
            push(ms[t.chart]->apply(n, t), t.chart, 1);
            push(restrict(t), 2, t.chart == 0 ? -1 : 1);
        } else {
            push(M01.apply(n - 1, t), 2, -1);
        }
        return out;
    };
    return assemble(basis, level, apply, n_valid);
}

inline TermVec terms_of(const Form& f, int chart, int tag) {
    TermVec out;
    for (auto& [k, c] : f.terms()) out.push_back({Term{chart, tag, k}, c});
    return out;
}

// Charts of X; for P1 the last chart is the overlap.
struct Cover {
    std::vector<Chart> charts;
    // restriction of chart c (0 or 1) coordinates into the overlap: x -> x^{sign}
    std::vector<long> sign = {1, -1};
};

inline Cover cover_of(const GmQuotient& X) {
    Cover c;
    switch (X.kind) {
        case GmQuotient::Kind::BGm:
        case GmQuotient::Kind::BGa: c.charts = {Chart{}}; break;
        case GmQuotient::Kind::Affine: c.charts = {Chart{X.weights, X.laurent}}; break;
        case GmQuotient::Kind::P1: {
            long w = X.b - X.a;
            if (w == 0) throw UnsupportedStack("trivial action on P1");
            c.charts = {Chart{{w}, {false}}, Chart{{-w}, {false}}, Chart{{w}, {true}}};
            break;
        }
    }
    for (auto& ch : c.charts) check_chart(ch);
    return c;
}

inline Group group_of(const GmQuotient& X) { return X.kind == GmQuotient::Kind::BGa ? Group::Ga : Group::Gm; }

// Restriction from chart c into the overlap at level k: x -> x^{±1}, group coordinates fixed.
inline TermVec restrict_term(const Cover& cov, Group g, const Term& t) {
    Level src(cov.charts[t.chart], g, static_cast<std::size_t>(t.tag)), tgt(cov.charts[2], g, src.k);
    std::vector<Form> img;
    for (std::size_t v = 0; v < src.nvars(); ++v) {
        std::vector<long> ex(tgt.nvars(), 0);
        ex[v] = v == 0 ? cov.sign[t.chart] : 1;
        img.push_back(Form::monomial(tgt.base, ex, 0));
    }
    return terms_of(pullback(Form::monomial(src.base, t.key.exp, t.key.mask), img, tgt.base), 2, t.tag);
}

// Same for models whose tag is a power of u (forms on X itself).
inline TermVec restrict_x_term(const Cover& cov, const Term& t) {
    Term s = t;
    s.tag = 0;
    auto out = restrict_term(cov, Group::Gm, s);
    for (auto& [u, c] : out) u.tag = t.tag;
    return out;
}

// --- the three models on one chart ------------------------------------------

// Čech nerve of the action: Tot of the de Rham complexes of X x G^k, k <= N, weight W.
inline ChartModel nerve_model(const Chart& ch, Group g, long W, int N) {
    auto levels = std::make_shared<std::vector<Level>>();
    for (int k = 0; k <= N + 1; ++k) levels->emplace_back(ch, g, static_cast<std::size_t>(k));
    ChartModel M;
    M.basis = [levels, W, N](int n) {
        std::vector<Term> out;
        for (int k = 0; k <= std::min(n, N); ++k)
            for (auto& key : (*levels)[k].strand(W, n - k)) out.push_back(Term{0, k, key});
        return out;
    };
    M.level = [](const Term& t) { return mask_degree(t.key.mask); };
    M.apply = [levels, N](int, const Term& t) {
        const Level& L = (*levels)[t.tag];
        Form f = Form::monomial(L.base, t.key.exp, t.key.mask);
        TermVec out = terms_of(f.d(), t.chart, t.tag);
        if (t.tag + 1 <= N) {
            const Level& U = (*levels)[t.tag + 1];
            int q = mask_degree(t.key.mask);
            Form delta(U.base);
            for (std::size_t j = 0; j <= L.k + 1; ++j) {
                Form pj = pullback(f, L.coface_images(U, j), U.base);
                delta += pj.scaled(j % 2 ? -1 : 1);
            }
            auto v = terms_of(delta.scaled(q % 2 ? -1 : 1), t.chart, t.tag + 1);
            out.insert(out.end(), v.begin(), v.end());
        }
        return out;
    };
    return M;
}

// Cartan model (Omega_X (x) Q[u])^{weight 0}, deg u = 2, D = d - u iota. Hodge level = form degree + j.
inline ChartModel cartan_model(const Chart& ch) {
    auto L = std::make_shared<Level>(ch, Group::Gm, 0);
    ChartModel M;
    M.basis = [L](int n) {
        std::vector<Term> out;
        for (int j = 0; 2 * j <= n; ++j)
            for (auto& key : L->strand(0, n - 2 * j)) out.push_back(Term{0, j, key});
        return out;
    };
    M.level = [](const Term& t) { return mask_degree(t.key.mask) + t.tag; };
    M.apply = [L](int, const Term& t) {
        Form f = Form::monomial(L->base, t.key.exp, t.key.mask);
        TermVec out = terms_of(f.d(), t.chart, t.tag);
        auto v = terms_of(contract(f, L->euler()).scaled(-1), t.chart, t.tag + 1);
        out.insert(out.end(), v.begin(), v.end());
        return out;
    };
    return M;
}

// Koszul model of the p-th exterior power of [Omega^1 -> O]: degree j holds
// (Lambda^{p-j} Omega)_0 u^j, differential iota. Level = j.
inline ChartModel koszul_model(const Chart& ch, int p) {
    auto L = std::make_shared<Level>(ch, Group::Gm, 0);
    ChartModel M;
    M.basis = [L, p](int j) {
        std::vector<Term> out;
        if (j > p) return out;
        for (auto& key : L->strand(0, p - j)) out.push_back(Term{0, j, key});
        return out;
    };
    M.level = [](const Term& t) { return t.tag; };
    M.apply = [L](int, const Term& t) {
        Form f = Form::monomial(L->base, t.key.exp, t.key.mask);
        return terms_of(contract(f, L->euler()), t.chart, t.tag + 1);
    };
    return M;
}

template <class Build>
QComplex over_cover(const Cover& cov, Group g, Build build, int N, int n_valid, bool tag_is_level) {
    if (cov.charts.size() == 1) return single_chart(build(cov.charts[0]), N, n_valid);
    auto m0 = build(cov.charts[0]), m1 = build(cov.charts[1]), m01 = build(cov.charts[2]);
    auto restrict = [&](const Term& t) { return tag_is_level ? restrict_term(cov, g, t) : restrict_x_term(cov, t); };
    return two_chart(m0, m1, m01, restrict, N, n_valid);
}

}  // namespace stk

// --- public operations -------------------------------------------------------

// Tot^{<=N} of the Čech nerve in one weight (weight 0 for G_m quotients).
inline stk::QComplex nerve_complex(const GmQuotient& X, int N, long W = 0) {
    auto cov = stk::cover_of(X);
    auto g = stk::group_of(X);
    if (g == stk::Group::Gm && W != 0) throw UnsupportedStack("G_m nerve is built in weight 0 only");
    return stk::over_cover(
        cov, g, [&](const stk::Chart& c) { return stk::nerve_model(c, g, W, N); }, N, N - 2, true);
}

inline stk::QComplex cartan_complex(const GmQuotient& X, int N) {
    if (!X.is_gm_quotient()) throw UnsupportedStack("Cartan model needs a torus action");
    auto cov = stk::cover_of(X);
    return stk::over_cover(cov, stk::Group::Gm, stk::cartan_model, N, N - 1, false);
}

inline stk::QComplex koszul_complex(const GmQuotient& X, int p) {
    if (!X.is_gm_quotient()) throw UnsupportedStack("Koszul model needs a torus action");
    auto cov = stk::cover_of(X);
    int N = p + 1;
    return stk::over_cover(
        cov, stk::Group::Gm, [&](const stk::Chart& c) { return stk::koszul_model(c, p); }, N, N, false);
}

// Cobar complex of G_m with trivial coefficients on exponents |a| <= K (a sub-coalgebra).
inline std::vector<std::size_t> gm_cobar_dims(int n_max, int K = 1) {
    const std::size_t S = static_cast<std::size_t>(2 * K + 1);
    auto tuples = [&](int n) {
        std::size_t c = 1;
        for (int i = 0; i < n; ++i) c *= S;
        return c;
    };
    auto differential = [&](int n) {
        stk::QMat m(stk::QField{}, tuples(n + 1), tuples(n));
        for (std::size_t col = 0; col < tuples(n); ++col) {
            std::vector<std::size_t> a(static_cast<std::size_t>(n));
            for (std::size_t x = col, i = static_cast<std::size_t>(n); i-- > 0; x /= S) a[i] = x % S;
            auto enc = [&](const std::vector<std::size_t>& v) {
                std::size_t r = 0;
                for (auto x : v) r = r * S + x;
                return r;
            };
            std::vector<std::size_t> v = a;
            v.insert(v.begin(), static_cast<std::size_t>(K));
            m(enc(v), col) += 1;
            for (int i = 1; i <= n; ++i) {
                v = a;
                v.insert(v.begin() + i, a[static_cast<std::size_t>(i - 1)]);
                m(enc(v), col) += i % 2 ? -1 : 1;
            }
            v = a;
            v.push_back(static_cast<std::size_t>(K));
            m(enc(v), col) += (n + 1) % 2 ? -1 : 1;
        }
        return m;
    };
    std::vector<std::size_t> out;
    std::vector<std::size_t> ranks;
    for (int n = 0; n <= n_max; ++n) ranks.push_back(rank(differential(n)));
    for (int n = 0; n <= n_max; ++n) out.push_back(tuples(n) - ranks[n] - (n ? ranks[n - 1] : 0));
    return out;
}

// H^n(G_a, Q) summed over weights.
inline std::size_t ga_cohomology_q(int n) {
    if (n < 0) return 0;
    StandardComplex c(n, 2 * n + 4, CoeffRing::rationals());
    std::size_t s = 0;
    for (int w = 0; w <= 2 * n + 4; w += 2) s += c.cohomology(n, w).rank;
    return s;
}

// dim H^{p,q} = H^q(X, Lambda^p L) over Q.
inline std::size_t hodge_cohomology(const GmQuotient& X, int p, int q, const CoeffRing& ring = CoeffRing::rationals()) {
    if (ring.kind != CoeffRing::Kind::Q) throw UnsupportedStack("stack cohomology is computed over Q");
    if (p < 0 || q < 0) return 0;
    switch (X.kind) {
        case GmQuotient::Kind::BGm: return q < p ? 0 : gm_cobar_dims(q - p)[static_cast<std::size_t>(q - p)];
        case GmQuotient::Kind::BGa: return ga_cohomology_q(q - p);
        default: return koszul_complex(X, p).cohomology_dim(q);
    }
}

inline std::vector<std::size_t> derham_dims(const GmQuotient& X, int n_max) {
    auto c = nerve_complex(X, n_max + 2);
    std::vector<std::size_t> out;
    for (int n = 0; n <= n_max; ++n) out.push_back(c.cohomology_dim(n));
    return out;
}

inline std::size_t derham_cohomology(const GmQuotient& X, int n, const CoeffRing& ring = CoeffRing::rationals()) {
    if (ring.kind != CoeffRing::Kind::Q) throw UnsupportedStack("stack cohomology is computed over Q");
    return derham_dims(X, n).back();
}

inline std::vector<std::size_t> cartan_dims(const GmQuotient& X, int n_max) {
    auto c = cartan_complex(X, n_max + 1);
    std::vector<std::size_t> out;
    for (int n = 0; n <= n_max; ++n) out.push_back(c.cohomology_dim(n));
    return out;
}

// iota d + d iota = W id on per-level strands of weight W != 0, levels k <= k_max.
struct CartanIdentityReport {
    std::size_t strands = 0, failures = 0;
    bool pass() const { return failures == 0; }
};

inline CartanIdentityReport cartan_identity(const GmQuotient& X, std::size_t k_max = 2, long w_max = 3) {
    auto cov = stk::cover_of(X);
    auto g = stk::group_of(X);
    CartanIdentityReport rep;
    for (auto& ch : cov.charts)
        for (std::size_t k = 0; k <= k_max; ++k) {
            stk::Level L(ch, g, k);
            auto e = L.euler();
            for (long W = -w_max; W <= w_max; ++W) {
                if (W == 0) continue;
                std::vector<std::vector<FormKey>> b;
                std::size_t total = 0;
                for (int q = 0; q <= static_cast<int>(L.nvars()); ++q) {
                    b.push_back(L.strand(W, q));
                    total += b.back().size();
                }
                if (!total) continue;
                ++rep.strands;
                for (int q = 0; q <= static_cast<int>(L.nvars()); ++q)
                    for (auto& key : b[q]) {
                        Form f = Form::monomial(L.base, key.exp, key.mask);
                        Form lie = stk::contract(f.d(), e) + stk::contract(f, e).d();
                        if (!(lie == f.scaled(W))) ++rep.failures;
                    }
            }
        }
    return rep;
}

// Sum over p of Koszul H^{p,q} against E_infinity of the u-degree filtration of each K_p.
inline bool koszul_consistent(const GmQuotient& X, int n_max) {
    for (int p = 0; p <= n_max; ++p) {
        auto k = koszul_complex(X, p);
        auto fc = k.filtered();
        auto einf = e_infinity(fc);
        for (int q = 0; q + p <= n_max; ++q)
            if (einf.total(q) != k.cohomology_dim(q)) return false;
    }
    return true;
}

struct HdrReport {
    std::string stack;
    int n_max = 0;
    std::map<std::pair<int, int>, std::size_t> hodge;  // (p, q), p + q <= n_max
    std::vector<std::size_t> e1_totals, derham, derham_cartan;
    bool e1_model_matches = true;    // E_1 of the filtered model equals the Hodge table
    bool cross_model_agree = true;   // nerve vs Cartan totals (G_m quotients)
    bool koszul_consistent = true;
    bool d_squared_zero = true;
    bool by_dimension = true;        // sum of Hodge dims = de Rham dims for all n <= n_max
    bool by_differentials = true;    // every d_r (r >= 1) vanishes in range
    std::optional<LocatedDifferential> first_nonzero;
    bool degenerate() const { return by_dimension && by_differentials; }
    bool agree() const { return by_dimension == by_differentials; }
    std::string verdict() const { return degenerate() ? "degenerate" : "non-degenerate"; }
};

inline HdrReport hdr_report(const GmQuotient& X, int n_max) {
    if (n_max < 0) throw ConfigError("n_max must be nonnegative");
    HdrReport r;
    r.stack = X.str();
    r.n_max = n_max;
    r.e1_totals.assign(static_cast<std::size_t>(n_max + 1), 0);
    for (int p = 0; p <= n_max; ++p)
        for (int q = 0; p + q <= n_max; ++q) {
            auto h = hodge_cohomology(X, p, q);
            r.hodge[{p, q}] = h;
            r.e1_totals[p + q] += h;
        }
    r.derham = derham_dims(X, n_max);

    std::map<std::pair<int, int>, std::size_t> e1;
    auto absorb = [&](const stk::QComplex& c) {
        r.d_squared_zero = r.d_squared_zero && c.d_squared_zero();
        auto fc = c.filtered();
        fc.n_valid = n_max;
        auto pg = page(fc, 1);
        for (auto& [k, v] : pg.table)
            if (k.first + k.second <= n_max) e1[k] += v;
        auto v = degenerates_at(fc, 1);
        if (!v.by_differentials) {
            r.by_differentials = false;
            auto cand = *v.first_nonzero;
            if (!r.first_nonzero || std::make_pair(cand.r, cand.p) < std::make_pair(r.first_nonzero->r, r.first_nonzero->p))
                r.first_nonzero = cand;
        }
    };
    if (X.is_gm_quotient()) {
        absorb(cartan_complex(X, n_max + 1));
        r.derham_cartan = cartan_dims(X, n_max);
        r.cross_model_agree = r.derham_cartan == r.derham;
        r.koszul_consistent = koszul_consistent(X, n_max);
    } else {
        // H^{p,p} sits in scaling weight p, H^{p,p+1} in weight p + 1
        for (long W = 0; W <= n_max / 2 + 1; ++W) absorb(nerve_complex(X, n_max + 2, W));
    }
    for (auto& [k, v] : r.hodge) {
        auto it = e1.find(k);
        if ((it == e1.end() ? 0 : it->second) != v) r.e1_model_matches = false;
    }
    for (auto& [k, v] : e1)
        if (v && !r.hodge.count(k)) r.e1_model_matches = false;
    for (int n = 0; n <= n_max; ++n)
        if (r.e1_totals[n] != r.derham[n]) r.by_dimension = false;
    return r;
}

}  // namespace hodgelab
