#pragma once

#include <gmpxx.h>

#include <bit>
#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hodgelab/error.hpp"
#include "hodgelab/exactlin/field.hpp"
#include "hodgelab/exactlin/int_mat.hpp"
#include "hodgelab/gralg/coeff_ring.hpp"
#include "hodgelab/gralg/ring_cohomology.hpp"

namespace hodgelab {

// k[x_1..x_d] with some variables inverted. Every x_i and dx_i has weight 1.
struct DeRhamBase {
    CoeffRing ring = CoeffRing::integers();
    std::vector<std::string> names;
    std::vector<bool> laurent;

    static DeRhamBase polynomial(CoeffRing ring, std::size_t d) { return make(ring, d, std::vector<bool>(d, false)); }
    static DeRhamBase make(CoeffRing ring, std::size_t d, std::vector<bool> inverted) {
        DeRhamBase b;
        b.ring = ring;
        if (inverted.size() != d) throw DimensionMismatch("inverted mask");
        for (std::size_t i = 0; i < d; ++i) b.names.push_back(d == 1 ? "x" : "x" + std::to_string(i + 1));
        b.laurent = std::move(inverted);
        return b;
    }
    std::size_t nvars() const { return names.size(); }
    bool has_laurent() const {
        for (bool l : laurent)
            if (l) return true;
        return false;
    }
    bool operator==(const DeRhamBase&) const = default;
};

struct FormKey {
    std::vector<long> exp;
    unsigned mask = 0;  // bit i set: dx_i present
    auto operator<=>(const FormKey&) const = default;
};

inline int mask_degree(unsigned m) { return std::popcount(m); }

// sign of dx_A ^ dx_B rewritten in increasing order (0 if they overlap)
inline int wedge_sign(unsigned a, unsigned b) {
    if (a & b) return 0;
    int inversions = 0;
    for (unsigned i = 0; i < 32; ++i)
        if (b >> i & 1u) inversions += std::popcount(a >> (i + 1));
    return inversions % 2 ? -1 : 1;
}

class Form {
public:
    using Terms = std::map<FormKey, mpq_class>;

    explicit Form(const DeRhamBase& base) : base_(std::make_shared<DeRhamBase>(base)) {}
    explicit Form(std::shared_ptr<const DeRhamBase> base) : base_(std::move(base)) {}

    static Form monomial(const Form& like, std::vector<long> exp, unsigned mask, const mpq_class& c = 1) {
        Form f(like.base_);
        f.add_term({std::move(exp), mask}, c);
        return f;
    }
    static Form monomial(std::shared_ptr<const DeRhamBase> base, std::vector<long> exp, unsigned mask,
                         const mpq_class& c = 1) {
        Form f(std::move(base));
        f.add_term({std::move(exp), mask}, c);
        return f;
    }
    static Form monomial(const DeRhamBase& base, std::vector<long> exp, unsigned mask, const mpq_class& c = 1) {
        Form f(base);
        f.add_term({std::move(exp), mask}, c);
        return f;
    }

    const DeRhamBase& base() const { return *base_; }
    const std::shared_ptr<const DeRhamBase>& base_ptr() const { return base_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(FormKey k, const mpq_class& c) {
        const auto& b = *base_;
        if (k.exp.size() != b.nvars()) throw DimensionMismatch("form exponent length");
        for (std::size_t i = 0; i < k.exp.size(); ++i)
            if (k.exp[i] < 0 && !b.laurent[i]) throw RingMismatch("negative power of " + b.names[i]);
        mpq_class v = b.ring.normalize(c);
        if (v == 0) return;
        auto [it, inserted] = terms_.try_emplace(std::move(k), v);
        if (!inserted) {
            it->second = b.ring.normalize(it->second + v);
            if (it->second == 0) terms_.erase(it);
        }
    }

    Form& operator+=(const Form& o) {
        same(o);
        for (auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    Form& operator-=(const Form& o) {
        same(o);
        for (auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    Form scaled(const mpq_class& s) const {
        Form out(base_);
        for (auto& [k, c] : terms_) out.add_term(k, c * s);
        return out;
    }

    // wedge product
    friend Form operator*(const Form& a, const Form& b) {
        a.same(b);
        Form out(a.base_);
        for (auto& [ka, ca] : a.terms_)
            for (auto& [kb, cb] : b.terms_) {
                int s = wedge_sign(ka.mask, kb.mask);
                if (!s) continue;
                FormKey k{ka.exp, ka.mask | kb.mask};
                for (std::size_t i = 0; i < k.exp.size(); ++i) k.exp[i] += kb.exp[i];
                out.add_term(std::move(k), ca * cb * s);
            }
        return out;
    }

    Form d() const {
        Form out(base_);
        for (auto& [k, c] : terms_)
            for (std::size_t i = 0; i < k.exp.size(); ++i) {
                if (k.exp[i] == 0 || (k.mask >> i & 1u)) continue;
                FormKey t{k.exp, k.mask | (1u << i)};
                t.exp[i] -= 1;
                int sign = std::popcount(k.mask & ((1u << i) - 1)) % 2 ? -1 : 1;
                out.add_term(std::move(t), c * k.exp[i] * sign);
            }
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        const auto& b = *base_;
        for (auto& [k, c] : terms_) {
            os << (first ? "" : " + ") << c;
            first = false;
            for (std::size_t i = 0; i < k.exp.size(); ++i) {
                if (!k.exp[i]) continue;
                os << "*" << b.names[i];
                if (k.exp[i] != 1) os << "^" << k.exp[i];
            }
            for (std::size_t i = 0; i < k.exp.size(); ++i)
                if (k.mask >> i & 1u) os << (k.mask & ((1u << i) - 1) ? "^d" : "*d") << b.names[i];
        }
        return os.str();
    }

    friend bool operator==(const Form& a, const Form& b) { return a.terms_ == b.terms_; }

private:
    void same(const Form& o) const {
        if (base_ != o.base_ && !(*base_ == *o.base_)) throw RingMismatch("forms over different bases");
    }
    std::shared_ptr<const DeRhamBase> base_;
    Terms terms_;
};

// One weight strand (or multidegree strand) of the de Rham complex.
struct DeRhamStrand {
    std::shared_ptr<const DeRhamBase> base;
    std::vector<std::vector<FormKey>> basis;  // per form degree 0..d
    std::vector<IntMat> diff;                 // diff[k]: degree k -> k+1

    std::size_t dim(int k) const { return k < 0 || k >= static_cast<int>(basis.size()) ? 0 : basis[k].size(); }

    IntMat d_in(int k) const { return k <= 0 ? IntMat(dim(k), 0) : diff[k - 1]; }
    IntMat d_out(int k) const { return k >= static_cast<int>(diff.size()) ? IntMat(0, dim(k)) : diff[k]; }

    AbGroup cohomology(int k) const { return cohomology(k, base->ring); }
    AbGroup cohomology(int k, const CoeffRing& ring) const {
        if (k < 0 || k >= static_cast<int>(basis.size())) return AbGroup();
        return cohomology_over(d_in(k), d_out(k), ring);
    }

    // Integer coordinates; coefficients must be integral (ring representatives).
    std::vector<mpz_class> coords(const Form& f, int k) const {
        std::vector<mpz_class> v(dim(k), 0);
        for (auto& [key, c] : f.terms()) {
            auto it = std::lower_bound(basis[k].begin(), basis[k].end(), key);
            if (it == basis[k].end() || *it != key || mask_degree(key.mask) != k)
                throw DimensionMismatch("form outside strand");
            if (c.get_den() != 1) throw RingMismatch("non-integral coordinate");
            v[it - basis[k].begin()] = c.get_num();
        }
        return v;
    }
    Form form(int k, const std::vector<mpz_class>& v) const {
        Form f(base);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) f.add_term(basis[k][i], v[i]);
        return f;
    }

    // f is a coboundary (base ring Z or F_p).
    bool is_exact(const Form& f, int k) const {
        auto v = coords(f, k);
        if (base->ring.kind == CoeffRing::Kind::Fp) {
            PrimeField fld(base->ring.p);
            auto m = Mat<PrimeField>::from_int(fld, d_in(k));
            std::vector<std::uint64_t> x(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) x[i] = fld.from_mpz(v[i]);
            return in_span(m, x);
        }
        if (base->ring.kind == CoeffRing::Kind::Z) return solve_integer(d_in(k), v).has_value();
        throw UnsupportedBase("exactness test over Z or F_p");
    }
};

namespace detail {

inline void build_strand_diffs(DeRhamStrand& s) {
    const std::size_t d = s.base->nvars();
    for (std::size_t k = 0; k < d; ++k) {
        IntMat m(s.basis[k + 1].size(), s.basis[k].size());
        for (std::size_t c = 0; c < s.basis[k].size(); ++c) {
            Form f(s.base);
            f.add_term(s.basis[k][c], 1);
            auto df = f.d();
            for (auto& [key, coef] : df.terms()) {
                auto it = std::lower_bound(s.basis[k + 1].begin(), s.basis[k + 1].end(), key);
                m.set(static_cast<std::size_t>(it - s.basis[k + 1].begin()), c, coef.get_num());
            }
        }
        s.diff.push_back(std::move(m));
    }
}

}  // namespace detail

// All x^e dx_S of total weight w. Needs a polynomial base or a single variable.
inline DeRhamStrand de_rham_strand(const DeRhamBase& base, long w) {
    const std::size_t d = base.nvars();
    if (base.has_laurent() && d > 1) throw UnsupportedBase("total-weight strands of a Laurent base in several variables are infinite");
    DeRhamStrand s{std::make_shared<DeRhamBase>(base), std::vector<std::vector<FormKey>>(d + 1), {}};
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        const int k = mask_degree(mask);
        const long left = w - k;
        if (d == 0) {
            if (left == 0) s.basis[0].push_back({{}, 0});
            continue;
        }
        if (base.has_laurent()) {
            s.basis[k].push_back({{left}, mask});
            continue;
        }
        if (left < 0) continue;
        std::vector<long> e(d, 0);
        std::function<void(std::size_t, long)> rec = [&](std::size_t i, long rem) {
            if (i + 1 == d) {
                e[i] = rem;
                s.basis[k].push_back({e, mask});
                return;
            }
            for (long x = 0; x <= rem; ++x) {
                e[i] = x;
                rec(i + 1, rem - x);
            }
        };
        rec(0, left);
    }
    for (auto& b : s.basis) std::sort(b.begin(), b.end());
    detail::build_strand_diffs(s);
    return s;
}

// Multidegree strand: x^e dx_S with e + 1_S = m.
inline DeRhamStrand de_rham_strand_multi(const DeRhamBase& base, const std::vector<long>& m) {
    const std::size_t d = base.nvars();
    if (m.size() != d) throw DimensionMismatch("multidegree length");
    DeRhamStrand s{std::make_shared<DeRhamBase>(base), std::vector<std::vector<FormKey>>(d + 1), {}};
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        std::vector<long> e = m;
        bool ok = true;
        for (std::size_t i = 0; i < d; ++i) {
            if (mask >> i & 1u) e[i] -= 1;
            if (e[i] < 0 && !base.laurent[i]) ok = false;
        }
        if (ok) s.basis[mask_degree(mask)].push_back({e, mask});
    }
    for (auto& b : s.basis) std::sort(b.begin(), b.end());
    detail::build_strand_diffs(s);
    return s;
}

inline AbGroup de_rham_cohomology(const DeRhamBase& base, int n, long w) { return de_rham_strand(base, w).cohomology(n); }

// H^n_w for 0 <= w <= w_max (polynomial or one-variable Laurent base).
inline std::map<std::pair<int, long>, AbGroup> de_rham_table(const DeRhamBase& base, long w_max, long w_min = 0) {
    std::map<std::pair<int, long>, AbGroup> out;
    for (long w = w_min; w <= w_max; ++w) {
        auto s = de_rham_strand(base, w);
        for (int n = 0; n <= static_cast<int>(base.nvars()); ++n) out[{n, w}] = s.cohomology(n);
    }
    return out;
}

// C^{-1}: Omega_{A^(1)} -> H(F_* Omega_A), on forms: x^e dx_S -> x^{pe} prod_{i in S} x_i^{p-1} dx_S.
inline Form cartier_inverse(const Form& f) {
    const auto& b = f.base();
    if (b.ring.kind != CoeffRing::Kind::Fp) throw WrongCharacteristic("Cartier operator needs an F_p base");
    const long p = static_cast<long>(b.ring.p);
    Form out(f.base_ptr());
    for (auto& [k, c] : f.terms()) {
        FormKey t{k.exp, k.mask};
        for (std::size_t i = 0; i < t.exp.size(); ++i) t.exp[i] = p * t.exp[i] + ((k.mask >> i & 1u) ? p - 1 : 0);
        out.add_term(std::move(t), c);
    }
    return out;
}

// Random homogeneous form of weight w and degree k with small integer coefficients.
inline Form random_form(const DeRhamBase& base, std::mt19937_64& rng, int k, long w, int terms = 4) {
    auto s = de_rham_strand(base, w);
    Form f(s.base);
    if (k < 0 || k > static_cast<int>(base.nvars()) || s.basis[k].empty()) return f;
    std::uniform_int_distribution<std::size_t> pick(0, s.basis[k].size() - 1);
    std::uniform_int_distribution<long> coef(-4, 4);
    for (int t = 0; t < terms; ++t) f.add_term(s.basis[k][pick(rng)], coef(rng));
    return f;
}

struct CartierStrandResult {
    int degree;
    long weight;
    std::size_t source_dim, target_dim, image_rank;
    bool cocycles;
    bool pass;
};

struct CartierReport {
    std::uint64_t p;
    std::size_t vars;
    long w_max;
    std::vector<CartierStrandResult> strands;
    bool pass = true;
};

// For each degree i and weight w <= w_max: C^{-1} sends the basis of Omega^i_{A^(1)}
// (weight w/p) bijectively onto a basis of H^i_w(Omega_A).
inline CartierReport verify_cartier_iso(std::uint64_t p, std::size_t d, long w_max) {
    auto base = DeRhamBase::polynomial(CoeffRing::fp(p), d);
    PrimeField fld(p);
    CartierReport rep{p, d, w_max, {}, true};
    for (long w = 0; w <= w_max; ++w) {
        auto tgt = de_rham_strand(base, w);
        std::optional<DeRhamStrand> src;
        if (w % static_cast<long>(p) == 0) src = de_rham_strand(base, w / static_cast<long>(p));
        for (int i = 0; i <= static_cast<int>(d); ++i) {
            CartierStrandResult r{i, w, src ? src->dim(i) : 0, tgt.cohomology(i).rank, 0, true, false};
            auto bnd = Mat<PrimeField>::from_int(fld, tgt.d_in(i));
            Mat<PrimeField> imgs(fld, tgt.dim(i), r.source_dim);
            auto dout = Mat<PrimeField>::from_int(fld, tgt.d_out(i));
            for (std::size_t c = 0; c < r.source_dim; ++c) {
                Form f(src->base);
                f.add_term(src->basis[i][c], 1);
                auto v = tgt.coords(cartier_inverse(f), i);
                std::vector<std::uint64_t> x(v.size());
                for (std::size_t j = 0; j < v.size(); ++j) imgs(j, c) = x[j] = fld.from_mpz(v[j]);
                for (auto y : dout.apply(x))
                    if (y) r.cocycles = false;
            }
            std::size_t rb = rank(bnd);
            r.image_rank = rank(bnd.hcat(imgs)) - rb;
            r.pass = r.cocycles && r.image_rank == r.source_dim && r.source_dim == r.target_dim;
            rep.pass = rep.pass && r.pass;
            rep.strands.push_back(r);
        }
    }
    return rep;
}

// C^{-1}(ab) = C^{-1}(a) C^{-1}(b) and C^{-1}(df) = [f^{p-1} df] in cohomology,
// on random homogeneous inputs whose images stay below w_max.
struct CartierMultiplicativity {
    std::size_t pairs = 0, failures = 0;
    std::size_t df_checks = 0, df_failures = 0;
};

inline CartierMultiplicativity cartier_multiplicativity(std::uint64_t p, std::size_t d, long w_max, std::size_t pairs,
                                                        std::uint64_t seed) {
    auto base = DeRhamBase::polynomial(CoeffRing::fp(p), d);
    std::mt19937_64 rng(seed);
    const long lp = static_cast<long>(p);
    const long src_max = w_max / lp;
    CartierMultiplicativity out;
    std::uniform_int_distribution<int> deg(0, static_cast<int>(d));
    for (std::size_t t = 0; t < pairs; ++t) {
        int ka = deg(rng), kb = std::uniform_int_distribution<int>(0, static_cast<int>(d) - ka)(rng);
        if (ka + kb > src_max) ka = kb = 0;
        long wa = std::uniform_int_distribution<long>(ka, src_max - kb)(rng);
        long wb = std::uniform_int_distribution<long>(kb, src_max - wa)(rng);
        auto a = random_form(base, rng, ka, wa), b = random_form(base, rng, kb, wb);
        Form lhs = cartier_inverse(a * b), rhs = cartier_inverse(a) * cartier_inverse(b);
        Form diff = lhs - rhs;
        ++out.pairs;
        if (!diff.is_zero()) {
            auto s = de_rham_strand(base, lp * (wa + wb));
            if (!s.is_exact(diff, ka + kb)) ++out.failures;
        }
        // f of weight <= src_max: C^{-1}(df) against f^{p-1} df
        long wf = std::uniform_int_distribution<long>(1, std::max<long>(1, src_max))(rng);
        auto f = random_form(base, rng, 0, wf);
        Form fp1 = Form::monomial(base, std::vector<long>(d, 0), 0);
        for (long i = 0; i < lp - 1; ++i) fp1 = fp1 * f;
        Form expect = fp1 * f.d();
        Form got = cartier_inverse(f.d());
        ++out.df_checks;
        if (!(got - expect).is_zero() && !de_rham_strand(base, lp * wf).is_exact(got - expect, 1)) ++out.df_failures;
    }
    return out;
}

// --- filtrations -------------------------------------------------------------

enum class FiltrationKind { Hodge, Conjugate };

// Complex of finite-dimensional spaces over a field, with its inclusion into
// the ambient strand.
template <class F>
struct FieldComplex {
    F field;
    std::vector<Mat<F>> diff;       // diff[k]: k -> k+1
    std::vector<Mat<F>> inclusion;  // inclusion[k]: sub_k -> ambient_k

    std::size_t dim(int k) const { return k < 0 || k >= static_cast<int>(inclusion.size()) ? 0 : inclusion[k].cols; }
    std::size_t cohomology_dim(int k) const {
        std::size_t r_out = k < static_cast<int>(diff.size()) ? rank(diff[k]) : 0;
        std::size_t r_in = k > 0 ? rank(diff[k - 1]) : 0;
        return dim(k) - r_out - r_in;
    }
};

template <class F>
FieldComplex<F> filtration(const DeRhamStrand& s, F field, FiltrationKind kind, int r) {
    const int top = static_cast<int>(s.basis.size()) - 1;
    FieldComplex<F> out{field, {}, {}};
    std::vector<Mat<F>> amb;
    for (int k = 0; k < top; ++k) amb.push_back(Mat<F>::from_int(field, s.diff[k]));
    for (int k = 0; k <= top; ++k) {
        const std::size_t n = s.dim(k);
        bool keep = kind == FiltrationKind::Hodge ? k >= r : k < r;
        if (keep) {
            out.inclusion.push_back(Mat<F>::identity(field, n));
        } else if (kind == FiltrationKind::Conjugate && k == r) {
            out.inclusion.push_back(k < top ? kernel_basis(amb[k]) : Mat<F>::identity(field, n));
        } else {
            out.inclusion.push_back(Mat<F>(field, n, 0));
        }
    }
    // restricted differentials: coordinates of d(incl_k) in incl_{k+1}
    for (int k = 0; k < top; ++k) {
        const auto& src = out.inclusion[k];
        const auto& tgt = out.inclusion[k + 1];
        Mat<F> m(field, tgt.cols, src.cols);
        auto img = amb[k] * src;
        for (std::size_t c = 0; c < src.cols; ++c) {
            auto x = span_coordinates(tgt, img.column(c));
            if (!x) throw FiltrationNotPreserved("differential leaves the filtration step");
            for (std::size_t j = 0; j < tgt.cols; ++j) m(j, c) = (*x)[j];
        }
        out.diff.push_back(std::move(m));
    }
    return out;
}

}  // namespace hodgelab
