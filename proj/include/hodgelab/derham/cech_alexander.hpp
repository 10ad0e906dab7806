#pragma once

#include <gmpxx.h>

#include <bit>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hodgelab/derham/forms.hpp"
#include "hodgelab/derham/pd_forms.hpp"
#include "hodgelab/exactlin/cohomology.hpp"
#include "hodgelab/gralg/pd.hpp"

namespace hodgelab {

// Level i of the Cech-Alexander complex of k[x] over F_p: the PD envelope of the
// diagonal in k[x_1..x_i], generators s_j = x_1 - x_{j+1}.
inline PDAlgebraPtr cech_level(std::uint64_t p, int i, long max_weight = -1) {
    PDAlgebra::Spec s;
    s.p = p;
    s.modulus = static_cast<unsigned long>(p);
    for (int k = 0; k < i; ++k) s.names.push_back("x" + std::to_string(k + 1));
    for (int k = 1; k < i; ++k) s.gens.push_back(PDGenerator{0, k});
    if (max_weight >= 0) s.max_weight = max_weight;
    return PDAlgebra::make(s);
}

// x_v^{[k]} = x_v^k / k! for k < p
inline PDElement divided_var(const PDAlgebraPtr& alg, std::size_t v, long k) {
    mpz_class inv, f = factorial(k);
    if (mpz_invert(inv.get_mpz_t(), f.get_mpz_t(), alg->modulus().get_mpz_t()) == 0)
        throw RingMismatch("k! not invertible");
    return PDElement::var(alg, v).pow(static_cast<unsigned>(k)).scaled(inv);
}

// Element of D(2) pairing with [x^{p-1} dx]: (x_1^p - x_2^p) / p in divided powers,
// sum_{k=1}^{p} (p-1)!/(p-k)! x_2^{p-k} (x_1-x_2)^{[k]}.
inline PDElement cech_class_exact(const PDAlgebraPtr& d2) {
    const long lp = static_cast<long>(d2->p());
    PDElement a(d2);
    for (long k = 1; k <= lp; ++k)
        a += (PDElement::var(d2, 1).pow(static_cast<unsigned>(lp - k)) * PDElement::gen_power(d2, 0, k))
                 .scaled(factorial(lp - 1) / factorial(lp - k));
    return a;
}

// Variant with lowered x_1 exponents and the opposite sign on the sum:
// (p-1)! ((x_1-x_2)^{[p]} + sum_{i=1}^{p-1} (-1)^i x_1^{[p-1-i]} x_2^{[i]}).
inline PDElement cech_class_variant(const PDAlgebraPtr& d2) {
    const long lp = static_cast<long>(d2->p());
    PDElement a = PDElement::gen_power(d2, 0, lp);
    for (long i = 1; i < lp; ++i) a += (divided_var(d2, 0, lp - 1 - i) * divided_var(d2, 1, i)).scaled(i % 2 ? -1 : 1);
    return a.scaled(factorial(lp - 1));
}

struct CechStrandResult {
    long weight;
    std::size_t tot_h1, derham_h1, tot_h0, derham_h0;
    bool pass;
};

struct CechAlexanderReport {
    std::uint64_t p;
    long w_max;
    std::vector<CechStrandResult> strands;
    bool dd_zero = true;            // d_dR^2, cech^2, commutation on computed strands
    bool top_class_cocycle = false;  // (x^{p-1}dx, a) is a total cocycle
    bool top_class_nonzero = false;
    bool variant_matches_mod_fil0 = false;
    bool variant_is_exact_partner = false;  // d_dR(variant) equals the Cech image on the nose
    bool dx_class_cocycle = false;
    std::string a_exact, a_variant;
    bool pass = false;
};

namespace detail {

// Basis of Omega^q_{D(i)} in one weight.
struct PDFormBasis {
    std::vector<PDFormKey> keys;
    std::size_t index(const PDFormKey& k) const {
        auto it = std::lower_bound(keys.begin(), keys.end(), k);
        if (it == keys.end() || *it != k) throw DimensionMismatch("PD form outside strand");
        return static_cast<std::size_t>(it - keys.begin());
    }
};

inline PDFormBasis pd_form_basis(const PDAlgebra& alg, int q, long w) {
    PDFormBasis b;
    const unsigned n = static_cast<unsigned>(alg.nvars());
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != q) continue;
        if (w - q < 0) continue;
        for (auto& k : pd_strand_basis(alg, w - q)) b.keys.push_back({k, mask});
    }
    std::sort(b.keys.begin(), b.keys.end());
    return b;
}

inline std::vector<mpz_class> pd_coords(const PDFormBasis& b, const PDForm& f) {
    std::vector<mpz_class> v(b.keys.size(), 0);
    for (auto& [k, c] : f.terms()) v[b.index(k)] = c;
    return v;
}

}  // namespace detail

// Weight-truncated total complex of the Cech-Alexander double complex for B = F_p[x]
// with levels D(1), D(2), D(3), enough for H^0 and H^1.
class CechAlexanderComplex {
public:
    CechAlexanderComplex(std::uint64_t p) : p_(p) {
        for (int i = 1; i <= 3; ++i) levels_.push_back(cech_level(p, i));
    }

    const PDAlgebraPtr& level(int i) const { return levels_.at(static_cast<std::size_t>(i - 1)); }

    // Components of total degree t: (level i, form degree q) with i - 1 + q = t.
    std::vector<std::pair<int, int>> components(int t) const {
        std::vector<std::pair<int, int>> out;
        for (int i = 1; i <= 3; ++i) {
            int q = t - (i - 1);
            if (q >= 0 && q <= i) out.push_back({i, q});
        }
        return out;
    }

    // Total differential from degree t to t+1 in weight w; d_dR + (-1)^q cech.
    IntMat total_d(int t, long w) const {
        auto src = components(t), tgt = components(t + 1);
        std::vector<detail::PDFormBasis> sb, tb;
        std::vector<std::size_t> soff{0}, toff{0};
        for (auto [i, q] : src) {
            sb.push_back(detail::pd_form_basis(*level(i), q, w));
            soff.push_back(soff.back() + sb.back().keys.size());
        }
        for (auto [i, q] : tgt) {
            tb.push_back(detail::pd_form_basis(*level(i), q, w));
            toff.push_back(toff.back() + tb.back().keys.size());
        }
        IntMat m(toff.back(), soff.back());
        auto place = [&](const PDForm& img, int ti, int tq, std::size_t col, long sign) {
            for (std::size_t k = 0; k < tgt.size(); ++k)
                if (tgt[k] == std::make_pair(ti, tq)) {
                    for (auto& [key, c] : img.terms()) m.add(toff[k] + tb[k].index(key), col, c * sign);
                    return;
                }
            if (!img.is_zero()) throw TruncationTooSmall("total differential leaves the truncation");
        };
        for (std::size_t s = 0; s < src.size(); ++s) {
            auto [i, q] = src[s];
            for (std::size_t c = 0; c < sb[s].keys.size(); ++c) {
                PDForm f(level(i));
                f.add(sb[s].keys[c], 1);
                place(f.d(), i, q + 1, soff[s] + c, 1);
                if (i < 3) place(cech_d(f, level(i + 1)), i + 1, q, soff[s] + c, q % 2 ? -1 : 1);
            }
        }
        // entries are read mod p
        IntMat r(m.rows(), m.cols());
        for (std::size_t c = 0; c < m.cols(); ++c)
            for (auto& [row, v] : m.column(c)) {
                mpz_class x;
                mpz_fdiv_r_ui(x.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(p_));
                if (x != 0) r.set(row, c, x);
            }
        return r;
    }

    std::vector<mpz_class> total_vector(int t, long w, const std::vector<std::pair<std::pair<int, int>, PDForm>>& parts) const {
        std::vector<mpz_class> v;
        for (auto [i, q] : components(t)) {
            auto b = detail::pd_form_basis(*level(i), q, w);
            std::vector<mpz_class> piece(b.keys.size(), 0);
            for (auto& [iq, f] : parts)
                if (iq == std::make_pair(i, q)) piece = detail::pd_coords(b, f);
            v.insert(v.end(), piece.begin(), piece.end());
        }
        return v;
    }

    std::size_t h(int t, long w) const {
        IntMat d_in = t > 0 ? total_d(t - 1, w) : IntMat(total_dim(0, w), 0);
        return cohomology_of_pair_fp(d_in, total_d(t, w), p_).rank;
    }

    std::size_t total_dim(int t, long w) const {
        std::size_t n = 0;
        for (auto [i, q] : components(t)) n += detail::pd_form_basis(*level(i), q, w).keys.size();
        return n;
    }

    // cocycle and nonzero class tests for a degree-1 total vector
    std::pair<bool, bool> classify_h1(long w, const std::vector<mpz_class>& v) const {
        PrimeField f(p_);
        auto dout = Mat<PrimeField>::from_int(f, total_d(1, w));
        std::vector<std::uint64_t> x(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) x[i] = f.from_mpz(v[i]);
        bool cocycle = true;
        for (auto y : dout.apply(x))
            if (y) cocycle = false;
        auto din = Mat<PrimeField>::from_int(f, total_d(0, w));
        return {cocycle, !in_span(din, x)};
    }

    std::uint64_t p() const { return p_; }

private:
    std::uint64_t p_;
    std::vector<PDAlgebraPtr> levels_;
};

inline CechAlexanderReport cech_alexander_compare(std::uint64_t p, long w_max) {
    const long lp = static_cast<long>(p);
    if (w_max < 2 * lp) throw TruncationTooSmall("need w_max >= 2p");
    CechAlexanderComplex ca(p);
    CechAlexanderReport rep;
    rep.p = p;
    rep.w_max = w_max;
    auto base = DeRhamBase::polynomial(CoeffRing::fp(p), 1);

    // d^2 = 0, cech^2 = 0 and commutation on random basis elements of small weight
    for (long w = 0; w <= 2 * lp; ++w) {
        IntMat d0 = ca.total_d(0, w), d1 = ca.total_d(1, w);
        auto prod = d1 * d0;
        for (std::size_t c = 0; c < prod.cols(); ++c)
            for (auto& [r, v] : prod.column(c))
                if (!mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(p))) rep.dd_zero = false;
    }

    for (long w = 0; w <= w_max; ++w) {
        auto s = de_rham_strand(base, w);
        CechStrandResult r{w, ca.h(1, w), s.cohomology(1).rank, ca.h(0, w), s.cohomology(0).rank, false};
        r.pass = r.tot_h1 == r.derham_h1 && r.tot_h0 == r.derham_h0;
        rep.strands.push_back(r);
    }

    // [x^{p-1} dx] <-> [a]
    auto d1 = ca.level(1), d2 = ca.level(2);
    PDForm omega(d1);
    omega.add(PDElement::var(d1, 0).pow(static_cast<unsigned>(lp - 1)), 1u);
    PDElement a = cech_class_exact(d2), a_variant = cech_class_variant(d2);
    rep.a_exact = a.str();
    rep.a_variant = a_variant.str();
    auto v = ca.total_vector(1, lp, {{{1, 1}, omega}, {{2, 0}, PDForm::from(a)}});
    auto [coc, nz] = ca.classify_h1(lp, v);
    rep.top_class_cocycle = coc;
    rep.top_class_nonzero = nz;
    rep.variant_matches_mod_fil0 = in_conj_fil(PDForm::from(a - a_variant), 0);
    rep.variant_is_exact_partner = PDForm::from(a_variant).d() == cech_d(omega, d2);

    // [dx] <-> [x_1 - x_2]
    PDForm dx(d1);
    dx.add(PDElement::one(d1), 1u);
    auto v1 = ca.total_vector(1, 1, {{{1, 1}, dx}, {{2, 0}, PDForm::from(PDElement::gen_power(d2, 0, 1))}});
    rep.dx_class_cocycle = ca.classify_h1(1, v1).first;

    bool strands_ok = true;
    for (auto& s : rep.strands) strands_ok = strands_ok && s.pass;
    rep.pass = strands_ok && rep.dd_zero && rep.top_class_cocycle && rep.top_class_nonzero &&
               rep.variant_matches_mod_fil0 && rep.dx_class_cocycle;
    return rep;
}

}  // namespace hodgelab
