#include <gtest/gtest.h>

#include <random>

#include "hodgelab/crystal/crystal.hpp"

using namespace hodgelab;

namespace {
PDElement random_elem(const CrysAlgebra& a, const PDAlgebraPtr& alg, std::mt19937_64& rng, long wn) {
    PDElement out(alg);
    auto keys = pd_strand_basis(*alg, wn);
    const unsigned long m = mpz_class(alg->modulus()).get_ui();
    for (auto& k : keys) out += PDElement::basis(alg, k, static_cast<unsigned long>(rng() % m));
    (void)a;
    return out;
}
bool contained(const FpMat& a, const FpMat& b) { return rank(b.hcat(a)) == rank(b); }
}  // namespace

TEST(Acrys, BasisAndTheta) {
    CrysAlgebra a(SemiperfectModel::monomial(2, 1));
    std::vector<std::string> seen;
    for (long wn = 0; wn <= 2 * a.den(); ++wn)
        for (auto& k : a.basis(wn)) seen.push_back(PDElement::basis(a.mod_p(), k).str());
    EXPECT_NE(std::find(seen.begin(), seen.end(), "1*x^(1/2)"), seen.end());
    EXPECT_NE(std::find(seen.begin(), seen.end(), "1*x^[1]"), seen.end());
    EXPECT_NE(std::find(seen.begin(), seen.end(), "1*x^[2]"), seen.end());
    auto x2 = PDElement::gen_power(a.mod_p(), 0, 2);
    EXPECT_TRUE(a.theta(x2).is_zero());
    auto half = PDElement::var_power(a.mod_p(), 0, 1);
    EXPECT_EQ(a.theta(half), half);
    for (long wn = 0; wn <= 4 * a.den(); ++wn) EXPECT_NO_THROW(a.check_theta2_surjective(wn));
    // x^2 = 2 x^{[2]} = 0 mod 2
    EXPECT_TRUE(PDElement::var(a.mod_p(), 0).pow(2).is_zero());
    EXPECT_FALSE(PDElement::var(a.mod_p2(), 0).pow(2).is_zero());
}

TEST(Acrys, WeightBound) {
    auto s = SemiperfectModel::monomial(3, 2);
    s.max_weight = 4;
    CrysAlgebra a(s);
    EXPECT_NO_THROW(a.basis(4 * a.den()));
    EXPECT_THROW(a.basis(4 * a.den() + 1), TruncationOverflow);
    EXPECT_THROW(CrysAlgebra(SemiperfectModel::monomial(3, 0)), TruncationTooSmall);
}

TEST(Acrys, Filtrations) {
    for (auto s : {SemiperfectModel::monomial(2, 2), SemiperfectModel::monomial(3, 2), SemiperfectModel::diagonal(2, 2)}) {
        CrysAlgebra a(s);
        const long lp = static_cast<long>(a.p());
        for (long wn = 0; wn <= 3 * lp * a.den(); wn += 1) {
            const auto n = a.basis(wn).size();
            EXPECT_EQ(a.hodge_fil(0, wn).cols, n);
            for (long r = 0; r < 4; ++r) {
                EXPECT_TRUE(contained(a.hodge_fil(r + 1, wn), a.hodge_fil(r, wn)));
                auto c = a.conj_fil(r, wn), c1 = a.conj_fil(r + 1, wn);
                EXPECT_TRUE(contained(c, c1));
                auto cl = a.conj_fil_closed(r, wn);
                EXPECT_EQ(c.cols, cl.cols);
                EXPECT_TRUE(contained(cl, c));
            }
            // Fil_0 is the image of the tilt: brackets < p after normal form
            std::size_t tilt = 0;
            for (auto& k : a.basis(wn)) {
                long t = 0;
                for (auto b : k.br) t += b / lp;
                if (t == 0) ++tilt;
            }
            EXPECT_EQ(a.conj_fil(0, wn).cols, tilt);
            // exhaustive within the strand
            EXPECT_EQ(a.conj_fil(wn / a.den() + 1, wn).cols, n);
        }
    }
}

TEST(Acrys, FiltrationsAreMultiplicative) {
    CrysAlgebra a(SemiperfectModel::diagonal(3, 1));
    std::mt19937_64 rng(2718);
    auto member = [&](const PDElement& f, long r, bool conj) {
        auto w = f.homogeneous_weight();
        if (!w) return f.is_zero();
        auto keys = a.basis(*w);
        auto m = conj ? a.conj_fil(r, *w) : a.hodge_fil(r, *w);
        return in_span(m, a.coords(keys, f));
    };
    for (int it = 0; it < 30; ++it) {
        long w1 = 3 + static_cast<long>(rng() % 6), w2 = 3 + static_cast<long>(rng() % 6);
        long r1 = static_cast<long>(rng() % 3), r2 = static_cast<long>(rng() % 3);
        // random elements of Fil_r built from filtration columns
        auto pick = [&](long w, long r, bool conj) {
            auto keys = a.basis(w);
            auto m = conj ? a.conj_fil(r, w) : a.hodge_fil(r, w);
            PDElement e(a.mod_p());
            for (std::size_t j = 0; j < m.cols; ++j) {
                auto c = rng() % 3;
                for (std::size_t i = 0; i < keys.size(); ++i)
                    if (m(i, j)) e += PDElement::basis(a.mod_p(), keys[i], static_cast<unsigned long>(c * m(i, j)));
            }
            return e;
        };
        for (bool conj : {false, true}) {
            auto f = pick(w1, r1, conj), g = pick(w2, r2, conj);
            EXPECT_TRUE(member(f * g, r1 + r2, conj)) << "conj=" << conj;
        }
    }
}

TEST(Acrys, FrobeniusIsARingMap) {
    for (auto s : {SemiperfectModel::monomial(2, 2), SemiperfectModel::monomial(3, 2), SemiperfectModel::diagonal(2, 2)}) {
        CrysAlgebra a(s);
        std::mt19937_64 rng(90210 + a.p());
        for (int it = 0; it < 20; ++it) {
            long w1 = static_cast<long>(rng() % (2 * a.den())), w2 = static_cast<long>(rng() % (2 * a.den()));
            auto f = random_elem(a, a.mod_p2(), rng, w1), g = random_elem(a, a.mod_p2(), rng, w2);
            EXPECT_EQ(a.frobenius(f * g), a.frobenius(f) * a.frobenius(g));
            EXPECT_EQ(a.frobenius(f + g), a.frobenius(f) + a.frobenius(g));
        }
        EXPECT_EQ(a.frobenius(PDElement::one(a.mod_p2())), PDElement::one(a.mod_p2()));
    }
}

TEST(Acrys, NygaardAgainstHodge) {
    for (auto s : {SemiperfectModel::monomial(2, 2), SemiperfectModel::monomial(3, 2), SemiperfectModel::diagonal(2, 2),
                   SemiperfectModel::diagonal(3, 1)}) {
        CrysAlgebra a(s);
        for (long wn = 0; wn <= 3 * static_cast<long>(a.p()) * a.den(); ++wn) {
            auto n1 = a.nygaard_mod_p(1, wn), n2 = a.nygaard_mod_p(2, wn);
            auto i1 = a.hodge_fil(1, wn), i2 = a.hodge_fil(2, wn);
            EXPECT_EQ(n1.cols, i1.cols);
            EXPECT_TRUE(contained(n1, i1));
            EXPECT_TRUE(contained(n2, i2)) << s.str() << " wn=" << wn;
            EXPECT_TRUE(contained(i2, n2));
        }
    }
    EXPECT_THROW(CrysAlgebra(SemiperfectModel::monomial(2, 1)).nygaard_mod_p(3, 2), TruncationTooSmall);
}

TEST(Acrys, NygaardIsMultiplicative) {
    // N^{>=1} mod p^2 is I plus p A; products of two such have phi divisible by p^2
    CrysAlgebra a(SemiperfectModel::diagonal(2, 2));
    std::mt19937_64 rng(4711);
    auto in_n1 = [&](long wn) {
        PDElement e(a.mod_p2());
        for (auto& k : pd_strand_basis(*a.mod_p2(), wn)) {
            unsigned long c = CrysAlgebra::total_br(k) ? rng() % 4 : 2 * (rng() % 2);
            e += PDElement::basis(a.mod_p2(), k, c);
        }
        return e;
    };
    for (int it = 0; it < 25; ++it) {
        auto f = in_n1(static_cast<long>(rng() % 24)), g = in_n1(static_cast<long>(rng() % 24));
        EXPECT_TRUE(a.divided_frobenius(f).has_value());
        EXPECT_TRUE(a.frobenius(f * g).is_zero());
    }
    EXPECT_FALSE(a.divided_frobenius(PDElement::one(a.mod_p2())).has_value());
}

TEST(Acrys, PTorsionFree) {
    for (auto s : {SemiperfectModel::monomial(3, 2), SemiperfectModel::diagonal(2, 2)}) {
        CrysAlgebra a(s);
        for (long wn = 0; wn <= 12; ++wn) {
            auto keys = a.basis(wn);
            auto keys2 = pd_strand_basis(*a.mod_p2(), wn);
            ASSERT_EQ(keys, keys2);
            // p * (lift of each basis vector) stays independent in A/p^2
            std::size_t nonzero = 0;
            for (auto& k : keys) {
                auto e = PDElement::basis(a.mod_p2(), k, static_cast<unsigned long>(a.p()));
                if (!e.is_zero()) ++nonzero;
                EXPECT_EQ(e.terms().size(), 1u);
            }
            EXPECT_EQ(nonzero, keys.size());
        }
    }
}

TEST(Kappa, SmallValues) {
    CrysAlgebra a3(SemiperfectModel::monomial(3, 1));
    PDKey s{{0}, {1}};
    EXPECT_EQ(a3.kappa(s), PDElement::gen_power(a3.mod_p(), 0, 3).scaled(2));
    CrysAlgebra a2(SemiperfectModel::monomial(2, 1));
    EXPECT_EQ(a2.kappa(s), PDElement::gen_power(a2.mod_p(), 0, 2));
    // kappa_0 is Frobenius on the tilt modulo I
    PDKey half{{1}, {0}};
    EXPECT_EQ(a2.kappa(half), PDElement::var(a2.mod_p(), 0));
    EXPECT_EQ(a2.kappa(half), a2.frobenius(PDElement::basis(a2.mod_p(), half)));
}

TEST(Kappa, IsomorphismOnStrands) {
    auto r3 = verify_kappa_iso(CrysAlgebra(SemiperfectModel::monomial(3, 3)), 2, 18);
    EXPECT_TRUE(r3.pass);
    EXPECT_GT(r3.checked, 0u);
    auto r2 = verify_kappa_iso(CrysAlgebra(SemiperfectModel::monomial(2, 3)), 1, 16);
    EXPECT_TRUE(r2.pass);
    auto rd = verify_kappa_iso(CrysAlgebra(SemiperfectModel::diagonal(2, 3)), 1, 8);
    EXPECT_TRUE(rd.pass);
    std::size_t nontrivial = 0;
    for (auto& s : rd.strands)
        if (s.r == 1 && s.source_dim > 1) ++nontrivial;
    EXPECT_GT(nontrivial, 0u);
}

TEST(Splitting, TautologicalLift) {
    for (auto s : {SemiperfectModel::monomial(2, 3), SemiperfectModel::monomial(3, 3), SemiperfectModel::diagonal(2, 2),
                   SemiperfectModel::diagonal(3, 1)}) {
        auto rep = di_splitting(CrysAlgebra(s), 4 * static_cast<long>(s.p));
        EXPECT_TRUE(rep.injective) << s.str();
        EXPECT_TRUE(rep.misses_fil0) << s.str();
        EXPECT_TRUE(rep.lands_in_fil) << s.str();
        EXPECT_TRUE(rep.matches_kappa) << s.str();
        EXPECT_TRUE(rep.generator_formula) << s.str();
        EXPECT_TRUE(rep.phi1_of_p) << s.str();
        EXPECT_TRUE(rep.pass);
    }
    CrysAlgebra a(SemiperfectModel::monomial(3, 1));
    EXPECT_EQ(a.splitting(PDKey{{0}, {1}}), PDElement::gen_power(a.mod_p(), 0, 3).scaled(2));
}

TEST(Unfold, MatchesDeRham) {
    for (std::uint64_t p : {2, 3}) {
        auto rep = unfold_derham(p, static_cast<long>(p * p));
        EXPECT_TRUE(rep.pass);
        auto& w0 = rep.strands.front();
        EXPECT_EQ(w0.h0, 1u);
        EXPECT_EQ(w0.h1, 0u);
        for (auto& s : rep.strands) EXPECT_TRUE(s.pass) << "p=" << p << " wn=" << s.weight;
    }
    EXPECT_THROW(unfold_derham(2, 4, 1), TruncationTooSmall);
}
