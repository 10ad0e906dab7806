#include <gtest/gtest.h>

#include <random>

#include "hodgelab/derham/cech_alexander.hpp"
#include "hodgelab/derham/forms.hpp"

using namespace hodgelab;

TEST(DeRham, PolynomialOverQ) {
    auto b = DeRhamBase::polynomial(CoeffRing::rationals(), 1);
    for (long w = 0; w <= 6; ++w) {
        EXPECT_EQ(de_rham_cohomology(b, 0, w), AbGroup(w == 0 ? 1 : 0));
        EXPECT_TRUE(de_rham_cohomology(b, 1, w).is_zero());
    }
}

TEST(DeRham, LaurentOverQ) {
    auto b = DeRhamBase::make(CoeffRing::rationals(), 1, {true});
    for (long w = -4; w <= 4; ++w) {
        EXPECT_EQ(de_rham_cohomology(b, 0, w), AbGroup(w == 0 ? 1 : 0));
        EXPECT_EQ(de_rham_cohomology(b, 1, w), AbGroup(w == 0 ? 1 : 0));
    }
    auto b2 = DeRhamBase::make(CoeffRing::rationals(), 2, {true, false});
    EXPECT_THROW(de_rham_strand(b2, 0), UnsupportedBase);
    auto s = de_rham_strand_multi(b2, {0, 0});
    EXPECT_EQ(s.cohomology(1), AbGroup(1));
    EXPECT_TRUE(de_rham_strand_multi(b2, {0, 1}).cohomology(1).is_zero());
}

TEST(DeRham, PolynomialOverFp) {
    for (std::uint64_t p : {2, 3, 5}) {
        auto b = DeRhamBase::polynomial(CoeffRing::fp(p), 1);
        for (long w = 0; w <= 3 * static_cast<long>(p); ++w) {
            bool div = w % static_cast<long>(p) == 0;
            EXPECT_EQ(de_rham_cohomology(b, 0, w).rank, div ? 1u : 0u);
            EXPECT_EQ(de_rham_cohomology(b, 1, w).rank, div && w > 0 ? 1u : 0u);
        }
    }
}

TEST(DeRham, IntegralAndModP2) {
    auto b = DeRhamBase::polynomial(CoeffRing::integers(), 1);
    for (long w = 1; w <= 8; ++w) EXPECT_EQ(de_rham_cohomology(b, 1, w), w == 1 ? AbGroup() : AbGroup(0, {w}));
    auto s = de_rham_strand(b, 6);
    EXPECT_EQ(s.cohomology(1, CoeffRing::zmod_p2(2)), AbGroup(0, {2}));
    EXPECT_EQ(s.cohomology(0, CoeffRing::zmod_p2(2)), AbGroup(0, {2}));
    EXPECT_EQ(s.cohomology(1, CoeffRing::zmod_p2(3)), AbGroup(0, {3}));
    EXPECT_EQ(de_rham_strand(b, 9).cohomology(1, CoeffRing::zmod_p2(3)), AbGroup(0, {9}));
}

TEST(DeRham, DifferentialSquaresToZeroAndLeibniz) {
    auto b = DeRhamBase::polynomial(CoeffRing::integers(), 3);
    std::mt19937_64 rng(31337);
    for (int it = 0; it < 40; ++it) {
        int ka = static_cast<int>(rng() % 3), kb = static_cast<int>(rng() % 2);
        auto a = random_form(b, rng, ka, 2 + static_cast<long>(rng() % 3));
        auto c = random_form(b, rng, kb, 1 + static_cast<long>(rng() % 3));
        EXPECT_TRUE(a.d().d().is_zero());
        EXPECT_EQ((a * c).d(), a.d() * c + (a * c.d()).scaled(ka % 2 ? -1 : 1));
    }
    auto s = de_rham_strand(b, 5);
    for (std::size_t k = 0; k + 1 < s.diff.size(); ++k) EXPECT_TRUE((s.diff[k + 1] * s.diff[k]).is_zero());
}

TEST(Cartier, Examples) {
    auto b = DeRhamBase::polynomial(CoeffRing::fp(3), 1);
    auto one = Form::monomial(b, {0}, 0), dx = Form::monomial(b, {0}, 1), xdx = Form::monomial(b, {1}, 1);
    EXPECT_EQ(cartier_inverse(one), one);
    EXPECT_EQ(cartier_inverse(dx), Form::monomial(b, {2}, 1));
    EXPECT_EQ(cartier_inverse(xdx), Form::monomial(b, {5}, 1));
    auto s = de_rham_strand(b, 3);
    EXPECT_FALSE(s.is_exact(cartier_inverse(dx), 1));
    EXPECT_TRUE(cartier_inverse(dx).d().is_zero());
    auto bz = DeRhamBase::polynomial(CoeffRing::integers(), 1);
    EXPECT_THROW(cartier_inverse(Form::monomial(bz, {0}, 1)), WrongCharacteristic);
}

TEST(Cartier, IsomorphismOnConfiguredStrands) {
    struct Cfg {
        std::uint64_t p;
        std::size_t d;
        long w;
    };
    for (auto c : {Cfg{2, 1, 8}, Cfg{2, 2, 8}, Cfg{3, 1, 12}, Cfg{3, 2, 12}, Cfg{5, 1, 20}}) {
        auto rep = verify_cartier_iso(c.p, c.d, c.w);
        EXPECT_TRUE(rep.pass) << c.p << " " << c.d;
        auto m = cartier_multiplicativity(c.p, c.d, c.w, 100, 1000 + c.p * 10 + c.d);
        EXPECT_EQ(m.pairs, 100u);
        EXPECT_EQ(m.failures, 0u);
        EXPECT_EQ(m.df_failures, 0u);
    }
}

TEST(Filtration, HodgeAndConjugate) {
    for (std::uint64_t p : {2, 3}) {
        auto b = DeRhamBase::polynomial(CoeffRing::fp(p), 1);
        PrimeField f(p);
        for (long w = 0; w <= 2 * static_cast<long>(p); ++w) {
            auto s = de_rham_strand(b, w);
            auto whole = filtration(s, f, FiltrationKind::Hodge, 0);
            EXPECT_EQ(whole.dim(0), s.dim(0));
            EXPECT_EQ(whole.dim(1), s.dim(1));
            auto none = filtration(s, f, FiltrationKind::Hodge, 2);
            EXPECT_EQ(none.dim(0) + none.dim(1), 0u);
            auto conj0 = filtration(s, f, FiltrationKind::Conjugate, 0);
            EXPECT_EQ(conj0.dim(0), w % static_cast<long>(p) == 0 ? 1u : 0u);
            EXPECT_EQ(conj0.dim(1), 0u);
            auto conj1 = filtration(s, f, FiltrationKind::Conjugate, 1);
            EXPECT_EQ(conj1.cohomology_dim(1), s.cohomology(1).rank);
        }
    }
    // conjugate steps in two variables keep the cohomology below r
    auto b2 = DeRhamBase::polynomial(CoeffRing::fp(3), 2);
    auto s = de_rham_strand(b2, 6);
    PrimeField f(3);
    auto c1 = filtration(s, f, FiltrationKind::Conjugate, 1);
    EXPECT_EQ(c1.cohomology_dim(0), s.cohomology(0).rank);
    EXPECT_EQ(c1.cohomology_dim(1), s.cohomology(1).rank);
    EXPECT_EQ(c1.cohomology_dim(2), 0u);
}

TEST(DeRham, Kunneth) {
    for (std::uint64_t p : {2, 3}) {
        auto b1 = DeRhamBase::polynomial(CoeffRing::fp(p), 1), b2 = DeRhamBase::polynomial(CoeffRing::fp(p), 2);
        for (long w = 0; w <= 9; ++w)
            for (int n = 0; n <= 2; ++n) {
                std::size_t expect = 0;
                for (long w1 = 0; w1 <= w; ++w1)
                    for (int i = 0; i <= n; ++i)
                        expect += de_rham_cohomology(b1, i, w1).rank * de_rham_cohomology(b1, n - i, w - w1).rank;
                EXPECT_EQ(de_rham_cohomology(b2, n, w).rank, expect);
            }
    }
}

TEST(CechAlexander, ClassesAndDimensions) {
    for (std::uint64_t p : {2, 3, 5}) {
        auto rep = cech_alexander_compare(p, 2 * static_cast<long>(p));
        EXPECT_TRUE(rep.dd_zero);
        EXPECT_TRUE(rep.top_class_cocycle) << p;
        EXPECT_TRUE(rep.top_class_nonzero) << p;
        EXPECT_TRUE(rep.variant_matches_mod_fil0) << p;
        EXPECT_TRUE(rep.dx_class_cocycle);
        for (auto& s : rep.strands) EXPECT_TRUE(s.pass) << "p=" << p << " w=" << s.weight;
        EXPECT_TRUE(rep.pass);
    }
    EXPECT_THROW(cech_alexander_compare(3, 5), TruncationTooSmall);
}

TEST(CechAlexander, ExplicitIdentityForP3) {
    auto d1 = cech_level(3, 1), d2 = cech_level(3, 2), d3 = cech_level(3, 3);
    auto a = cech_class_exact(d2);
    PDForm omega(d1);
    omega.add(PDElement::var(d1, 0).pow(2), 1u);
    PDForm target(d2);
    target.add(PDElement::var(d2, 0).pow(2), 1u);
    target.add(PDElement::var(d2, 1).pow(2), 2u, -1);
    EXPECT_EQ(cech_d(omega, d2), target);
    EXPECT_EQ(PDForm::from(a).d(), target);
    EXPECT_TRUE(cech_d(PDForm::from(a), d3).is_zero());
    EXPECT_TRUE(cech_d(cech_d(PDForm::from(PDElement::var(d1, 0).pow(4)), d2), d3).is_zero());
}
