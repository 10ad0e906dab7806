#include <gtest/gtest.h>

#include <random>

#include "hodgelab/gralg/coeff_ring.hpp"
#include "hodgelab/gralg/multipoly.hpp"
#include "hodgelab/gralg/pd.hpp"
#include "hodgelab/gralg/witt2.hpp"

using namespace hodgelab;

namespace {

MultiPoly random_poly(const PolyContextPtr& ctx, std::mt19937_64& rng, int terms, int max_deg) {
    std::uniform_int_distribution<int> coef(-5, 5), deg(0, max_deg);
    MultiPoly f(ctx);
    for (int t = 0; t < terms; ++t) {
        MultiPoly::Exponent e(ctx->nvars());
        for (auto& x : e) x = deg(rng) * ctx->denominator();
        f.add_term(e, coef(rng));
    }
    return f;
}

}  // namespace

TEST(MultiPoly, RingAxiomsOnRandomPolynomials) {
    auto ctx = PolyContext::make(CoeffRing::integers(), {"x", "y", "z"});
    std::mt19937_64 rng(7001);
    for (int it = 0; it < 30; ++it) {
        auto a = random_poly(ctx, rng, 4, 3), b = random_poly(ctx, rng, 4, 3), c = random_poly(ctx, rng, 3, 2);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_TRUE((a - a).is_zero());
    }
}

TEST(MultiPoly, SubstitutionIsARingMap) {
    auto src = PolyContext::make(CoeffRing::integers(), {"x"});
    auto tgt = PolyContext::make(CoeffRing::integers(), {"y", "z"});
    auto x = MultiPoly::var(src, 0);
    auto y = MultiPoly::var(tgt, 0), z = MultiPoly::var(tgt, 1);
    auto img = x.pow(2).substitute({y + z});
    EXPECT_EQ(img, y.pow(2) + (y * z).scaled(2) + z.pow(2));

    // grading twist x -> t^2 x
    auto tctx = PolyContext::make(CoeffRing::integers(), {"t", "x"});
    auto t = MultiPoly::var(tctx, 0), xx = MultiPoly::var(tctx, 1);
    auto f = x.pow(3) + x.scaled(4);
    EXPECT_EQ(f.substitute({t.pow(2) * xx}), t.pow(6) * xx.pow(3) + (t.pow(2) * xx).scaled(4));
}

TEST(MultiPoly, FrobeniusInCharacteristicP) {
    for (std::uint64_t p : {2, 3, 5}) {
        auto ctx = PolyContext::make(CoeffRing::fp(p), {"x", "y"});
        auto x = MultiPoly::var(ctx, 0), y = MultiPoly::var(ctx, 1);
        EXPECT_EQ((x + y).pow(static_cast<unsigned>(p)), x.pow(static_cast<unsigned>(p)) + y.pow(static_cast<unsigned>(p)));
        EXPECT_EQ((x + y).relative_frobenius(), (x + y).pow(static_cast<unsigned>(p)));
        EXPECT_EQ((x * y).frobenius_twist(), x * y);
    }
    auto zctx = PolyContext::make(CoeffRing::integers(), {"x"});
    EXPECT_THROW(MultiPoly::var(zctx, 0).relative_frobenius(), WrongCharacteristic);
}

TEST(MultiPoly, PerfectionRoots) {
    auto base = std::make_shared<PolyContext>(*PolyContext::make(CoeffRing::fp(3), {"x"}));
    base->exp_prime = 3;
    base->depth = 2;
    PolyContextPtr ctx = base;
    auto root = MultiPoly::monomial(ctx, {3});  // x^{1/3}
    EXPECT_EQ(root.relative_frobenius(), MultiPoly::var(ctx, 0));
    EXPECT_EQ(root.pow(3), MultiPoly::var(ctx, 0));
    EXPECT_EQ(root.str(), "x^(1/3)");
}

TEST(MultiPoly, BoundsAndErrors) {
    auto c = std::make_shared<PolyContext>(*PolyContext::make(CoeffRing::integers(), {"x", "u"}, {1, 0}));
    c->max_weight = 4;
    c->laurent[1] = true;
    PolyContextPtr ctx = c;
    auto x = MultiPoly::var(ctx, 0);
    EXPECT_THROW(x.pow(5), WeightOverflow);
    EXPECT_NO_THROW(MultiPoly::monomial(ctx, {1, -3}));
    EXPECT_THROW(MultiPoly::monomial(ctx, {-1, 0}), RingMismatch);
    auto q = PolyContext::make(CoeffRing::integers(), {"x"});
    EXPECT_THROW(MultiPoly::constant(q, mpq_class(1, 2)), RingMismatch);
    auto other = PolyContext::make(CoeffRing::fp(2), {"x"});
    EXPECT_THROW(MultiPoly::var(q, 0) + MultiPoly::var(other, 0), RingMismatch);
}

namespace {

PDAlgebraPtr monomial_pd(mpz_class modulus, std::uint64_t p = 2) {
    PDAlgebra::Spec s;
    s.p = p;
    s.names = {"x"};
    s.gens = {PDGenerator{-1, 0}};
    s.modulus = modulus;
    return PDAlgebra::make(s);
}

}  // namespace

TEST(PDAlgebra, ProductsOfDividedPowers) {
    auto a = monomial_pd(0);
    auto s = PDElement::gen_power(a, 0, 1);
    EXPECT_EQ(s * s, PDElement::gen_power(a, 0, 2).scaled(2));
    EXPECT_EQ(PDElement::gen_power(a, 0, 2) * PDElement::gen_power(a, 0, 3), PDElement::gen_power(a, 0, 5).scaled(10));
    EXPECT_EQ(PDElement::var(a, 0), s);
    for (std::uint64_t p : {2, 3, 5, 7}) {
        auto ap = monomial_pd(mpz_class(static_cast<unsigned long>(p)), p);
        auto sp = PDElement::gen_power(ap, 0, 1);
        EXPECT_TRUE((sp * PDElement::gen_power(ap, 0, static_cast<long>(p) - 1)).is_zero());
        EXPECT_FALSE(PDElement::gen_power(ap, 0, static_cast<long>(p)).is_zero());
    }
}

TEST(PDAlgebra, DividedPowerAxiomsOverZ) {
    PDAlgebra::Spec spec;
    spec.names = {"x", "y", "z"};
    spec.gens = {PDGenerator{-1, 0}, PDGenerator{1, 2}};  // x and y - z
    auto a = PDAlgebra::make(spec);
    auto s = PDElement::gen_power(a, 0, 1), t = PDElement::gen_power(a, 1, 1);
    for (long m = 1; m <= 3; ++m)
        for (long n = 1; n <= 3; ++n) {
            mpz_class c = factorial(m * n) / (factorial(m) * [&] {
                mpz_class f = factorial(n), r;
                mpz_pow_ui(r.get_mpz_t(), f.get_mpz_t(), static_cast<unsigned long>(m));
                return r;
            }());
            EXPECT_EQ(s.divided_power(n).divided_power(m), s.divided_power(m * n).scaled(c));
        }
    auto u = s + t.scaled(3) + (PDElement::var(a, 1) * t);
    for (long n = 0; n <= 4; ++n) {
        PDElement rhs(a);
        auto v = t.scaled(3) + (PDElement::var(a, 1) * t);
        for (long i = 0; i <= n; ++i) rhs += s.divided_power(i) * v.divided_power(n - i);
        EXPECT_EQ(u.divided_power(n), rhs);
        // gamma_n(lambda s) = lambda^n gamma_n(s)
        mpz_class l = 5, ln;
        mpz_pow_ui(ln.get_mpz_t(), l.get_mpz_t(), static_cast<unsigned long>(n));
        EXPECT_EQ(s.scaled(l).divided_power(n), s.divided_power(n).scaled(ln));
        // n! gamma_n(u) = u^n
        EXPECT_EQ(u.divided_power(n).scaled(factorial(n)), u.pow(static_cast<unsigned>(n)));
    }
    EXPECT_THROW(PDElement::var(a, 1).divided_power(2), RingMismatch);
}

TEST(PDAlgebra, DifferenceRelatorNormalForm) {
    PDAlgebra::Spec spec;
    spec.names = {"x1", "x2"};
    spec.gens = {PDGenerator{0, 1}};
    auto a = PDAlgebra::make(spec);
    auto x1 = PDElement::var(a, 0), s = PDElement::gen_power(a, 0, 1);
    auto x2sq = PDElement::var(a, 1).pow(2);
    EXPECT_EQ(x2sq, x1.pow(2) - (x1 * s).scaled(2) + PDElement::gen_power(a, 0, 2).scaled(2));
    auto basis = pd_strand_basis(*a, 2);
    EXPECT_EQ(basis.size(), 3u);  // x1^2, x1 s, s^[2]
}

TEST(PDAlgebra, RejectsBadGenerators) {
    PDAlgebra::Spec spec;
    spec.names = {"x", "y"};
    spec.gens = {PDGenerator{-1, 0}, PDGenerator{-1, 0}};
    EXPECT_THROW(PDAlgebra::make(spec), UnsupportedBase);
    spec.gens = {PDGenerator{1, 0}};
    EXPECT_THROW(PDAlgebra::make(spec), UnsupportedBase);
}

TEST(Witt2, SmallSums) {
    Witt2<mpz_class> a{1, 0, 2}, b{-1, 0, 2};
    auto c = a + b;
    EXPECT_EQ(c.a0, 0);
    EXPECT_EQ(c.a1, 1);

    auto ctx = PolyContext::make(CoeffRing::fp(2), {"x", "y"});
    auto x = MultiPoly::var(ctx, 0), y = MultiPoly::var(ctx, 1), zero = MultiPoly(ctx);
    auto s = Witt2<MultiPoly>{x, zero, 2} + Witt2<MultiPoly>{y, zero, 2};
    EXPECT_EQ(s.a0, x + y);
    EXPECT_EQ(s.a1, x * y);
}

TEST(Witt2, GhostIsAHomomorphism) {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<long> d(-50, 50);
    for (std::uint64_t p : {2, 3, 5}) {
        for (int it = 0; it < 50; ++it) {
            Witt2<mpz_class> a{d(rng), d(rng), p}, b{d(rng), d(rng), p};
            auto ga = a.ghost(), gb = b.ghost(), gs = (a + b).ghost(), gm = (a * b).ghost();
            EXPECT_EQ(gs.first, ga.first + gb.first);
            EXPECT_EQ(gs.second, ga.second + gb.second);
            EXPECT_EQ(gm.first, ga.first * gb.first);
            EXPECT_EQ(gm.second, ga.second * gb.second);
        }
    }
}

TEST(Witt2, TeichmullerEmbeddingIsARingMap) {
    std::mt19937_64 rng(515);
    for (std::uint64_t p : {2, 3}) {
        auto src = PolyContext::make(CoeffRing::fp(p), {"x"});
        auto t = std::make_shared<PolyContext>(*PolyContext::make(CoeffRing::zmod_p2(p), {"x"}));
        t->exp_prime = p;
        t->depth = 1;
        PolyContextPtr tgt = t;
        for (int it = 0; it < 15; ++it) {
            Witt2<MultiPoly> a{random_poly(src, rng, 2, 2), random_poly(src, rng, 2, 2), p};
            Witt2<MultiPoly> b{random_poly(src, rng, 2, 2), random_poly(src, rng, 2, 2), p};
            EXPECT_EQ(teichmuller_embed(a + b, tgt), teichmuller_embed(a, tgt) + teichmuller_embed(b, tgt));
            EXPECT_EQ(teichmuller_embed(a * b, tgt), teichmuller_embed(a, tgt) * teichmuller_embed(b, tgt));
        }
    }
}
