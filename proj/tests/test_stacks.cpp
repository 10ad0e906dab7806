#include <gtest/gtest.h>

#include <random>

#include "hodgelab/stacks/stacks.hpp"

using namespace hodgelab;

TEST(Stacks, HodgeNumbersOfClassifyingStacks) {
    auto bgm = GmQuotient::bgm(), bga = GmQuotient::bga();
    for (int p = 0; p <= 3; ++p)
        for (int q = 0; q <= 4; ++q) {
            EXPECT_EQ(hodge_cohomology(bgm, p, q), p == q ? 1u : 0u) << p << "," << q;
            EXPECT_EQ(hodge_cohomology(bga, p, q), q - p == 0 || q - p == 1 ? 1u : 0u) << p << "," << q;
            // the Koszul model of a point agrees with group cohomology of G_m
            EXPECT_EQ(koszul_complex(bgm, p).cohomology_dim(q), hodge_cohomology(bgm, p, q));
        }
    auto g = gm_cobar_dims(4, 2);
    EXPECT_EQ(g, (std::vector<std::size_t>{1, 0, 0, 0, 0}));
}

TEST(Stacks, HodgeNumbersOfAffineLine) {
    auto a1 = GmQuotient::parse("A1");
    EXPECT_EQ(hodge_cohomology(a1, 1, 1), 1u);
    EXPECT_EQ(hodge_cohomology(a1, 1, 0), 0u);
    EXPECT_EQ(hodge_cohomology(a1, 0, 0), 1u);
    EXPECT_EQ(hodge_cohomology(a1, 2, 2), 1u);
    auto p1 = GmQuotient::p1(0, 1);
    EXPECT_EQ(hodge_cohomology(p1, 0, 0), 1u);
    EXPECT_EQ(hodge_cohomology(p1, 1, 1), 2u);
    EXPECT_EQ(hodge_cohomology(p1, 1, 0), 0u);
}

TEST(Stacks, DeRhamDimensions) {
    EXPECT_EQ(derham_dims(GmQuotient::bga(), 4), (std::vector<std::size_t>{1, 0, 0, 0, 0}));
    EXPECT_EQ(derham_dims(GmQuotient::bgm(), 4), (std::vector<std::size_t>{1, 0, 1, 0, 1}));
    EXPECT_EQ(derham_dims(GmQuotient::parse("A1"), 4), derham_dims(GmQuotient::bgm(), 4));
    EXPECT_EQ(derham_dims(GmQuotient::parse("Gm:3"), 3), (std::vector<std::size_t>{1, 0, 0, 0}));
    EXPECT_EQ(derham_dims(GmQuotient::p1(2, -1), 4), (std::vector<std::size_t>{1, 0, 2, 0, 2}));
    EXPECT_EQ(derham_cohomology(GmQuotient::bgm(), 2), 1u);
}

TEST(Stacks, CartanModelAgrees) {
    for (auto s : {"BGm", "A1", "A:1,3", "A:-2", "Gm:-1", "P1:0,1", "P1:3,1"}) {
        auto X = GmQuotient::parse(s);
        EXPECT_EQ(cartan_dims(X, 4), derham_dims(X, 4)) << s;
    }
    EXPECT_THROW(cartan_complex(GmQuotient::bga(), 3), UnsupportedStack);
}

TEST(Stacks, DegenerationVerdicts) {
    auto bgm = hdr_report(GmQuotient::bgm(), 4);
    EXPECT_TRUE(bgm.degenerate());
    EXPECT_EQ(bgm.derham, (std::vector<std::size_t>{1, 0, 1, 0, 1}));
    EXPECT_EQ(bgm.e1_totals, bgm.derham);

    auto a1 = hdr_report(GmQuotient::parse("A1"), 4);
    EXPECT_TRUE(a1.degenerate());
    EXPECT_EQ(a1.derham, bgm.derham);
    EXPECT_TRUE(a1.e1_model_matches);
    EXPECT_TRUE(a1.cross_model_agree);

    auto bga = hdr_report(GmQuotient::bga(), 3);
    EXPECT_FALSE(bga.degenerate());
    EXPECT_TRUE(bga.agree());
    ASSERT_TRUE(bga.first_nonzero.has_value());
    EXPECT_EQ(bga.first_nonzero->r, 1);
    EXPECT_EQ(bga.first_nonzero->p, 0);
    EXPECT_EQ(bga.first_nonzero->q, 1);
    EXPECT_EQ(bga.derham[1], 0u);
    // only E_1^{0,1} contributes in total degree 1
    EXPECT_EQ(bga.e1_totals[1], 1u);
    EXPECT_TRUE(bga.e1_model_matches);

    auto p1 = hdr_report(GmQuotient::p1(0, 1), 4);
    EXPECT_TRUE(p1.degenerate());
    EXPECT_TRUE(p1.koszul_consistent);
}

TEST(Stacks, CartanHomotopyIdentity) {
    for (auto s : {"A1", "A:1,2", "A:-1,-3", "Gm:2", "P1:0,1", "BGa"}) {
        auto rep = cartan_identity(GmQuotient::parse(s), 2, 3);
        EXPECT_GT(rep.strands, 0u) << s;
        EXPECT_EQ(rep.failures, 0u) << s;
    }
}

TEST(Stacks, KoszulConsistency) {
    for (auto s : {"A1", "A:1,2", "A:2,3,5", "Gm:1", "P1:0,2"}) EXPECT_TRUE(koszul_consistent(GmQuotient::parse(s), 4)) << s;
}

TEST(Stacks, NerveDifferentialSquaresToZero) {
    for (auto s : {"BGm", "A:1,2", "Gm:2", "P1:0,1"}) EXPECT_TRUE(nerve_complex(GmQuotient::parse(s), 5).d_squared_zero()) << s;
    for (long w = 0; w <= 3; ++w) EXPECT_TRUE(nerve_complex(GmQuotient::bga(), 5, w).d_squared_zero());
    EXPECT_THROW(nerve_complex(GmQuotient::bgm(), 4, 1), UnsupportedStack);
}

TEST(Stacks, UnsupportedAndMalformed) {
    EXPECT_THROW(derham_dims(GmQuotient::affine({1, -1}), 2), UnsupportedStack);
    EXPECT_THROW(derham_dims(GmQuotient::affine({0}), 2), UnsupportedStack);
    EXPECT_THROW(derham_dims(GmQuotient::affine({1, 1}, {true, false}), 2), UnsupportedStack);
    EXPECT_THROW(derham_dims(GmQuotient::p1(2, 2), 2), UnsupportedStack);
    EXPECT_THROW(hodge_cohomology(GmQuotient::bgm(), 0, 0, CoeffRing::integers()), UnsupportedStack);
    EXPECT_THROW(GmQuotient::parse("BG"), ConfigError);
    EXPECT_THROW(GmQuotient::parse("A:1,x"), ConfigError);
    EXPECT_THROW(GmQuotient::parse("P1:1"), ConfigError);
}

// Positively graded affine spaces contract onto the fixed point: same answer as BG_m.
TEST(Stacks, RandomConicalQuotients) {
    std::mt19937_64 rng(1618);
    for (int it = 0; it < 6; ++it) {
        std::size_t m = 1 + rng() % 3;
        long sign = rng() % 2 ? 1 : -1;
        std::vector<long> w;
        for (std::size_t i = 0; i < m; ++i) w.push_back(sign * static_cast<long>(1 + rng() % 3));
        auto rep = hdr_report(GmQuotient::affine(w), 4);
        EXPECT_TRUE(rep.degenerate()) << rep.stack;
        EXPECT_EQ(rep.derham, (std::vector<std::size_t>{1, 0, 1, 0, 1})) << rep.stack;
        EXPECT_TRUE(rep.cross_model_agree);
        EXPECT_TRUE(rep.e1_model_matches);
        EXPECT_TRUE(rep.koszul_consistent);
    }
}
