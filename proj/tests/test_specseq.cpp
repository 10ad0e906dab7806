#include <gtest/gtest.h>

#include <random>

#include "hodgelab/derham/forms.hpp"
#include "hodgelab/specseq/specseq.hpp"

using namespace hodgelab;

namespace {
template <class F>
Mat<F> scalar(F f, long v) {
    Mat<F> m(f, 1, 1);
    m(0, 0) = f.from_mpz(v);
    return m;
}

}  // namespace

TEST(SpecSeq, ZeroDifferentialIsGraded) {
    RationalField q;
    Mat<RationalField> d0(q, 2, 2);
    auto fc = FilteredComplex<RationalField>::basis_aligned(q, {d0}, {{0, 1}, {1, 1}}, 1);
    auto e1 = page(fc, 1), einf = e_infinity(fc);
    EXPECT_EQ(e1.table, einf.table);
    EXPECT_EQ(e1.table[std::make_pair(0, 0)], 1u);
    EXPECT_EQ(e1.table[std::make_pair(1, -1)], 1u);
    EXPECT_EQ(e1.table[std::make_pair(1, 0)], 2u);
    auto v = degenerates_at(fc, 1);
    EXPECT_TRUE(v.by_differentials);
    EXPECT_TRUE(*v.by_dimension);
}

TEST(SpecSeq, HodgeFiltrationOfLaurentDeRham) {
    auto b = DeRhamBase::make(CoeffRing::rationals(), 1, {true});
    auto s = de_rham_strand(b, 0);
    RationalField q;
    auto d0 = Mat<RationalField>::from_int(q, s.diff[0]);
    std::vector<std::vector<int>> lv{std::vector<int>(s.dim(0), 0), std::vector<int>(s.dim(1), 1)};
    auto fc = FilteredComplex<RationalField>::basis_aligned(q, {d0}, lv, 1);
    auto e1 = page(fc, 1);
    EXPECT_EQ(e1.table[std::make_pair(0, 0)], 1u);
    EXPECT_EQ(e1.table[std::make_pair(1, 0)], 1u);
    for (auto& [k, m] : e1.differentials) EXPECT_TRUE(m.is_zero());
}

TEST(SpecSeq, ConjugateFiltrationMatchesCartier) {
    for (std::uint64_t p : {2, 3}) {
        auto b = DeRhamBase::polynomial(CoeffRing::fp(p), 1);
        PrimeField f(p);
        for (long w = 0; w <= 3 * static_cast<long>(p); ++w) {
            auto s = de_rham_strand(b, w);
            auto g0 = filtration(s, f, FiltrationKind::Conjugate, 0);
            auto g1 = filtration(s, f, FiltrationKind::Conjugate, 1);
            std::vector<std::vector<Mat<PrimeField>>> g(2);
            for (int n = 0; n <= 1; ++n) g[n] = {g0.inclusion[n], g1.inclusion[n]};
            auto fc = FilteredComplex<PrimeField>::from_increasing(f, {Mat<PrimeField>::from_int(f, s.diff[0])}, g, 1);
            auto e1 = page(fc, 1);
            // G_0 carries H^0, gr_1 carries H^1; Cartier: both are Omega of weight w/p
            const bool div = w % static_cast<long>(p) == 0;
            EXPECT_EQ(e1.table[std::make_pair(1, -1)], div ? 1u : 0u);
            EXPECT_EQ(e1.table[std::make_pair(0, 1)], div && w > 0 ? 1u : 0u);
            EXPECT_EQ(e1.total(0) + e1.total(1), s.cohomology(0).rank + s.cohomology(1).rank);
            EXPECT_TRUE(degenerates_at(fc, 1).by_differentials);
        }
    }
}

TEST(SpecSeq, LocatesNonzeroD1) {
    RationalField q;
    auto fc = FilteredComplex<RationalField>::basis_aligned(q, {scalar(q, 1)}, {{0}, {1}}, 1);
    auto v = degenerates_at(fc, 1);
    EXPECT_FALSE(v.by_differentials);
    EXPECT_FALSE(*v.by_dimension);
    EXPECT_TRUE(v.agree);
    ASSERT_TRUE(v.first_nonzero.has_value());
    EXPECT_EQ(v.first_nonzero->r, 1);
    EXPECT_EQ(v.first_nonzero->p, 0);
    EXPECT_EQ(v.first_nonzero->q, 0);
    // the same map one filtration step further is d_2
    auto fc2 = FilteredComplex<RationalField>::basis_aligned(q, {scalar(q, 1)}, {{0}, {2}}, 2);
    auto v2 = degenerates_at(fc2, 1);
    ASSERT_TRUE(v2.first_nonzero.has_value());
    EXPECT_EQ(v2.first_nonzero->r, 2);
    EXPECT_TRUE(degenerates_at(fc2, 3).by_differentials);
}

TEST(SpecSeq, RejectsBadFiltration) {
    RationalField q;
    EXPECT_THROW(FilteredComplex<RationalField>::basis_aligned(q, {scalar(q, 1)}, {{1}, {0}}, 1), FiltrationNotPreserved);
    IntFilteredComplex z{{IntMat::from_rows({{1}})}, {{1}, {0}}, 1, -1};
    EXPECT_THROW(degenerates_at(z, 1), FiltrationNotPreserved);
}

TEST(SpecSeq, IntegralDifferentialVerdict) {
    IntFilteredComplex z{{IntMat::from_rows({{2}})}, {{0}, {1}}, 1, -1};
    auto v = degenerates_at(z, 1);
    EXPECT_FALSE(v.by_differentials);
    EXPECT_FALSE(v.by_dimension.has_value());
    EXPECT_FALSE(v.note.empty());
    auto e1 = integral_page(z, 1), e2 = integral_page(z, 2);
    EXPECT_EQ(e1[std::make_pair(0, 0)], AbGroup(1));
    EXPECT_EQ(e1[std::make_pair(1, 0)], AbGroup(1));
    EXPECT_TRUE(e2[std::make_pair(0, 0)].is_zero());
    EXPECT_EQ(e2[std::make_pair(1, 0)], AbGroup(0, {2}));
    // same complex over F_2 degenerates
    PrimeField f2(2);
    auto fc = FilteredComplex<PrimeField>::basis_aligned(f2, {scalar(f2, 2)}, {{0}, {1}}, 1);
    EXPECT_TRUE(degenerates_at(fc, 1).by_differentials);
    IntFilteredComplex z0{{IntMat::from_rows({{0}})}, {{0}, {1}}, 1, -1};
    EXPECT_TRUE(degenerates_at(z0, 1).by_differentials);
}

TEST(SpecSeq, RandomComplexProperties) {
    std::mt19937_64 rng(8128);
    for (int it = 0; it < 40; ++it) {
        std::uint64_t p = it % 2 ? 3 : 2;
        auto fc = random_filtered_complex(rng, p);
        auto ps = pages(fc, fc.top + 2);
        for (std::size_t i = 0; i + 1 < ps.size(); ++i)
            for (auto& [k, v] : ps[i + 1].table) EXPECT_LE(v, ps[i].table[k]);
        // d_r o d_r = 0
        for (auto& pg : ps)
            for (auto& [k, m] : pg.differentials) {
                auto it2 = pg.differentials.find({k.first + pg.r, k.second - pg.r + 1});
                if (it2 == pg.differentials.end() || m.rows == 0 || it2->second.cols != m.rows) continue;
                EXPECT_TRUE((it2->second * m).is_zero());
            }
        auto inf = e_infinity(fc);
        for (int n = 0; n <= fc.max_degree(); ++n) EXPECT_EQ(inf.total(n), fc.cohomology_dim(n)) << "it=" << it;
        for (int r = 1; r <= 3; ++r) EXPECT_TRUE(degenerates_at(fc, r).agree) << "it=" << it << " r=" << r;
        EXPECT_TRUE(degenerates_at(fc, fc.top + 1).by_differentials);
    }
}
