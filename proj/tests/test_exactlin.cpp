#include <gtest/gtest.h>

#include <random>

#include "hodgelab/exactlin/cohomology.hpp"
#include "hodgelab/exactlin/field.hpp"
#include "hodgelab/exactlin/fp_rank.hpp"
#include "hodgelab/exactlin/smith.hpp"

using namespace hodgelab;

namespace {

IntMat random_mat(std::mt19937_64& rng, std::size_t r, std::size_t c, int range, double density) {
    std::uniform_int_distribution<int> val(-range, range);
    std::uniform_real_distribution<double> coin(0, 1);
    IntMat m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (coin(rng) < density) m.set(i, j, val(rng));
    return m;
}

bool is_diagonal_chain(const IntMat& d, const std::vector<mpz_class>& diag) {
    for (std::size_t c = 0; c < d.cols(); ++c)
        for (auto& [r, v] : d.column(c)) {
            if (r != c) return false;
            if (r >= diag.size() || v != diag[r]) return false;
        }
    for (std::size_t i = 0; i + 1 < diag.size(); ++i)
        if (diag[i] <= 0 || diag[i + 1] % diag[i] != 0) return false;
    return true;
}

}  // namespace

TEST(Smith, SmallExample) {
    auto m = IntMat::from_rows({{2, 4}, {6, 8}});
    auto d = elementary_divisors(m);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d[0], 2);
    EXPECT_EQ(d[1], 4);
}

TEST(Smith, MultiplicationByP) {
    auto d = IntMat::from_rows({{3}});
    IntMat zero_out(0, 1);
    EXPECT_EQ(cohomology_of_pair(d, zero_out), AbGroup(0, {3}));
}

TEST(Smith, ModTwoRankOfEvenDiagonal) {
    auto m = IntMat::from_rows({{2, 0}, {0, 4}});
    EXPECT_EQ(fp_rank(m, 2), 0u);
    EXPECT_EQ(fp_rank(m, 3), 2u);
}

TEST(Smith, ContractOnRandomMatrices) {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t r = 1 + rng() % 7, c = 1 + rng() % 7;
        IntMat a = random_mat(rng, r, c, 9, 0.6);
        auto snf = smith_normal_form(a, true);
        IntMat d = (*snf.u) * a * (*snf.v);
        EXPECT_TRUE(is_diagonal_chain(d, snf.diagonal)) << a;
        EXPECT_EQ((*snf.u) * (*snf.u_inv), IntMat::identity(r));
        EXPECT_EQ(snf.rank(), rational_rank(a));
        EXPECT_EQ(snf.rank(), detail::rank_bareiss(a));
        // determinant divisibility: the product of invariants equals gcd of maximal minors
        // only for square full rank; check the weaker contract against the rank mod large prime.
        EXPECT_EQ(snf.diagonal, elementary_divisors(a.transpose()));
    }
}

TEST(Smith, DeterministicPivots) {
    std::mt19937_64 rng(7);
    IntMat a = random_mat(rng, 6, 5, 20, 0.7);
    auto s1 = smith_normal_form(a, true), s2 = smith_normal_form(a, true);
    EXPECT_EQ(*s1.u, *s2.u);
    EXPECT_EQ(*s1.v, *s2.v);
}

TEST(Smith, IntegerSolve) {
    auto a = IntMat::from_rows({{2, 0}, {0, 3}});
    auto y = solve_integer(a, {4, 9});
    ASSERT_TRUE(y);
    EXPECT_EQ((*y)[0], 2);
    EXPECT_EQ((*y)[1], 3);
    EXPECT_FALSE(solve_integer(a, {1, 0}));
}

TEST(Cohomology, CompositionNonzeroThrows) {
    auto a = IntMat::from_rows({{1}});
    auto b = IntMat::from_rows({{1}});
    EXPECT_THROW(cohomology_of_pair(a, b), CompositionNonzero);
}

TEST(Cohomology, ModularCoefficients) {
    // Z --p--> Z: with Z/p^2 coefficients H^0 = Z/p, H^1 = Z/p.
    auto d = IntMat::from_rows({{3}});
    IntMat none_in(1, 0), none_out(0, 1);
    EXPECT_EQ(cohomology_of_pair_mod(none_in, d, 9), AbGroup(0, {3}));
    EXPECT_EQ(cohomology_of_pair_mod(d, none_out, 9), AbGroup(0, {3}));
    EXPECT_EQ(cohomology_of_pair_mod(d, none_out, 3), AbGroup(0, {3}));
    EXPECT_EQ(cohomology_of_pair_mod(none_in, d, 3), AbGroup(0, {3}));
}

TEST(Cohomology, UniversalCoefficientsOnRandomComplexes) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        // build d1: Z^a -> Z^b, d2: Z^b -> Z^c with d2 d1 = 0 via d1 = k * m, k spanning ker d2
        std::size_t a = 2 + rng() % 4, b = 3 + rng() % 4, c = 1 + rng() % 3;
        IntMat d2 = random_mat(rng, c, b, 4, 0.7);
        IntMat k = integer_kernel_basis(d2);
        IntMat m = random_mat(rng, k.cols(), a, 3, 0.8);
        IntMat d1 = k * m;
        // scale some columns to create torsion
        IntMat s(a, a);
        for (std::size_t i = 0; i < a; ++i) s.set(i, i, 1 + rng() % 3);
        d1 = d1 * s;
        AbGroup hz = cohomology_of_pair(d1, d2);
        IntMat d3(0, c);
        AbGroup hz_next = cohomology_of_pair(d2, d3);
        for (std::uint64_t p : {2u, 3u}) {
            AbGroup hp = cohomology_of_pair_fp(d1, d2, p);
            std::size_t expect = hz.rank + hz.torsion.size() - hz.count_primary(p, 0);
            // tor of the next group also contributes
            std::size_t tor_next = hz_next.torsion.size() - hz_next.count_primary(p, 0);
            EXPECT_EQ(hp.rank, expect + tor_next);
        }
    }
}

TEST(Field, KernelAndIntersection) {
    PrimeField f(5);
    Mat<PrimeField> m(f, 2, 3);
    m(0, 0) = 1; m(0, 1) = 2; m(1, 2) = 1;
    auto k = kernel_basis(m);
    EXPECT_EQ(k.cols, 1u);
    EXPECT_TRUE((m * k).is_zero());
    Mat<PrimeField> a(f, 3, 2), b(f, 3, 2);
    a(0, 0) = 1; a(1, 1) = 1;
    b(1, 0) = 1; b(2, 1) = 1;
    auto i = span_intersection(a, b);
    EXPECT_EQ(i.cols, 1u);
}

TEST(Field, RationalRankMatchesModular) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        IntMat a = random_mat(rng, 5, 6, 5, 0.5);
        EXPECT_EQ(rank(Mat<RationalField>::from_int(RationalField{}, a)), rational_rank(a));
    }
}
