#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hodgelab/error.hpp"
#include "hodgelab/exactlin/abgroup.hpp"
#include "hodgelab/exactlin/fp_rank.hpp"
#include "hodgelab/exactlin/int_mat.hpp"
#include "hodgelab/exactlin/smith.hpp"

namespace hodgelab {

// Columns of the result span ker(a) over Z.
inline IntMat integer_kernel_basis(const IntMat& a) {
    auto snf = smith_normal_form(a, true);
    const std::size_t n = a.cols(), r = snf.rank();
    IntMat k(n, n - r);
    for (std::size_t j = r; j < n; ++j)
        for (auto& [i, v] : snf.v->column(j)) k.set(i, j - r, v);
    return k;
}

inline void check_composable(const IntMat& d_in, const IntMat& d_out) {
    if (d_in.rows() != d_out.cols())
        throw DimensionMismatch("cohomology_of_pair: middle dimensions differ");
    if (d_in.cols() > 0 && d_out.rows() > 0 && !(d_out * d_in).is_zero())
        throw CompositionNonzero("d_out * d_in != 0");
}

// ker(d_out) / im(d_in) over Z.
inline AbGroup cohomology_of_pair(const IntMat& d_in, const IntMat& d_out) {
    check_composable(d_in, d_out);
    const std::size_t mid = d_in.rows();
    auto snf = smith_normal_form(d_in);
    std::vector<mpz_class> tors;
    for (auto& d : snf.diagonal)
        if (d != 1) tors.push_back(d);
    std::size_t rank_out = rational_rank(d_out, mid - snf.rank());
    return AbGroup(mid - rank_out - snf.rank(), tors);
}

// ker(d_out) / im(d_in) over F_p, as a dimension (rank field of the result).
inline AbGroup cohomology_of_pair_fp(const IntMat& d_in, const IntMat& d_out, std::uint64_t p) {
    if (d_in.rows() != d_out.cols()) throw DimensionMismatch("cohomology_of_pair_fp");
    const std::size_t mid = d_in.rows();
    std::size_t r_in = fp_rank(d_in, p), r_out = fp_rank(d_out, p);
    if (mid < r_in + r_out) throw CompositionNonzero("ranks exceed middle dimension mod p");
    return AbGroup(mid - r_in - r_out);
}

// Coordinates of each column of `vectors` in the lattice basis `basis` (independent columns).
inline IntMat lattice_coordinates(const IntMat& basis, const IntMat& vectors) {
    auto snf = smith_normal_form(basis, true);
    IntMat out(basis.cols(), vectors.cols());
    for (std::size_t c = 0; c < vectors.cols(); ++c) {
        std::vector<mpz_class> b(basis.rows());
        for (auto& [r, v] : vectors.column(c)) b[r] = v;
        auto ub = snf.u->apply(b);
        std::vector<mpz_class> z(basis.cols());
        for (std::size_t i = 0; i < ub.size(); ++i) {
            if (i < snf.rank()) {
                if (!mpz_divisible_p(ub[i].get_mpz_t(), snf.diagonal[i].get_mpz_t()))
                    throw DimensionMismatch("vector outside lattice");
                z[i] = ub[i] / snf.diagonal[i];
            } else if (ub[i] != 0) {
                throw DimensionMismatch("vector outside lattice");
            }
        }
        auto y = snf.v->apply(z);
        for (std::size_t i = 0; i < y.size(); ++i) out.set(i, c, y[i]);
    }
    return out;
}

// ker(d_out) / im(d_in) with coefficients in Z/N, the matrices being integral lifts.
// Cocycles form the lattice Z = {x : d_out x = 0 mod N}, which contains N Z^c;
// the group is Z / (im d_in + N Z^c).
inline AbGroup cohomology_of_pair_mod(const IntMat& d_in, const IntMat& d_out, const mpz_class& modulus) {
    if (d_in.rows() != d_out.cols()) throw DimensionMismatch("cohomology_of_pair_mod");
    const std::size_t c = d_in.rows(), r = d_out.rows();
    {
        IntMat comp = d_out * d_in;
        for (std::size_t j = 0; j < comp.cols(); ++j)
            for (auto& [i, v] : comp.column(j))
                if (!mpz_divisible_p(v.get_mpz_t(), modulus.get_mpz_t()))
                    throw CompositionNonzero("d_out * d_in != 0 mod N");
    }
    if (c == 0) return AbGroup();
    IntMat aug(r, c + r);
    for (std::size_t j = 0; j < c; ++j)
        for (auto& [i, v] : d_out.column(j)) aug.set(i, j, v);
    for (std::size_t i = 0; i < r; ++i) aug.set(i, c + i, modulus);
    IntMat k = integer_kernel_basis(aug);
    IntMat zb(c, k.cols());
    for (std::size_t j = 0; j < k.cols(); ++j)
        for (auto& [i, v] : k.column(j))
            if (i < c) zb.set(i, j, v);
    IntMat gens(c, d_in.cols() + c);
    for (std::size_t j = 0; j < d_in.cols(); ++j)
        for (auto& [i, v] : d_in.column(j)) gens.set(i, j, v);
    for (std::size_t i = 0; i < c; ++i) gens.set(i, d_in.cols() + i, modulus);
    return cokernel(lattice_coordinates(zb, gens));
}

}  // namespace hodgelab
