#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hodgelab/exactlin/field.hpp"
#include "hodgelab/exactlin/int_mat.hpp"

namespace hodgelab {

namespace detail {

// Gaussian elimination over F_2 with 64 columns per word.
inline std::size_t rank_mod2(const IntMat& m) {
    const std::size_t words = (m.cols() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> rows(m.rows(), std::vector<std::uint64_t>(words, 0));
    for (std::size_t c = 0; c < m.cols(); ++c)
        for (auto& [r, v] : m.column(c))
            if (mpz_odd_p(v.get_mpz_t())) rows[r][c / 64] |= (std::uint64_t{1} << (c % 64));
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.cols() && rank < rows.size(); ++c) {
        const std::size_t w = c / 64;
        const std::uint64_t bit = std::uint64_t{1} << (c % 64);
        std::size_t pr = rank;
        while (pr < rows.size() && !(rows[pr][w] & bit)) ++pr;
        if (pr == rows.size()) continue;
        std::swap(rows[pr], rows[rank]);
        for (std::size_t i = rank + 1; i < rows.size(); ++i)
            if (rows[i][w] & bit)
                for (std::size_t k = w; k < words; ++k) rows[i][k] ^= rows[rank][k];
        ++rank;
    }
    return rank;
}

// Row echelon over F_p with forward elimination only.
inline std::size_t rank_modp(const IntMat& m, std::uint64_t p) {
    PrimeField f(p);
    const std::size_t nr = m.rows(), nc = m.cols();
    // Eliminate along the smaller dimension.
    const bool transpose = nr < nc;
    const std::size_t R = transpose ? nc : nr, C = transpose ? nr : nc;
    std::vector<std::uint64_t> a(R * C, 0);
    for (std::size_t c = 0; c < nc; ++c)
        for (auto& [r, v] : m.column(c)) {
            auto x = f.from_mpz(v);
            if (transpose)
                a[c * C + r] = x;
            else
                a[r * C + c] = x;
        }
    std::size_t rank = 0;
    for (std::size_t c = 0; c < C && rank < R; ++c) {
        std::size_t pr = rank;
        while (pr < R && a[pr * C + c] == 0) ++pr;
        if (pr == R) continue;
        if (pr != rank)
            for (std::size_t k = 0; k < C; ++k) std::swap(a[pr * C + k], a[rank * C + k]);
        auto inv = f.inv(a[rank * C + c]);
        for (std::size_t k = c; k < C; ++k) a[rank * C + k] = f.mul(a[rank * C + k], inv);
        for (std::size_t i = rank + 1; i < R; ++i) {
            auto factor = a[i * C + c];
            if (factor == 0) continue;
            for (std::size_t k = c; k < C; ++k)
                if (a[rank * C + k]) a[i * C + k] = f.sub(a[i * C + k], f.mul(factor, a[rank * C + k]));
        }
        ++rank;
    }
    return rank;
}

// Fraction-free elimination over Z; exact rank over Q.
inline std::size_t rank_bareiss(const IntMat& m) {
    const std::size_t R = m.rows(), C = m.cols();
    auto a = m.dense();
    mpz_class prev = 1;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < C && rank < R; ++c) {
        std::size_t pr = rank;
        while (pr < R && a[pr * C + c] == 0) ++pr;
        if (pr == R) continue;
        if (pr != rank)
            for (std::size_t k = 0; k < C; ++k) std::swap(a[pr * C + k], a[rank * C + k]);
        for (std::size_t i = rank + 1; i < R; ++i) {
            for (std::size_t k = c + 1; k < C; ++k) {
                a[i * C + k] = a[rank * C + c] * a[i * C + k] - a[i * C + c] * a[rank * C + k];
                mpz_divexact(a[i * C + k].get_mpz_t(), a[i * C + k].get_mpz_t(), prev.get_mpz_t());
            }
            a[i * C + c] = 0;
        }
        prev = a[rank * C + c];
        ++rank;
    }
    return rank;
}

}  // namespace detail

inline std::size_t fp_rank(const IntMat& m, std::uint64_t p) {
    if (p == 2) return detail::rank_mod2(m);
    return detail::rank_modp(m, p);
}

// Columns form a basis of ker(m mod p).
inline Mat<PrimeField> fp_kernel_basis(const IntMat& m, std::uint64_t p) {
    return kernel_basis(Mat<PrimeField>::from_int(PrimeField(p), m));
}

inline constexpr std::uint64_t kCertificatePrime = (std::uint64_t{1} << 61) - 1;

// Rank over Q. The rank mod a prime never exceeds the true rank; when it reaches a
// known upper bound (for example cols - rank of the incoming differential, from
// d*d = 0) the rank is certified. Otherwise fall back to fraction-free elimination.
inline std::size_t rational_rank(const IntMat& m, std::optional<std::size_t> upper_bound = std::nullopt) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    std::size_t lower = detail::rank_modp(m, kCertificatePrime);
    std::size_t bound = std::min(m.rows(), m.cols());
    if (upper_bound) bound = std::min(bound, *upper_bound);
    if (lower == bound) return lower;
    return detail::rank_bareiss(m);
}

}  // namespace hodgelab
