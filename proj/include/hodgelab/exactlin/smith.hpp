#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "hodgelab/error.hpp"
#include "hodgelab/exactlin/abgroup.hpp"
#include "hodgelab/exactlin/int_mat.hpp"

namespace hodgelab {

// u * a * v = d, with u, v unimodular and d diagonal (d_1 | d_2 | ..., all >= 0).
struct SmithForm {
    std::vector<mpz_class> diagonal;  // nonzero entries only
    std::optional<IntMat> u, u_inv, v;
    std::size_t rank() const { return diagonal.size(); }
};

namespace detail {

// Dense row-major working copy used by the elimination.
struct DenseZ {
    std::size_t m, n;
    std::vector<mpz_class> a;
    mpz_class& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
};

struct DenseTransforms {
    bool on = false;
    std::size_t m = 0, n = 0;
    std::vector<mpz_class> u, u_inv, v;  // m x m, m x m, n x n row-major

    void init(std::size_t rows, std::size_t cols) {
        on = true;
        m = rows;
        n = cols;
        u.assign(m * m, 0);
        u_inv.assign(m * m, 0);
        v.assign(n * n, 0);
        for (std::size_t i = 0; i < m; ++i) u[i * m + i] = u_inv[i * m + i] = 1;
        for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1;
    }
    // row_i += q * row_t on the matrix: u gets the same row op, u_inv the inverse column op.
    void row_addmul(std::size_t i, std::size_t t, const mpz_class& q) {
        if (!on) return;
        for (std::size_t k = 0; k < m; ++k) u[i * m + k] += q * u[t * m + k];
        for (std::size_t k = 0; k < m; ++k) u_inv[k * m + t] -= q * u_inv[k * m + i];
    }
    void row_swap(std::size_t i, std::size_t t) {
        if (!on || i == t) return;
        for (std::size_t k = 0; k < m; ++k) std::swap(u[i * m + k], u[t * m + k]);
        for (std::size_t k = 0; k < m; ++k) std::swap(u_inv[k * m + i], u_inv[k * m + t]);
    }
    void row_negate(std::size_t i) {
        if (!on) return;
        for (std::size_t k = 0; k < m; ++k) u[i * m + k] = -u[i * m + k];
        for (std::size_t k = 0; k < m; ++k) u_inv[k * m + i] = -u_inv[k * m + i];
    }
    // col_j += q * col_t
    void col_addmul(std::size_t j, std::size_t t, const mpz_class& q) {
        if (!on) return;
        for (std::size_t k = 0; k < n; ++k) v[k * n + j] += q * v[k * n + t];
    }
    void col_swap(std::size_t j, std::size_t t) {
        if (!on || j == t) return;
        for (std::size_t k = 0; k < n; ++k) std::swap(v[k * n + j], v[k * n + t]);
    }
};

inline IntMat dense_to_intmat(const std::vector<mpz_class>& a, std::size_t m, std::size_t n) {
    IntMat out(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (a[i * n + j] != 0) out.set(i, j, a[i * n + j]);
    return out;
}

// Quotient rounded to nearest, so remainders shrink fastest.
inline mpz_class round_div(const mpz_class& a, const mpz_class& b) {
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_class twice_r = 2 * abs(r);
    if (twice_r > abs(b)) q += (sgn(r) == sgn(b)) ? 1 : -1;
    return q;
}

}  // namespace detail

// Pivot rule: nonzero entry of least absolute value, ties to lowest (row, col).
inline SmithForm smith_normal_form(const IntMat& mat, bool with_transforms = false) {
    detail::DenseZ w{mat.rows(), mat.cols(), mat.dense()};
    detail::DenseTransforms tr;
    if (with_transforms) tr.init(w.m, w.n);
    const std::size_t m = w.m, n = w.n;

    auto row_addmul = [&](std::size_t i, std::size_t t, const mpz_class& q, std::size_t from) {
        for (std::size_t k = from; k < n; ++k)
            if (w.at(t, k) != 0) w.at(i, k) += q * w.at(t, k);
        tr.row_addmul(i, t, q);
    };
    auto col_addmul = [&](std::size_t j, std::size_t t, const mpz_class& q, std::size_t from) {
        for (std::size_t k = from; k < m; ++k)
            if (w.at(k, t) != 0) w.at(k, j) += q * w.at(k, t);
        tr.col_addmul(j, t, q);
    };
    auto row_swap = [&](std::size_t i, std::size_t t) {
        if (i == t) return;
        for (std::size_t k = 0; k < n; ++k) std::swap(w.at(i, k), w.at(t, k));
        tr.row_swap(i, t);
    };
    auto col_swap = [&](std::size_t j, std::size_t t) {
        if (j == t) return;
        for (std::size_t k = 0; k < m; ++k) std::swap(w.at(k, j), w.at(k, t));
        tr.col_swap(j, t);
    };

    SmithForm out;
    std::size_t t = 0;
    while (t < m && t < n) {
        // global pivot choice in the trailing block
        std::size_t pi = m, pj = n;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j) {
                const mpz_class& x = w.at(i, j);
                if (x == 0) continue;
                if (pi == m || mpz_cmpabs(x.get_mpz_t(), w.at(pi, pj).get_mpz_t()) < 0) {
                    pi = i;
                    pj = j;
                }
            }
        if (pi == m) break;
        row_swap(t, pi);
        col_swap(t, pj);

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (w.at(i, t) == 0) continue;
                mpz_class q = detail::round_div(w.at(i, t), w.at(t, t));
                row_addmul(i, t, -q, t);
                if (w.at(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (w.at(t, j) == 0) continue;
                mpz_class q = detail::round_div(w.at(t, j), w.at(t, t));
                col_addmul(j, t, -q, t);
                if (w.at(t, j) != 0) clean = false;
            }
            if (!clean) {
                // move the smallest leftover in row t / column t onto the pivot
                std::size_t bi = t, bj = t;
                for (std::size_t i = t + 1; i < m; ++i)
                    if (w.at(i, t) != 0 && mpz_cmpabs(w.at(i, t).get_mpz_t(), w.at(bi, bj).get_mpz_t()) < 0) {
                        bi = i;
                        bj = t;
                    }
                for (std::size_t j = t + 1; j < n; ++j)
                    if (w.at(t, j) != 0 && mpz_cmpabs(w.at(t, j).get_mpz_t(), w.at(bi, bj).get_mpz_t()) < 0) {
                        bi = t;
                        bj = j;
                    }
                row_swap(t, bi);
                col_swap(t, bj);
                continue;
            }
            // divisibility: pivot must divide the whole trailing block
            bool divides = true;
            for (std::size_t i = t + 1; i < m && divides; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (w.at(i, j) != 0 && !mpz_divisible_p(w.at(i, j).get_mpz_t(), w.at(t, t).get_mpz_t())) {
                        row_addmul(t, i, 1, t);
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (w.at(t, t) < 0) {
            for (std::size_t k = t; k < n; ++k) w.at(t, k) = -w.at(t, k);
            tr.row_negate(t);
        }
        out.diagonal.push_back(w.at(t, t));
        ++t;
    }
    if (with_transforms) {
        out.u = detail::dense_to_intmat(tr.u, m, m);
        out.u_inv = detail::dense_to_intmat(tr.u_inv, m, m);
        out.v = detail::dense_to_intmat(tr.v, n, n);
    }
    return out;
}

inline std::vector<mpz_class> elementary_divisors(const IntMat& mat) {
    return smith_normal_form(mat).diagonal;
}

// Cokernel of an integer matrix as an abstract group.
inline AbGroup cokernel(const IntMat& mat) {
    auto snf = smith_normal_form(mat);
    std::vector<mpz_class> tors;
    for (auto& d : snf.diagonal)
        if (d != 1) tors.push_back(d);
    return AbGroup(mat.rows() - snf.rank(), tors);
}

// Solves a * y = b over Z. Returns nullopt when no integral solution exists.
inline std::optional<std::vector<mpz_class>> solve_integer(const IntMat& a, const std::vector<mpz_class>& b) {
    if (b.size() != a.rows()) throw DimensionMismatch("solve_integer");
    auto snf = smith_normal_form(a, true);
    auto ub = snf.u->apply(b);
    std::vector<mpz_class> z(a.cols());
    for (std::size_t i = 0; i < ub.size(); ++i) {
        if (i < snf.rank()) {
            if (!mpz_divisible_p(ub[i].get_mpz_t(), snf.diagonal[i].get_mpz_t())) return std::nullopt;
            z[i] = ub[i] / snf.diagonal[i];
        } else if (ub[i] != 0) {
            return std::nullopt;
        }
    }
    return snf.v->apply(z);
}

}  // namespace hodgelab
