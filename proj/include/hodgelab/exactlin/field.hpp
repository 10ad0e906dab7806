#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hodgelab/error.hpp"
#include "hodgelab/exactlin/int_mat.hpp"

namespace hodgelab {

struct PrimeField {
    using value_type = std::uint64_t;
    std::uint64_t p;

    explicit PrimeField(std::uint64_t prime) : p(prime) {}

    value_type zero() const { return 0; }
    value_type one() const { return 1 % p; }
    bool is_zero(value_type a) const { return a == 0; }
    value_type add(value_type a, value_type b) const {
        value_type s = a + b;
        return s >= p ? s - p : s;
    }
    value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + (p - b); }
    value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
    value_type mul(value_type a, value_type b) const {
        return static_cast<value_type>((static_cast<unsigned __int128>(a) * b) % p);
    }
    value_type pow(value_type a, std::uint64_t e) const {
        value_type r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    value_type inv(value_type a) const {
        if (a == 0) throw std::domain_error("inverse of zero");
        return pow(a, p - 2);
    }
    value_type from_mpz(const mpz_class& z) const {
        return mpz_fdiv_ui(z.get_mpz_t(), p);
    }
    value_type from_mpq(const mpq_class& q) const {
        return mul(from_mpz(q.get_num()), inv(from_mpz(q.get_den())));
    }
    mpq_class to_mpq(value_type a) const { return mpq_class(static_cast<unsigned long>(a)); }
    bool operator==(const PrimeField&) const = default;
};

struct RationalField {
    using value_type = mpq_class;
    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    bool is_zero(const value_type& a) const { return a == 0; }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type inv(const value_type& a) const {
        if (a == 0) throw std::domain_error("inverse of zero");
        return 1 / a;
    }
    value_type from_mpz(const mpz_class& z) const { return mpq_class(z); }
    value_type from_mpq(const mpq_class& q) const { return q; }
    mpq_class to_mpq(const value_type& a) const { return a; }
    bool operator==(const RationalField&) const = default;
};

// Dense matrix over a field, row-major.
template <class F>
struct Mat {
    using T = typename F::value_type;
    F field;
    std::size_t rows = 0, cols = 0;
    std::vector<T> a;

    Mat(F f, std::size_t r, std::size_t c) : field(f), rows(r), cols(c), a(r * c, f.zero()) {}

    static Mat from_int(F f, const IntMat& m) {
        Mat out(f, m.rows(), m.cols());
        for (std::size_t c = 0; c < m.cols(); ++c)
            for (auto& [r, v] : m.column(c)) out(r, c) = f.from_mpz(v);
        return out;
    }
    static Mat identity(F f, std::size_t n) {
        Mat out(f, n, n);
        for (std::size_t i = 0; i < n; ++i) out(i, i) = f.one();
        return out;
    }

    T& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    bool is_zero() const {
        for (auto& x : a)
            if (!field.is_zero(x)) return false;
        return true;
    }

    std::vector<T> column(std::size_t c) const {
        std::vector<T> v(rows);
        for (std::size_t r = 0; r < rows; ++r) v[r] = (*this)(r, c);
        return v;
    }

    std::vector<T> apply(const std::vector<T>& x) const {
        if (x.size() != cols) throw DimensionMismatch("Mat::apply");
        std::vector<T> y(rows, field.zero());
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                if (!field.is_zero(x[c]) && !field.is_zero((*this)(r, c)))
                    y[r] = field.add(y[r], field.mul((*this)(r, c), x[c]));
        return y;
    }

    friend Mat operator*(const Mat& x, const Mat& y) {
        if (x.cols != y.rows) throw DimensionMismatch("Mat product");
        Mat out(x.field, x.rows, y.cols);
        for (std::size_t i = 0; i < x.rows; ++i)
            for (std::size_t k = 0; k < x.cols; ++k) {
                const T& xik = x(i, k);
                if (x.field.is_zero(xik)) continue;
                for (std::size_t j = 0; j < y.cols; ++j)
                    if (!x.field.is_zero(y(k, j))) out(i, j) = x.field.add(out(i, j), x.field.mul(xik, y(k, j)));
            }
        return out;
    }

    friend bool operator==(const Mat& x, const Mat& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }

    Mat hcat(const Mat& y) const {
        if (rows != y.rows) throw DimensionMismatch("hcat");
        Mat out(field, rows, cols + y.cols);
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) out(r, c) = (*this)(r, c);
            for (std::size_t c = 0; c < y.cols; ++c) out(r, cols + c) = y(r, c);
        }
        return out;
    }

    Mat select_columns(const std::vector<std::size_t>& idx) const {
        Mat out(field, rows, idx.size());
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t k = 0; k < idx.size(); ++k) out(r, k) = (*this)(r, idx[k]);
        return out;
    }

    Mat row_range(std::size_t from, std::size_t to) const {
        Mat out(field, to - from, cols);
        for (std::size_t r = from; r < to; ++r)
            for (std::size_t c = 0; c < cols; ++c) out(r - from, c) = (*this)(r, c);
        return out;
    }
};

// In-place reduced row echelon form; returns pivot columns.
template <class F>
std::vector<std::size_t> rref(Mat<F>& m) {
    const F& f = m.field;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t pr = r;
        while (pr < m.rows && f.is_zero(m(pr, c))) ++pr;
        if (pr == m.rows) continue;
        if (pr != r)
            for (std::size_t k = 0; k < m.cols; ++k) std::swap(m(pr, k), m(r, k));
        auto inv = f.inv(m(r, c));
        for (std::size_t k = c; k < m.cols; ++k) m(r, k) = f.mul(m(r, k), inv);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r || f.is_zero(m(i, c))) continue;
            auto factor = m(i, c);
            for (std::size_t k = c; k < m.cols; ++k)
                if (!f.is_zero(m(r, k))) m(i, k) = f.sub(m(i, k), f.mul(factor, m(r, k)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

template <class F>
std::size_t rank(Mat<F> m) {
    return rref(m).size();
}

// Columns form a basis of the null space.
template <class F>
Mat<F> kernel_basis(Mat<F> m) {
    const F& f = m.field;
    auto pivots = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < m.cols; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    Mat<F> out(f, m.cols, free_cols.size());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        std::size_t fc = free_cols[k];
        out(fc, k) = f.one();
        for (std::size_t i = 0; i < pivots.size(); ++i) out(pivots[i], k) = f.neg(m(i, fc));
    }
    return out;
}

// Columns of `basis` reduced to an independent spanning set (first-come order).
template <class F>
Mat<F> independent_columns(const Mat<F>& basis) {
    Mat<F> t = basis;
    auto pivots = rref(t);
    return basis.select_columns(pivots);
}

template <class F>
Mat<F> span_sum(const Mat<F>& a, const Mat<F>& b) {
    return independent_columns(a.hcat(b));
}

// Basis of the intersection of two column spans (both inputs need not be independent).
template <class F>
Mat<F> span_intersection(const Mat<F>& a, const Mat<F>& b) {
    const F& f = a.field;
    Mat<F> ai = independent_columns(a), bi = independent_columns(b);
    Mat<F> neg_b = bi;
    for (auto& x : neg_b.a) x = f.neg(x);
    Mat<F> k = kernel_basis(ai.hcat(neg_b));
    Mat<F> coeff = k.row_range(0, ai.cols);
    return independent_columns(ai * coeff);
}

// {v in span(dom) : map * v in span(target)}
template <class F>
Mat<F> span_preimage(const Mat<F>& map, const Mat<F>& dom, const Mat<F>& target) {
    const F& f = map.field;
    Mat<F> di = independent_columns(dom);
    Mat<F> image = map * di;
    Mat<F> neg_t = target;
    for (auto& x : neg_t.a) x = f.neg(x);
    Mat<F> k = kernel_basis(image.hcat(neg_t));
    return independent_columns(di * k.row_range(0, di.cols));
}

// Coordinates of v in the column span of `basis` (independent columns), or nullopt.
template <class F>
std::optional<std::vector<typename F::value_type>> span_coordinates(const Mat<F>& basis,
                                                                   const std::vector<typename F::value_type>& v) {
    const F& f = basis.field;
    Mat<F> aug(f, basis.rows, basis.cols + 1);
    for (std::size_t r = 0; r < basis.rows; ++r) {
        for (std::size_t c = 0; c < basis.cols; ++c) aug(r, c) = basis(r, c);
        aug(r, basis.cols) = v[r];
    }
    auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == basis.cols) return std::nullopt;
    std::vector<typename F::value_type> x(basis.cols, f.zero());
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, basis.cols);
    return x;
}

template <class F>
bool in_span(const Mat<F>& basis, const std::vector<typename F::value_type>& v) {
    return span_coordinates(independent_columns(basis), v).has_value();
}

// Subquotient num / den with den contained in num. Chooses representatives of a
// complement of den inside num and expresses vectors of num in those coordinates.
template <class F>
struct Subquotient {
    using T = typename F::value_type;
    Mat<F> den;   // independent columns
    Mat<F> reps;  // complement representatives
    Mat<F> both;  // [den | reps]

    Subquotient(const Mat<F>& num, const Mat<F>& den_in)
        : den(independent_columns(den_in)), reps(num.field, num.rows, 0), both(num.field, num.rows, 0) {
        Mat<F> all = den.hcat(num);
        Mat<F> t = all;
        auto pivots = rref(t);
        std::vector<std::size_t> rep_cols;
        for (auto c : pivots) {
            if (c < den.cols) continue;
            rep_cols.push_back(c);
        }
        if (pivots.size() - rep_cols.size() != den.cols)
            throw DimensionMismatch("subquotient denominator is not independent");
        reps = all.select_columns(rep_cols);
        both = den.hcat(reps);
    }

    std::size_t dim() const { return reps.cols; }

    // Throws if v is not in num.
    std::vector<T> coords(const std::vector<T>& v) const {
        auto x = span_coordinates(both, v);
        if (!x) throw FiltrationNotPreserved("vector outside the subquotient numerator");
        return std::vector<T>(x->begin() + den.cols, x->end());
    }
};

}  // namespace hodgelab
