#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <ostream>
#include <vector>

#include "hodgelab/error.hpp"

namespace hodgelab {

// Sparse integer matrix, stored column by column.
class IntMat {
public:
    using Column = std::map<std::size_t, mpz_class>;

    IntMat() = default;
    IntMat(std::size_t rows, std::size_t cols) : rows_(rows), data_(cols) {}

    static IntMat identity(std::size_t n) {
        IntMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
        return m;
    }

    static IntMat from_rows(const std::vector<std::vector<long>>& rows) {
        std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
        IntMat m(r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) throw DimensionMismatch("ragged row list");
            for (std::size_t j = 0; j < c; ++j)
                if (rows[i][j] != 0) m.set(i, j, rows[i][j]);
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return data_.size(); }

    mpz_class at(std::size_t r, std::size_t c) const {
        auto it = data_[c].find(r);
        return it == data_[c].end() ? mpz_class(0) : it->second;
    }

    void set(std::size_t r, std::size_t c, const mpz_class& v) {
        if (v == 0)
            data_[c].erase(r);
        else
            data_[c][r] = v;
    }

    void add(std::size_t r, std::size_t c, const mpz_class& v) {
        if (v == 0) return;
        auto [it, inserted] = data_[c].try_emplace(r, v);
        if (!inserted) {
            it->second += v;
            if (it->second == 0) data_[c].erase(it);
        }
    }

    const Column& column(std::size_t c) const { return data_[c]; }

    std::size_t nnz() const {
        std::size_t n = 0;
        for (auto& col : data_) n += col.size();
        return n;
    }

    bool is_zero() const {
        for (auto& col : data_)
            if (!col.empty()) return false;
        return true;
    }

    IntMat transpose() const {
        IntMat t(cols(), rows_);
        for (std::size_t c = 0; c < cols(); ++c)
            for (auto& [r, v] : data_[c]) t.data_[r][c] = v;
        return t;
    }

    // Row-major dense copy.
    std::vector<mpz_class> dense() const {
        std::vector<mpz_class> out(rows_ * cols());
        for (std::size_t c = 0; c < cols(); ++c)
            for (auto& [r, v] : data_[c]) out[r * cols() + c] = v;
        return out;
    }

    std::vector<mpz_class> apply(const std::vector<mpz_class>& x) const {
        if (x.size() != cols()) throw DimensionMismatch("IntMat::apply");
        std::vector<mpz_class> y(rows_);
        for (std::size_t c = 0; c < cols(); ++c) {
            if (x[c] == 0) continue;
            for (auto& [r, v] : data_[c]) y[r] += v * x[c];
        }
        return y;
    }

    friend IntMat operator*(const IntMat& a, const IntMat& b) {
        if (a.cols() != b.rows()) throw DimensionMismatch("IntMat product");
        IntMat out(a.rows(), b.cols());
        for (std::size_t c = 0; c < b.cols(); ++c) {
            Column acc;
            for (auto& [k, bv] : b.data_[c])
                for (auto& [r, av] : a.data_[k]) acc[r] += av * bv;
            for (auto& [r, v] : acc)
                if (v != 0) out.data_[c].emplace(r, v);
        }
        return out;
    }

    friend bool operator==(const IntMat& a, const IntMat& b) {
        return a.rows_ == b.rows_ && a.data_ == b.data_;
    }

    friend std::ostream& operator<<(std::ostream& os, const IntMat& m) {
        for (std::size_t r = 0; r < m.rows(); ++r) {
            os << '[';
            for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m.at(r, c);
            os << "]\n";
        }
        return os;
    }

private:
    std::size_t rows_ = 0;
    std::vector<Column> data_;
};

}  // namespace hodgelab
