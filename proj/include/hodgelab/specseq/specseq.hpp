#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hodgelab/error.hpp"
#include "hodgelab/exactlin/abgroup.hpp"
#include "hodgelab/exactlin/cohomology.hpp"
#include "hodgelab/exactlin/field.hpp"
#include "hodgelab/exactlin/int_mat.hpp"
#include "hodgelab/exactlin/smith.hpp"

namespace hodgelab {

// Cochain complex C^0 -> ... -> C^N over a field with a finite decreasing filtration
// F^0 = C ⊇ F^1 ⊇ ... ⊇ F^{top+1} = 0, each step given by spanning columns.
// Degrees above n_valid are present only to support lower ones (truncations).
template <class F>
struct FilteredComplex {
    F field;
    std::vector<std::size_t> dims;
    std::vector<Mat<F>> d;                // d[n]: C^n -> C^{n+1}
    int top = 0;
    std::vector<std::vector<Mat<F>>> fil;  // fil[n][p], p = 0 .. top+1
    int n_valid = -1;

    int max_degree() const { return static_cast<int>(dims.size()) - 1; }
    int valid() const { return n_valid < 0 ? max_degree() : std::min(n_valid, max_degree()); }

    // F^p C^n with p clamped into [0, top+1].
    Mat<F> step(int n, int p) const {
        if (n < 0 || n > max_degree()) return Mat<F>(field, 0, 0);
        p = std::clamp(p, 0, top + 1);
        return fil[static_cast<std::size_t>(n)][static_cast<std::size_t>(p)];
    }
    Mat<F> diff(int n) const {
        if (n < 0) return Mat<F>(field, dims.empty() ? 0 : dims[0], 0);
        if (n >= max_degree()) return Mat<F>(field, 0, dims[static_cast<std::size_t>(n)]);
        return d[static_cast<std::size_t>(n)];
    }

    // Levels per basis vector: e_i lies in F^p iff level[n][i] >= p.
    static FilteredComplex basis_aligned(F field, std::vector<Mat<F>> d, const std::vector<std::vector<int>>& level,
                                         int top) {
        FilteredComplex fc{field, {}, std::move(d), top, {}, -1};
        for (auto& lv : level) fc.dims.push_back(lv.size());
        for (std::size_t n = 0; n < level.size(); ++n) {
            std::vector<Mat<F>> steps;
            Mat<F> id = Mat<F>::identity(field, level[n].size());
            for (int p = 0; p <= top + 1; ++p) {
                std::vector<std::size_t> idx;
                for (std::size_t i = 0; i < level[n].size(); ++i)
                    if (level[n][i] >= p) idx.push_back(i);
                steps.push_back(id.select_columns(idx));
            }
            fc.fil.push_back(std::move(steps));
        }
        fc.validate();
        return fc;
    }

    // Increasing filtration G_0 ⊆ ... ⊆ G_top = C, reindexed as F^p = G_{top-p}.
    static FilteredComplex from_increasing(F field, std::vector<Mat<F>> d,
                                           const std::vector<std::vector<Mat<F>>>& g, int top) {
        FilteredComplex fc{field, {}, std::move(d), top, {}, -1};
        for (auto& steps : g) {
            if (static_cast<int>(steps.size()) != top + 1) throw DimensionMismatch("increasing filtration length");
            fc.dims.push_back(steps.back().rows);
            std::vector<Mat<F>> dec;
            for (int p = 0; p <= top; ++p) dec.push_back(steps[static_cast<std::size_t>(top - p)]);
            dec.push_back(Mat<F>(field, steps.back().rows, 0));
            fc.fil.push_back(std::move(dec));
        }
        fc.validate();
        return fc;
    }

    void validate() const {
        if (fil.size() != dims.size()) throw DimensionMismatch("filtration per degree");
        if (d.size() + 1 != dims.size() && !(dims.empty() && d.empty()))
            throw DimensionMismatch("differentials per degree");
        for (int n = 0; n <= max_degree(); ++n) {
            const auto& f = fil[static_cast<std::size_t>(n)];
            if (static_cast<int>(f.size()) != top + 2) throw DimensionMismatch("filtration length");
            if (rank(f[0]) != dims[static_cast<std::size_t>(n)])
                throw FiltrationNotPreserved("F^0 is not the whole complex in degree " + std::to_string(n));
            if (f.back().cols && rank(f.back()) != 0) throw FiltrationNotPreserved("F^{top+1} is not zero");
            for (int p = 0; p <= top; ++p) {
                const auto& a = f[static_cast<std::size_t>(p)];
                const auto& b = f[static_cast<std::size_t>(p + 1)];
                if (rank(a.hcat(b)) != rank(a)) throw FiltrationNotPreserved("filtration is not decreasing");
                if (n < max_degree()) {
                    Mat<F> img = diff(n) * a;
                    const auto& t = fil[static_cast<std::size_t>(n + 1)][static_cast<std::size_t>(p)];
                    if (rank(t.hcat(img)) != rank(t))
                        throw FiltrationNotPreserved("d(F^" + std::to_string(p) + ") leaves F^" + std::to_string(p) +
                                                     " in degree " + std::to_string(n));
                }
            }
            if (n + 1 < max_degree() && !(diff(n + 1) * diff(n)).is_zero())
                throw CompositionNonzero("d^2 != 0 in degree " + std::to_string(n));
        }
    }

    std::size_t cohomology_dim(int n) const {
        return dims[static_cast<std::size_t>(n)] - rank(diff(n)) - (n > 0 ? rank(diff(n - 1)) : 0);
    }
};

template <class F>
struct SSPage {
    int r = 1;
    std::map<std::pair<int, int>, std::size_t> table;          // (p, q) -> dim E_r^{p,q}
    std::map<std::pair<int, int>, Mat<F>> differentials;      // d_r out of (p, q)
    std::size_t total(int n) const {
        std::size_t s = 0;
        for (auto& [k, v] : table)
            if (k.first + k.second == n) s += v;
        return s;
    }
};

namespace detail {

// Z_r^{p,n} = F^p ∩ d^{-1}(F^{p+r}); r <= 0 gives F^p.
template <class F>
Mat<F> ss_cycles(const FilteredComplex<F>& fc, int r, int p, int n) {
    Mat<F> fp = fc.step(n, p);
    if (r <= 0 || n >= fc.max_degree()) return fp;
    return span_preimage(fc.diff(n), fp, fc.step(n + 1, p + r));
}

// Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1}, inside degree n.
template <class F>
Mat<F> ss_denominator(const FilteredComplex<F>& fc, int r, int p, int n) {
    Mat<F> a = ss_cycles(fc, r - 1, p + 1, n);
    if (n == 0) return independent_columns(a);
    Mat<F> b = fc.diff(n - 1) * ss_cycles(fc, r - 1, p - r + 1, n - 1);
    return span_sum(a, b);
}

template <class F>
Subquotient<F> ss_term(const FilteredComplex<F>& fc, int r, int p, int n) {
    return Subquotient<F>(ss_cycles(fc, r, p, n), ss_denominator(fc, r, p, n));
}

}  // namespace detail

// Page r of the spectral sequence, with differentials d_r: (p,q) -> (p+r, q-r+1).
template <class F>
SSPage<F> page(const FilteredComplex<F>& fc, int r) {
    SSPage<F> pg;
    pg.r = r;
    std::map<std::pair<int, int>, Subquotient<F>> terms;
    for (int n = 0; n <= fc.max_degree(); ++n)
        for (int p = 0; p <= fc.top; ++p) {
            auto sq = detail::ss_term(fc, r, p, n);
            pg.table[{p, n - p}] = sq.dim();
            terms.emplace(std::make_pair(p, n - p), std::move(sq));
        }
    for (auto& [key, src] : terms) {
        const int p = key.first, n = key.first + key.second;
        if (n >= fc.max_degree()) continue;
        const int tp = p + r, tq = key.second - r + 1;
        auto it = terms.find({tp, tq});
        std::size_t rows = it == terms.end() ? 0 : it->second.dim();
        Mat<F> m(fc.field, rows, src.dim());
        if (src.dim() && it != terms.end()) {
            Mat<F> img = fc.diff(n) * src.reps;
            for (std::size_t c = 0; c < src.dim(); ++c) {
                auto x = it->second.coords(img.column(c));
                for (std::size_t j = 0; j < rows; ++j) m(j, c) = x[j];
            }
        }
        pg.differentials.emplace(key, std::move(m));
    }
    return pg;
}

// E_1 .. E_{r_max}. Beyond the filtration length the pages are stable.
template <class F>
std::vector<SSPage<F>> pages(const FilteredComplex<F>& fc, int r_max) {
    fc.validate();
    std::vector<SSPage<F>> out;
    for (int r = 1; r <= r_max; ++r) out.push_back(page(fc, r));
    return out;
}

template <class F>
SSPage<F> e_infinity(const FilteredComplex<F>& fc) {
    return page(fc, fc.top + 2);
}

struct LocatedDifferential {
    int r, p, q;
    std::size_t rank;
};

struct DegenerationVerdict {
    int r = 1;
    bool by_differentials = true;
    std::optional<bool> by_dimension;  // absent over Z
    bool agree = true;
    std::optional<LocatedDifferential> first_nonzero;
    std::map<int, std::size_t> page_totals;  // n -> sum of dim E_r^{p,n-p}
    std::map<int, std::size_t> total_dims;   // n -> dim H^n
    std::string note;
};

// Degeneration at E_r decided twice: (a) all d_{r'} with r' >= r vanish on valid degrees,
// (b) sum_p dim E_r^{p,n-p} = dim H^n for n <= n_valid.
template <class F>
DegenerationVerdict degenerates_at(const FilteredComplex<F>& fc, int r) {
    fc.validate();
    DegenerationVerdict v;
    v.r = r;
    const int nv = fc.valid();
    for (int rr = r; rr <= fc.top + 1; ++rr) {
        auto pg = page(fc, rr);
        if (rr == r)
            for (int n = 0; n <= nv; ++n) v.page_totals[n] = pg.total(n);
        for (auto& [key, m] : pg.differentials) {
            if (key.first + key.second >= nv) continue;
            if (m.is_zero()) continue;
            if (v.by_differentials) v.first_nonzero = LocatedDifferential{rr, key.first, key.second, rank(m)};
            v.by_differentials = false;
            break;
        }
        if (!v.by_differentials) break;
    }
    bool dim_ok = true;
    for (int n = 0; n <= nv; ++n) {
        v.total_dims[n] = fc.cohomology_dim(n);
        if (v.page_totals[n] != v.total_dims[n]) dim_ok = false;
    }
    v.by_dimension = dim_ok;
    v.agree = dim_ok == v.by_differentials;
    return v;
}

// Integral version: basis-aligned filtration levels, lattice subquotients.
struct IntFilteredComplex {
    std::vector<IntMat> d;                 // d[n]: C^n -> C^{n+1}
    std::vector<std::vector<int>> level;   // level[n][i]
    int top = 0;
    int n_valid = -1;

    int max_degree() const { return static_cast<int>(level.size()) - 1; }
    int valid() const { return n_valid < 0 ? max_degree() : std::min(n_valid, max_degree()); }
    std::size_t dim(int n) const { return level[static_cast<std::size_t>(n)].size(); }

    void validate() const {
        if (d.size() + 1 != level.size()) throw DimensionMismatch("differentials per degree");
        for (int n = 0; n < max_degree(); ++n) {
            const auto& m = d[static_cast<std::size_t>(n)];
            if (m.rows() != dim(n + 1) || m.cols() != dim(n)) throw DimensionMismatch("differential shape");
            for (std::size_t c = 0; c < m.cols(); ++c)
                for (auto& [r, x] : m.column(c))
                    if (level[static_cast<std::size_t>(n + 1)][r] < level[static_cast<std::size_t>(n)][c])
                        throw FiltrationNotPreserved("d lowers the filtration in degree " + std::to_string(n));
            if (n + 1 < max_degree() && !(d[static_cast<std::size_t>(n + 1)] * m).is_zero())
                throw CompositionNonzero("d^2 != 0 in degree " + std::to_string(n));
        }
    }

    // Lattice Z_r^{p,n} as columns in the full basis.
    IntMat cycles(int r, int p, int n) const {
        std::vector<std::size_t> cols;
        for (std::size_t i = 0; i < dim(n); ++i)
            if (level[static_cast<std::size_t>(n)][i] >= p) cols.push_back(i);
        IntMat out(dim(n), 0);
        if (r <= 0 || n >= max_degree()) {
            out = IntMat(dim(n), cols.size());
            for (std::size_t k = 0; k < cols.size(); ++k) out.set(cols[k], k, 1);
            return out;
        }
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < dim(n + 1); ++i)
            if (level[static_cast<std::size_t>(n + 1)][i] < p + r) rows.push_back(i);
        const auto& m = d[static_cast<std::size_t>(n)];
        IntMat sub(rows.size(), cols.size());
        for (std::size_t k = 0; k < cols.size(); ++k)
            for (std::size_t j = 0; j < rows.size(); ++j) {
                mpz_class x = m.at(rows[j], cols[k]);
                if (x != 0) sub.set(j, k, x);
            }
        IntMat ker = integer_kernel_basis(sub);
        out = IntMat(dim(n), ker.cols());
        for (std::size_t c = 0; c < ker.cols(); ++c)
            for (auto& [i, x] : ker.column(c)) out.set(cols[i], c, x);
        return out;
    }

    IntMat denominator(int r, int p, int n) const {
        IntMat a = cycles(r - 1, p + 1, n);
        if (n == 0) return a;
        IntMat b = d[static_cast<std::size_t>(n - 1)] * cycles(r - 1, p - r + 1, n - 1);
        IntMat out(dim(n), a.cols() + b.cols());
        for (std::size_t c = 0; c < a.cols(); ++c)
            for (auto& [i, x] : a.column(c)) out.set(i, c, x);
        for (std::size_t c = 0; c < b.cols(); ++c)
            for (auto& [i, x] : b.column(c)) out.set(i, a.cols() + c, x);
        return out;
    }

    AbGroup term(int r, int p, int n) const {
        IntMat z = cycles(r, p, n);
        IntMat den = denominator(r, p, n);
        return cokernel(lattice_coordinates(z, den));
    }

    bool differential_vanishes(int r, int p, int n) const {
        if (n >= max_degree()) return true;
        IntMat z = cycles(r, p, n);
        if (z.cols() == 0) return true;
        IntMat img = d[static_cast<std::size_t>(n)] * z;
        IntMat den = denominator(r, p + r, n + 1);
        for (std::size_t c = 0; c < img.cols(); ++c) {
            std::vector<mpz_class> b(img.rows(), 0);
            for (auto& [i, x] : img.column(c)) b[i] = x;
            if (!solve_integer(den, b)) return false;
        }
        return true;
    }
};

inline std::map<std::pair<int, int>, AbGroup> integral_page(const IntFilteredComplex& fc, int r) {
    fc.validate();
    std::map<std::pair<int, int>, AbGroup> out;
    for (int n = 0; n <= fc.max_degree(); ++n)
        for (int p = 0; p <= fc.top; ++p) out[{p, n - p}] = fc.term(r, p, n);
    return out;
}

inline DegenerationVerdict degenerates_at(const IntFilteredComplex& fc, int r) {
    fc.validate();
    DegenerationVerdict v;
    v.r = r;
    v.note = "over Z only the vanishing of differentials is decided; torsion makes dimension counts meaningless";
    for (int rr = r; rr <= fc.top + 1 && v.by_differentials; ++rr)
        for (int n = 0; n < fc.valid() && v.by_differentials; ++n)
            for (int p = 0; p <= fc.top; ++p)
                if (!fc.differential_vanishes(rr, p, n)) {
                    v.by_differentials = false;
                    v.first_nonzero = LocatedDifferential{rr, p, n - p, 0};
                    break;
                }
    return v;
}

// Random filtered complex over F_p: elementary pieces u -> v conjugated by unipotent
// filtration-preserving automorphisms.
inline FilteredComplex<PrimeField> random_filtered_complex(std::mt19937_64& rng, std::uint64_t p) {
    PrimeField f(p);
    const int N = 3, top = 2;
    std::vector<std::vector<int>> level(N + 1);
    std::vector<Mat<PrimeField>> d;
    struct Pair {
        int n;
        std::size_t u, v;
    };
    std::vector<Pair> pairs;
    // start with free cohomology classes, then add acyclic pairs
    for (int n = 0; n <= N; ++n)
        for (int k = 0, c = static_cast<int>(rng() % 2); k < c; ++k) level[n].push_back(static_cast<int>(rng() % 3));
    for (int k = 0; k < 4; ++k) {
        int n = static_cast<int>(rng() % N);
        int a = static_cast<int>(rng() % 3);
        int b = a + static_cast<int>(rng() % (3 - a));
        level[n].push_back(a);
        level[n + 1].push_back(b);
        pairs.push_back({n, level[n].size() - 1, level[n + 1].size() - 1});
    }
    for (int n = 0; n < N; ++n) {
        Mat<PrimeField> m(f, level[n + 1].size(), level[n].size());
        for (auto& pr : pairs)
            if (pr.n == n) m(pr.v, pr.u) = 1;
        d.push_back(m);
    }
    // unipotent changes of basis
    std::vector<Mat<PrimeField>> g, ginv;
    for (int n = 0; n <= N; ++n) {
        const std::size_t k = level[n].size();
        Mat<PrimeField> m = Mat<PrimeField>::identity(f, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (level[n][j] > level[n][i]) m(j, i) = rng() % p;
        Mat<PrimeField> inv(f, k, k);
        for (std::size_t c = 0; c < k; ++c) {
            std::vector<std::uint64_t> e(k, 0);
            e[c] = 1;
            auto x = span_coordinates(m, e);
            for (std::size_t r = 0; r < k; ++r) inv(r, c) = (*x)[r];
        }
        g.push_back(m);
        ginv.push_back(inv);
    }
    for (int n = 0; n < N; ++n) d[n] = g[n + 1] * d[n] * ginv[n];
    return FilteredComplex<PrimeField>::basis_aligned(f, d, level, top);
}

}  // namespace hodgelab
