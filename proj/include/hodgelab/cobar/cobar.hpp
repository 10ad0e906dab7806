#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hodgelab/error.hpp"
#include "hodgelab/exactlin/cohomology.hpp"
#include "hodgelab/exactlin/field.hpp"
#include "hodgelab/exactlin/fp_rank.hpp"
#include "hodgelab/exactlin/smith.hpp"
#include "hodgelab/gralg/coeff_ring.hpp"
#include "hodgelab/gralg/pd.hpp"
#include "hodgelab/gralg/ring_cohomology.hpp"
#include "hodgelab/parallel.hpp"

namespace hodgelab {

// Standard complex C^n(G_a, Z) = Z[x_1..x_n]; x has weight 2, so the weight-w
// strand consists of polynomials of total degree w/2.
using CobarMonomial = std::vector<int>;

inline std::vector<CobarMonomial> cobar_basis(int n, int w) {
    std::vector<CobarMonomial> out;
    if (n < 0 || w < 0 || w % 2) return out;
    const int d = w / 2;
    if (n == 0) {
        if (d == 0) out.push_back({});
        return out;
    }
    CobarMonomial m(n, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == n - 1) {
            m[i] = left;
            out.push_back(m);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            m[i] = e;
            rec(i + 1, left - e);
        }
    };
    rec(0, d);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::size_t cobar_index(const std::vector<CobarMonomial>& basis, const CobarMonomial& m) {
    auto it = std::lower_bound(basis.begin(), basis.end(), m);
    if (it == basis.end() || *it != m) throw DimensionMismatch("monomial outside strand");
    return static_cast<std::size_t>(it - basis.begin());
}

// d(f)(x_1..x_{n+1}) = f(x_2..) + sum_i (-1)^i f(.., x_i + x_{i+1}, ..) + (-1)^{n+1} f(x_1..x_n)
inline IntMat cobar_differential(int n, int w) {
    auto src = cobar_basis(n, w), tgt = cobar_basis(n + 1, w);
    IntMat d(tgt.size(), src.size());
    for (std::size_t c = 0; c < src.size(); ++c) {
        const auto& a = src[c];
        CobarMonomial e(n + 1, 0);
        std::copy(a.begin(), a.end(), e.begin() + 1);
        d.add(cobar_index(tgt, e), c, 1);
        for (int i = 1; i <= n; ++i) {
            const int ai = a[i - 1];
            for (int k = 0; k <= ai; ++k) {
                CobarMonomial f(n + 1, 0);
                for (int j = 0; j < i - 1; ++j) f[j] = a[j];
                f[i - 1] = k;
                f[i] = ai - k;
                for (int j = i; j < n; ++j) f[j + 1] = a[j];
                mpz_class coef = binomial(ai, k);
                d.add(cobar_index(tgt, f), c, (i % 2) ? mpz_class(-coef) : coef);
            }
        }
        CobarMonomial g(n + 1, 0);
        std::copy(a.begin(), a.end(), g.begin());
        d.add(cobar_index(tgt, g), c, (n + 1) % 2 ? -1 : 1);
    }
    return d;
}

// A cochain (n, w) with integer coordinates in the strand basis; over F_p the
// coordinates are representatives in [0, p).
struct CohClass {
    int n = 0, w = 0;
    CoeffRing ring = CoeffRing::integers();
    std::vector<mpz_class> cocycle;
};

// All strand differentials d_n: C^n_w -> C^{n+1}_w for n <= n_max, w <= w_max.
class StandardComplex {
public:
    StandardComplex(int n_max, int w_max, CoeffRing ring = CoeffRing::integers())
        : n_max_(n_max), w_max_(w_max), ring_(ring) {
        if (n_max < 0 || w_max < 0) throw ConfigError("negative bounds");
        std::vector<std::pair<int, int>> jobs;
        for (int w = 0; w <= w_max; w += 2)
            for (int n = 0; n <= n_max; ++n) jobs.push_back({n, w});
        std::vector<IntMat> mats(jobs.size());
        parallel_for(jobs.size(), [&](std::size_t j) { mats[j] = cobar_differential(jobs[j].first, jobs[j].second); });
        for (std::size_t j = 0; j < jobs.size(); ++j) diffs_[jobs[j]] = std::move(mats[j]);
        // d o d = 0 in every built strand
        std::vector<std::size_t> checks;
        for (std::size_t j = 0; j < jobs.size(); ++j)
            if (jobs[j].first + 1 <= n_max) checks.push_back(j);
        parallel_for(checks.size(), [&](std::size_t k) {
            auto [n, w] = jobs[checks[k]];
            if (!(diffs_.at({n + 1, w}) * diffs_.at({n, w})).is_zero())
                throw CompositionNonzero("d o d != 0 in strand n=" + std::to_string(n) + " w=" + std::to_string(w));
        });
    }

    int n_max() const { return n_max_; }
    int w_max() const { return w_max_; }
    const CoeffRing& ring() const { return ring_; }

    std::size_t dim(int n, int w) const { return cobar_basis(n, w).size(); }

    // d_n in weight w; d_{-1} is the empty map into C^0.
    IntMat differential(int n, int w) const {
        if (n < 0) return IntMat(dim(0, w), 0);
        auto it = diffs_.find({n, w});
        if (it != diffs_.end()) return it->second;
        return cobar_differential(n, w);
    }

    AbGroup cohomology(int n, int w) const { return cohomology(n, w, ring_); }

    AbGroup cohomology(int n, int w, const CoeffRing& ring) const {
        if (w % 2) return AbGroup();
        return cohomology_over(differential(n - 1, w), differential(n, w), ring);
    }

    // Table of H^n_w for all n <= n_max, even w <= w_max, computed strand-parallel.
    std::map<std::pair<int, int>, AbGroup> table(const CoeffRing& ring) const {
        std::vector<std::pair<int, int>> jobs;
        for (int w = 0; w <= w_max_; w += 2)
            for (int n = 0; n <= n_max_; ++n) jobs.push_back({n, w});
        std::vector<AbGroup> res(jobs.size());
        parallel_for(jobs.size(), [&](std::size_t j) { res[j] = cohomology(jobs[j].first, jobs[j].second, ring); });
        std::map<std::pair<int, int>, AbGroup> out;
        for (std::size_t j = 0; j < jobs.size(); ++j) out[jobs[j]] = res[j];
        return out;
    }

    // --- cochain level -----------------------------------------------------

    std::vector<mpz_class> apply_d(int n, int w, const std::vector<mpz_class>& c) const {
        return differential(n, w).apply(c);
    }

    bool is_cocycle(const CohClass& a) const {
        auto dc = apply_d(a.n, a.w, a.cocycle);
        return all_zero_in(dc, a.ring);
    }

    // a is a coboundary in its ring (Z or F_p).
    bool is_coboundary(const CohClass& a) const {
        IntMat d_in = differential(a.n - 1, a.w);
        if (a.ring.kind == CoeffRing::Kind::Z) return solve_integer(d_in, a.cocycle).has_value();
        if (a.ring.kind != CoeffRing::Kind::Fp) throw RingMismatch("coboundary test over Z or F_p only");
        PrimeField f(a.ring.p);
        auto m = Mat<PrimeField>::from_int(f, d_in);
        std::vector<std::uint64_t> v(a.cocycle.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.from_mpz(a.cocycle[i]);
        return in_span(m, v);
    }

    // Over F_p: find lambda with a - lambda*b a coboundary (b not a coboundary).
    std::optional<std::uint64_t> proportional(const CohClass& a, const CohClass& b) const {
        for (std::uint64_t lambda = 0; lambda < a.ring.p; ++lambda) {
            CohClass diff = a;
            for (std::size_t i = 0; i < diff.cocycle.size(); ++i) diff.cocycle[i] -= b.cocycle[i] * static_cast<unsigned long>(lambda);
            reduce(diff);
            if (is_coboundary(diff)) return lambda;
        }
        return std::nullopt;
    }

    static void reduce(CohClass& a) {
        if (a.ring.kind == CoeffRing::Kind::Z || a.ring.kind == CoeffRing::Kind::Q) return;
        mpz_class m = a.ring.modulus();
        for (auto& c : a.cocycle) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    }

    static bool all_zero_in(const std::vector<mpz_class>& v, const CoeffRing& ring) {
        mpz_class m = ring.modulus();
        for (auto& c : v) {
            if (m == 0 ? c != 0 : !mpz_divisible_p(c.get_mpz_t(), m.get_mpz_t())) return false;
        }
        return true;
    }

    // x^n as a 1-cochain of weight 2n.
    static CohClass power_class(int n, CoeffRing ring) {
        auto basis = cobar_basis(1, 2 * n);
        CohClass c{1, 2 * n, ring, std::vector<mpz_class>(basis.size(), 0)};
        c.cocycle[cobar_index(basis, {n})] = 1;
        return c;
    }

    // d_1(x^n) with the implemented differential.
    static std::vector<mpz_class> phi_class(int n) {
        return cobar_differential(1, 2 * n).apply(power_class(n, CoeffRing::integers()).cocycle);
    }

    // (y - z)^n - y^n + z^n in the basis of C^2_{2n}.
    static std::vector<mpz_class> phi_class_alternative(int n) {
        auto basis = cobar_basis(2, 2 * n);
        std::vector<mpz_class> v(basis.size(), 0);
        for (int k = 0; k <= n; ++k) {
            mpz_class c = binomial(n, k);
            if ((n - k) % 2) c = -c;
            v[cobar_index(basis, {k, n - k})] += c;
        }
        v[cobar_index(basis, {n, 0})] -= 1;
        v[cobar_index(basis, {0, n})] += 1;
        return v;
    }

    // v_{p^i} = [d(x^{p^i}) / p] in H^2(G_a, Z)_{2p^i}.
    static CohClass torsion_class(std::uint64_t p, unsigned i) {
        long q = 1;
        for (unsigned k = 0; k < i; ++k) q *= static_cast<long>(p);
        auto phi = phi_class(static_cast<int>(q));
        CohClass c{2, static_cast<int>(2 * q), CoeffRing::integers(), {}};
        for (auto& x : phi) {
            if (!mpz_divisible_p(x.get_mpz_t(), mpz_class(static_cast<unsigned long>(p)).get_mpz_t()))
                throw LiftNotExact("coboundary of x^{p^i} not divisible by p");
            c.cocycle.push_back(x / static_cast<unsigned long>(p));
        }
        return c;
    }

    // Concatenation product.
    CohClass cup(const CohClass& a, const CohClass& b) const {
        if (!(a.ring == b.ring)) throw RingMismatch("cup of classes over different rings");
        if (!is_cocycle(a) || !is_cocycle(b)) throw NotACocycle("cup needs cocycles");
        auto ba = cobar_basis(a.n, a.w), bb = cobar_basis(b.n, b.w), bt = cobar_basis(a.n + b.n, a.w + b.w);
        CohClass out{a.n + b.n, a.w + b.w, a.ring, std::vector<mpz_class>(bt.size(), 0)};
        for (std::size_t i = 0; i < ba.size(); ++i) {
            if (a.cocycle[i] == 0) continue;
            for (std::size_t j = 0; j < bb.size(); ++j) {
                if (b.cocycle[j] == 0) continue;
                CobarMonomial m = ba[i];
                m.insert(m.end(), bb[j].begin(), bb[j].end());
                out.cocycle[cobar_index(bt, m)] += a.cocycle[i] * b.cocycle[j];
            }
        }
        reduce(out);
        return out;
    }

    // Lift to [0, p), apply the integral d, divide by p, reduce.
    CohClass bockstein(const CohClass& a) const {
        if (a.ring.kind != CoeffRing::Kind::Fp) throw WrongCharacteristic("Bockstein needs F_p coefficients");
        const unsigned long p = a.ring.p;
        std::vector<mpz_class> lift = a.cocycle;
        for (auto& c : lift) mpz_fdiv_r_ui(c.get_mpz_t(), c.get_mpz_t(), p);
        auto dl = apply_d(a.n, a.w, lift);
        CohClass out{a.n + 1, a.w, a.ring, {}};
        for (auto& c : dl) {
            if (!mpz_divisible_ui_p(c.get_mpz_t(), p)) throw LiftNotExact("d(lift) not divisible by p");
            out.cocycle.push_back(c / p);
        }
        reduce(out);
        return out;
    }

    // Generator of the Z/t summand of the torsion of coker(d_{n-1}) as an integral cocycle.
    std::vector<CohClass> torsion_generators(int n, int w) const {
        IntMat d_in = differential(n - 1, w);
        auto snf = smith_normal_form(d_in, true);
        std::vector<CohClass> out;
        for (std::size_t i = 0; i < snf.rank(); ++i) {
            if (snf.diagonal[i] == 1) continue;
            CohClass c{n, w, CoeffRing::integers(), std::vector<mpz_class>(d_in.rows(), 0)};
            for (auto& [r, v] : snf.u_inv->column(i)) c.cocycle[r] = v;
            out.push_back(std::move(c));
        }
        return out;
    }

private:
    int n_max_, w_max_;
    CoeffRing ring_;
    std::map<std::pair<int, int>, IntMat> diffs_;
};

// Counts of Z/p summands in H^n(G_a, Z)_w, w <= w_max.
struct CensusRow {
    int w;
    AbGroup group;
    std::size_t count;
};

inline std::vector<CensusRow> torsion_census(std::uint64_t p, int n, int w_max) {
    StandardComplex sc(n, w_max);
    auto tab = sc.table(CoeffRing::integers());
    std::vector<CensusRow> rows;
    for (int w = 0; w <= w_max; w += 2) {
        const AbGroup& g = tab.at({n, w});
        rows.push_back({w, g, g.count_primary(mpz_class(static_cast<unsigned long>(p)), 1)});
    }
    return rows;
}

// Bigraded Hilbert series of a free graded-commutative algebra on generators of
// bidegree (n, w), exterior or polynomial, truncated to n <= n_max, w <= w_max.
struct AlgebraGenerator {
    std::string name;
    int n, w;
    bool exterior;
};

inline std::map<std::pair<int, int>, long> hilbert_series(const std::vector<AlgebraGenerator>& gens, int n_max,
                                                          int w_max) {
    std::map<std::pair<int, int>, long> h;
    h[{0, 0}] = 1;
    for (auto& g : gens) {
        std::map<std::pair<int, int>, long> next;
        for (auto& [bd, c] : h) {
            for (int k = 0;; ++k) {
                if (g.exterior && k > 1) break;
                int n = bd.first + k * g.n, w = bd.second + k * g.w;
                if (n > n_max || w > w_max) break;
                next[{n, w}] += c;
                if (g.n == 0 && g.w == 0) break;
            }
        }
        h = std::move(next);
    }
    return h;
}

// Generators of H^*((G_a)_{F_p}, F_p) in range: w_{p^i} in (1, 2p^i), and for odd p
// also vbar_{p^i} (i >= 1) in (2, 2p^i).
inline std::vector<AlgebraGenerator> fp_cohomology_generators(std::uint64_t p, int n_max, int w_max) {
    std::vector<AlgebraGenerator> gens;
    for (long q = 1; 2 * q <= w_max; q *= static_cast<long>(p)) {
        if (n_max >= 1) gens.push_back({"w" + std::to_string(q), 1, static_cast<int>(2 * q), p != 2});
        if (p != 2 && q > 1 && n_max >= 2) gens.push_back({"v" + std::to_string(q), 2, static_cast<int>(2 * q), false});
    }
    return gens;
}

// Regraded table: sum_i H^i(G_a, Z)_{N - i}. Pure bookkeeping over a computed table.
inline std::map<int, AbGroup> regrade_total(const std::map<std::pair<int, int>, AbGroup>& tab, int n_total_max) {
    std::map<int, AbGroup> out;
    for (int N = 0; N <= n_total_max; ++N) {
        AbGroup acc;
        for (auto& [key, g] : tab) {
            auto [i, w] = key;
            if (i + w != N) continue;
            acc.rank += g.rank;
            acc.torsion.insert(acc.torsion.end(), g.torsion.begin(), g.torsion.end());
        }
        acc.normalize();
        out[N] = acc;
    }
    return out;
}

}  // namespace hodgelab
