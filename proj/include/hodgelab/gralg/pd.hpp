#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <functional>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hodgelab/error.hpp"

namespace hodgelab {

// Generator s = x_lead - x_elim of the PD ideal, or s = x_elim when lead < 0.
struct PDGenerator {
    int lead = -1;
    int elim = 0;
};

// Divided power envelope of the ideal (s_g) in a polynomial ring over Z, Z/p or
// Z/p^2 whose variables may carry p-power roots up to `depth`. Elements are kept
// in the normal basis x^e * prod s_g^{[n_g]} with the exponent of every
// eliminated variable in [0, 1).
class PDAlgebra : public std::enable_shared_from_this<PDAlgebra> {
public:
    struct Spec {
        std::uint64_t p = 2;
        unsigned depth = 0;
        std::vector<std::string> names;
        std::vector<long> weights;  // per variable, integral weights
        std::vector<PDGenerator> gens;
        mpz_class modulus = 0;  // 0 for Z
        std::optional<long> max_weight;  // numerator units, see weight()
    };

    static std::shared_ptr<const PDAlgebra> make(Spec s) {
        auto a = std::shared_ptr<PDAlgebra>(new PDAlgebra(std::move(s)));
        return a;
    }

    const Spec& spec() const { return spec_; }
    std::size_t nvars() const { return spec_.names.size(); }
    std::size_t ngens() const { return spec_.gens.size(); }
    long den() const { return den_; }
    std::uint64_t p() const { return spec_.p; }
    const mpz_class& modulus() const { return spec_.modulus; }

    // Same variables and generators, different coefficients.
    std::shared_ptr<const PDAlgebra> with_modulus(const mpz_class& m) const {
        Spec s = spec_;
        s.modulus = m;
        return make(std::move(s));
    }
    std::shared_ptr<const PDAlgebra> with_depth(unsigned depth) const {
        Spec s = spec_;
        s.depth = depth;
        if (s.max_weight) {
            long scale = 1;
            for (unsigned i = spec_.depth; i < depth; ++i) scale *= static_cast<long>(spec_.p);
            s.max_weight = *s.max_weight * scale;
        }
        return make(std::move(s));
    }

    long gen_weight(std::size_t g) const { return spec_.weights[spec_.gens[g].elim] * den_; }

    mpz_class reduce(const mpz_class& c) const {
        if (spec_.modulus == 0) return c;
        mpz_class r;
        mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), spec_.modulus.get_mpz_t());
        return r;
    }

private:
    explicit PDAlgebra(Spec s) : spec_(std::move(s)) {
        den_ = 1;
        for (unsigned i = 0; i < spec_.depth; ++i) den_ *= static_cast<long>(spec_.p);
        if (spec_.weights.empty()) spec_.weights.assign(spec_.names.size(), 1);
        if (spec_.weights.size() != spec_.names.size()) throw DimensionMismatch("PD weights");
        std::vector<bool> seen(spec_.names.size(), false);
        for (auto& g : spec_.gens) {
            if (g.elim < 0 || static_cast<std::size_t>(g.elim) >= spec_.names.size())
                throw DimensionMismatch("PD generator variable");
            if (seen[g.elim]) throw UnsupportedBase("two generators eliminate the same variable");
            seen[g.elim] = true;
            if (g.lead >= 0 && spec_.weights[g.lead] != spec_.weights[g.elim])
                throw UnsupportedBase("inhomogeneous PD generator");
            if (g.lead >= 0 && g.lead >= g.elim)
                throw UnsupportedBase("generator must eliminate the later variable");
        }
    }

    Spec spec_;
    long den_ = 1;
};

using PDAlgebraPtr = std::shared_ptr<const PDAlgebra>;

struct PDKey {
    std::vector<long> exp;  // numerators over p^depth
    std::vector<long> br;   // divided power exponents per generator
    auto operator<=>(const PDKey&) const = default;
};

inline mpz_class binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

inline mpz_class factorial(long n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

class PDElement {
public:
    using Terms = std::map<PDKey, mpz_class>;

    explicit PDElement(PDAlgebraPtr alg) : alg_(std::move(alg)) {}

    static PDElement one(PDAlgebraPtr alg) { return basis(alg, PDKey{std::vector<long>(alg->nvars(), 0), std::vector<long>(alg->ngens(), 0)}); }

    // Adds c * key after normalizing key.
    static PDElement basis(PDAlgebraPtr alg, PDKey key, const mpz_class& c = 1) {
        PDElement e(alg);
        e.accumulate(std::move(key), c);
        return e;
    }
    // x_i^{num / p^depth}
    static PDElement var_power(PDAlgebraPtr alg, std::size_t i, long num) {
        PDKey k{std::vector<long>(alg->nvars(), 0), std::vector<long>(alg->ngens(), 0)};
        k.exp.at(i) = num;
        return basis(alg, k);
    }
    static PDElement var(PDAlgebraPtr alg, std::size_t i) { return var_power(alg, i, alg->den()); }
    // s_g^{[n]}
    static PDElement gen_power(PDAlgebraPtr alg, std::size_t g, long n) {
        PDKey k{std::vector<long>(alg->nvars(), 0), std::vector<long>(alg->ngens(), 0)};
        k.br.at(g) = n;
        return basis(alg, k);
    }

    const PDAlgebraPtr& algebra() const { return alg_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    long weight(const PDKey& k) const {
        long w = 0;
        for (std::size_t i = 0; i < k.exp.size(); ++i) w += alg_->spec().weights[i] * k.exp[i];
        for (std::size_t g = 0; g < k.br.size(); ++g) w += alg_->gen_weight(g) * k.br[g];
        return w;
    }

    // Adds c * x^e prod s^{[n]}, rewriting eliminated-variable exponents >= 1.
    void accumulate(PDKey k, mpz_class c) {
        c = alg_->reduce(c);
        if (c == 0) return;
        const long den = alg_->den();
        const auto& gens = alg_->spec().gens;
        for (std::size_t g = 0; g < gens.size(); ++g) {
            const long v = gens[g].elim;
            if (k.exp[v] < den) continue;
            const long j = k.exp[v] / den;
            k.exp[v] -= j * den;
            const long n0 = k.br[g];
            if (gens[g].lead < 0) {
                // x_v^j s^{[n0]} = s^j s^{[n0]} = (n0+j)!/n0! s^{[n0+j]}
                k.br[g] = n0 + j;
                accumulate(std::move(k), c * factorial(n0 + j) / factorial(n0));
                return;
            }
            // x_v = x_lead - s
            for (long i = 0; i <= j; ++i) {
                PDKey k2 = k;
                k2.exp[gens[g].lead] += (j - i) * den;
                k2.br[g] = n0 + i;
                mpz_class coef = c * binomial(j, i) * factorial(n0 + i) / factorial(n0);
                if (i % 2) coef = -coef;
                accumulate(std::move(k2), coef);
            }
            return;
        }
        for (std::size_t i = 0; i < k.exp.size(); ++i)
            if (k.exp[i] < 0) throw RingMismatch("negative exponent in PD algebra");
        if (alg_->spec().max_weight && weight(k) > *alg_->spec().max_weight)
            throw WeightOverflow("PD term of weight " + std::to_string(weight(k)) + " beyond bound");
        auto [it, inserted] = terms_.try_emplace(std::move(k), c);
        if (!inserted) {
            it->second = alg_->reduce(it->second + c);
            if (it->second == 0) terms_.erase(it);
        }
    }

    PDElement& operator+=(const PDElement& o) {
        check(o);
        for (auto& [k, c] : o.terms_) add_normal(k, c);
        return *this;
    }
    PDElement& operator-=(const PDElement& o) {
        check(o);
        for (auto& [k, c] : o.terms_) add_normal(k, -c);
        return *this;
    }
    friend PDElement operator+(PDElement a, const PDElement& b) { return a += b; }
    friend PDElement operator-(PDElement a, const PDElement& b) { return a -= b; }
    PDElement scaled(const mpz_class& s) const {
        PDElement out(alg_);
        for (auto& [k, c] : terms_) out.add_normal(k, c * s);
        return out;
    }

    friend PDElement operator*(const PDElement& a, const PDElement& b) {
        a.check(b);
        PDElement out(a.alg_);
        for (auto& [ka, ca] : a.terms_)
            for (auto& [kb, cb] : b.terms_) {
                PDKey k{ka.exp, ka.br};
                mpz_class c = ca * cb;
                for (std::size_t i = 0; i < k.exp.size(); ++i) k.exp[i] += kb.exp[i];
                for (std::size_t g = 0; g < k.br.size(); ++g) {
                    c *= binomial(ka.br[g] + kb.br[g], ka.br[g]);
                    k.br[g] += kb.br[g];
                }
                out.accumulate(std::move(k), c);
            }
        return out;
    }

    PDElement pow(unsigned n) const {
        PDElement r = one(alg_), base = *this;
        while (n) {
            if (n & 1) r = r * base;
            n >>= 1;
            if (n) base = base * base;
        }
        return r;
    }

    // gamma_n on an element of the PD ideal: every term must carry a bracket.
    PDElement divided_power(long n) const {
        if (n == 0) return one(alg_);
        PDElement out(alg_);
        std::vector<std::pair<PDKey, mpz_class>> t(terms_.begin(), terms_.end());
        // gamma_n(sum) = sum over compositions of n of prod gamma_{a_i}(t_i)
        std::vector<long> parts(t.size(), 0);
        auto term_gamma = [&](const PDKey& k, const mpz_class& c, long a) {
            if (a == 0) return one(alg_);
            std::size_t g0 = k.br.size();
            for (std::size_t g = 0; g < k.br.size(); ++g)
                if (k.br[g] > 0) {
                    g0 = g;
                    break;
                }
            if (g0 == k.br.size()) throw RingMismatch("divided power of an element outside the PD ideal");
            PDKey r{k.exp, k.br};
            mpz_class coef;
            mpz_pow_ui(coef.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(a));
            for (auto& x : r.exp) x *= a;
            for (std::size_t g = 0; g < r.br.size(); ++g) {
                long kk = k.br[g];
                if (kk == 0) continue;
                // (s^{[k]})^a = (ak)!/(k!)^a s^{[ak]}; gamma_a(s^{[k]}) = that / a!
                mpz_class kf = factorial(kk), kfa;
                mpz_pow_ui(kfa.get_mpz_t(), kf.get_mpz_t(), static_cast<unsigned long>(a));
                coef *= factorial(a * kk);
                coef /= kfa;
                if (g == g0) coef /= factorial(a);
                r.br[g] = a * kk;
            }
            return basis(alg_, std::move(r), coef);
        };
        std::vector<std::vector<PDElement>> cache(t.size());
        for (std::size_t i = 0; i < t.size(); ++i)
            for (long a = 0; a <= n; ++a) cache[i].push_back(term_gamma(t[i].first, t[i].second, a));
        // enumerate compositions
        std::function<void(std::size_t, long, PDElement)> rec = [&](std::size_t i, long left, PDElement acc) {
            if (i + 1 == t.size()) {
                out += acc * cache[i][left];
                return;
            }
            for (long a = 0; a <= left; ++a) rec(i + 1, left - a, acc * cache[i][a]);
        };
        if (!t.empty()) rec(0, n, one(alg_));
        return out;
    }

    // Coefficients reread in another modulus (reduction, or Z lift of representatives).
    PDElement change_ring(PDAlgebraPtr target) const {
        PDElement out(target);
        for (auto& [k, c] : terms_) out.accumulate(k, c);
        return out;
    }

    // Every coefficient divisible by d; returns the quotient (lifting through Z).
    std::optional<PDElement> divide_exact(const mpz_class& d, PDAlgebraPtr target) const {
        PDElement out(target);
        for (auto& [k, c] : terms_) {
            if (!mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t())) return std::nullopt;
            out.accumulate(k, c / d);
        }
        return out;
    }

    std::optional<long> homogeneous_weight() const {
        std::optional<long> w;
        for (auto& [k, c] : terms_) {
            long x = weight(k);
            if (w && *w != x) return std::nullopt;
            w = x;
        }
        return w;
    }

    friend bool operator==(const PDElement& a, const PDElement& b) { return a.terms_ == b.terms_; }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        const auto& s = alg_->spec();
        for (auto& [k, c] : terms_) {
            os << (first ? "" : " + ") << c;
            first = false;
            for (std::size_t i = 0; i < k.exp.size(); ++i) {
                if (!k.exp[i]) continue;
                os << "*" << s.names[i];
                if (k.exp[i] != alg_->den()) {
                    mpq_class q(k.exp[i], alg_->den());
                    q.canonicalize();
                    os << "^" << (q.get_den() == 1 ? q.get_num().get_str() : "(" + q.get_str() + ")");
                }
            }
            for (std::size_t g = 0; g < k.br.size(); ++g) {
                if (!k.br[g]) continue;
                const auto& gen = s.gens[g];
                os << "*";
                if (gen.lead < 0)
                    os << s.names[gen.elim];
                else
                    os << "(" << s.names[gen.lead] << "-" << s.names[gen.elim] << ")";
                os << "^[" << k.br[g] << "]";
            }
        }
        return os.str();
    }

private:
    void add_normal(const PDKey& k, const mpz_class& c) {
        mpz_class v = alg_->reduce(c);
        if (v == 0) return;
        auto [it, inserted] = terms_.try_emplace(k, v);
        if (!inserted) {
            it->second = alg_->reduce(it->second + v);
            if (it->second == 0) terms_.erase(it);
        }
    }
    void check(const PDElement& o) const {
        if (alg_ != o.alg_) throw RingMismatch("PD elements from different algebras");
    }

    PDAlgebraPtr alg_;
    Terms terms_;
};

// Normal basis keys of a PD algebra in one weight (numerator units), optionally
// restricted to a divided power degree range [min_br, max_br] in total.
inline std::vector<PDKey> pd_strand_basis(const PDAlgebra& alg, long weight, long max_total_br = -1) {
    const auto& s = alg.spec();
    const std::size_t nv = alg.nvars(), ng = alg.ngens();
    std::vector<bool> is_elim(nv, false);
    for (auto& g : s.gens) is_elim[g.elim] = true;
    std::vector<PDKey> out;
    PDKey k{std::vector<long>(nv, 0), std::vector<long>(ng, 0)};
    // enumerate brackets, then exponents
    std::function<void(std::size_t, long)> rec_exp = [&](std::size_t i, long left) {
        if (i == nv) {
            if (left == 0) out.push_back(k);
            return;
        }
        const long w = s.weights[i];
        if (w <= 0) throw UnsupportedBase("PD strand enumeration needs positive weights");
        long maxe = left / w;
        if (is_elim[i]) maxe = std::min(maxe, alg.den() - 1);
        for (long e = 0; e <= maxe; ++e) {
            k.exp[i] = e;
            rec_exp(i + 1, left - e * w);
        }
        k.exp[i] = 0;
    };
    std::function<void(std::size_t, long, long)> rec_br = [&](std::size_t g, long left, long total) {
        if (g == ng) {
            rec_exp(0, left);
            return;
        }
        const long gw = alg.gen_weight(g);
        for (long n = 0; n * gw <= left; ++n) {
            if (max_total_br >= 0 && total + n > max_total_br) break;
            k.br[g] = n;
            rec_br(g + 1, left - n * gw, total + n);
        }
        k.br[g] = 0;
    };
    rec_br(0, weight, 0);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace hodgelab
