#pragma once

#include <gmpxx.h>

#include <bit>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hodgelab/error.hpp"
#include "hodgelab/gralg/pd.hpp"

namespace hodgelab {

// Forms on a PD algebra D: sums of (PD element) dx_S, S a subset of the variables.
struct PDFormKey {
    PDKey key;
    unsigned mask = 0;
    auto operator<=>(const PDFormKey&) const = default;
};

class PDForm {
public:
    using Terms = std::map<PDFormKey, mpz_class>;
    explicit PDForm(PDAlgebraPtr alg) : alg_(std::move(alg)) {}

    static PDForm from(const PDElement& f, unsigned mask = 0) {
        PDForm out(f.algebra());
        for (auto& [k, c] : f.terms()) out.add({k, mask}, c);
        return out;
    }

    const PDAlgebraPtr& algebra() const { return alg_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const PDFormKey& k, const mpz_class& c) {
        mpz_class v = alg_->reduce(c);
        if (v == 0) return;
        auto [it, ins] = terms_.try_emplace(k, v);
        if (!ins) {
            it->second = alg_->reduce(it->second + v);
            if (it->second == 0) terms_.erase(it);
        }
    }
    // adds f dx_mask
    void add(const PDElement& f, unsigned mask, const mpz_class& c = 1) {
        for (auto& [k, x] : f.terms()) add({k, mask}, x * c);
    }

    PDForm& operator+=(const PDForm& o) {
        for (auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    PDForm& operator-=(const PDForm& o) {
        for (auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    friend PDForm operator+(PDForm a, const PDForm& b) { return a += b; }
    friend PDForm operator-(PDForm a, const PDForm& b) { return a -= b; }
    friend bool operator==(const PDForm& a, const PDForm& b) { return a.terms_ == b.terms_; }

    // d(x^e prod s_g^{[n_g]} dx_S); d s_g = dx_lead - dx_elim.
    PDForm d() const {
        PDForm out(alg_);
        const auto& spec = alg_->spec();
        const long den = alg_->den();
        for (auto& [fk, c] : terms_) {
            const auto& k = fk.key;
            auto put = [&](PDKey nk, unsigned var, const mpz_class& coef) {
                if (fk.mask >> var & 1u) return;
                int sign = std::popcount(fk.mask & ((1u << var) - 1)) % 2 ? -1 : 1;
                out.add(PDElement::basis(alg_, std::move(nk), coef * sign), fk.mask | (1u << var));
            };
            for (std::size_t i = 0; i < k.exp.size(); ++i) {
                if (k.exp[i] == 0) continue;
                if (k.exp[i] % den) throw UnsupportedBase("de Rham differential of fractional powers");
                PDKey nk = k;
                nk.exp[i] -= den;
                put(std::move(nk), static_cast<unsigned>(i), c * (k.exp[i] / den));
            }
            for (std::size_t g = 0; g < k.br.size(); ++g) {
                if (k.br[g] == 0) continue;
                PDKey nk = k;
                nk.br[g] -= 1;
                const auto& gen = spec.gens[g];
                if (gen.lead >= 0) put(nk, static_cast<unsigned>(gen.lead), c);
                put(nk, static_cast<unsigned>(gen.elim), -c);
            }
        }
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (auto& [k, c] : terms_) {
            PDElement e = PDElement::basis(alg_, k.key, c);
            s += (first ? "" : " + ") + std::string("(") + e.str() + ")";
            for (unsigned i = 0; i < 32; ++i)
                if (k.mask >> i & 1u) s += "*d" + alg_->spec().names[i];
            first = false;
        }
        return s;
    }

private:
    PDAlgebraPtr alg_;
    Terms terms_;
};

// Coface delta_j: D(i) -> D(i+1), skipping the j-th coordinate. Both algebras are
// envelopes of the diagonal with generators x_1 - x_k.
inline PDElement coface(const PDElement& f, int j, const PDAlgebraPtr& target) {
    const auto& src = f.algebra();
    const int i = static_cast<int>(src->nvars());
    auto shift = [&](int k) { return static_cast<std::size_t>(k + (k >= j ? 1 : 0)); };
    std::vector<PDElement> simg;
    for (int g = 1; g < i; ++g) simg.push_back(PDElement::var(target, shift(0)) - PDElement::var(target, shift(g)));
    PDElement out(target);
    for (auto& [k, c] : f.terms()) {
        PDElement t = PDElement::one(target).scaled(c);
        for (int v = 0; v < i; ++v)
            if (k.exp[v]) t = t * PDElement::var_power(target, shift(v), k.exp[v]);
        for (std::size_t g = 0; g < k.br.size(); ++g)
            if (k.br[g]) t = t * simg[g].divided_power(k.br[g]);
        out += t;
    }
    return out;
}

inline unsigned coface_mask(unsigned mask, int j) {
    unsigned low = mask & ((1u << j) - 1), high = mask >> j;
    return low | (high << (j + 1));
}

// Cech differential with d f = f(x_1) - f(x_2) on level 1: sum_j (-1)^{j+1} delta_j.
inline PDForm cech_d(const PDForm& f, const PDAlgebraPtr& target) {
    const int i = static_cast<int>(f.algebra()->nvars());
    PDForm out(target);
    for (int j = 0; j <= i; ++j) {
        const long sign = j % 2 ? 1 : -1;
        for (auto& [k, c] : f.terms()) {
            PDElement img = coface(PDElement::basis(f.algebra(), k.key, c), j, target);
            out.add(img, coface_mask(k.mask, j), sign);
        }
    }
    return out;
}

// Truncation of a PD element or form to Fil_r^conj: sum_g floor(n_g / p) <= r.
inline bool in_conj_fil(const PDForm& f, long r) {
    const long p = static_cast<long>(f.algebra()->p());
    for (auto& [k, c] : f.terms()) {
        long t = 0;
        for (auto n : k.key.br) t += n / p;
        if (t > r) return false;
    }
    return true;
}

}  // namespace hodgelab
