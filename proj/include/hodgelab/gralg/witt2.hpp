#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <type_traits>
#include <utility>

#include "hodgelab/gralg/multipoly.hpp"
#include "hodgelab/gralg/pd.hpp"

namespace hodgelab {

// Length-2 Witt vectors over a commutative ring T. T must provide +, -, *,
// and scaled(mpq) (or be an integer type); p is fixed per instance.
template <class T>
struct Witt2 {
    T a0, a1;
    std::uint64_t p;

    static T scale(const T& x, long s) {
        if constexpr (std::is_same_v<T, mpz_class>) {
            return x * s;
        } else {
            return x.scaled(s);
        }
    }
    static T power(const T& x, unsigned n) {
        if constexpr (std::is_same_v<T, mpz_class>) {
            mpz_class r;
            mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), n);
            return r;
        } else {
            return x.pow(n);
        }
    }

    // S_1 = a1 + b1 - sum_{0<i<p} binom(p,i)/p a0^i b0^{p-i}
    friend Witt2 operator+(const Witt2& a, const Witt2& b) {
        T s = a.a1 + b.a1;
        for (std::uint64_t i = 1; i < a.p; ++i) {
            mpz_class c = binomial(static_cast<long>(a.p), static_cast<long>(i)) / static_cast<unsigned long>(a.p);
            s = s - scale(power(a.a0, i) * power(b.a0, a.p - i), c.get_si());
        }
        return {a.a0 + b.a0, s, a.p};
    }

    // (a0 b0, a0^p b1 + b0^p a1 + p a1 b1)
    friend Witt2 operator*(const Witt2& a, const Witt2& b) {
        T m1 = power(a.a0, a.p) * b.a1 + power(b.a0, a.p) * a.a1 + scale(a.a1 * b.a1, static_cast<long>(a.p));
        return {a.a0 * b.a0, m1, a.p};
    }

    // (a0, a0^p + p a1)
    std::pair<T, T> ghost() const { return {a0, power(a0, p) + scale(a1, static_cast<long>(p))}; }
};

// Identification W_2(F_p[x^{1/p^inf}]) = (Z/p^2)[x^{1/p^inf}]:
// (a0, a1) -> lift(a0^{1/p})^p + p lift(a1^{1/p}).
// The source polynomials live over F_p at some depth; the target needs one more level of roots.
inline MultiPoly teichmuller_embed(const Witt2<MultiPoly>& w, PolyContextPtr target) {
    const long p = static_cast<long>(w.p);
    auto root_lift = [&](const MultiPoly& f) {
        MultiPoly out(target);
        const long scale = target->denominator() / f.context()->denominator();
        for (auto& [e, c] : f.terms()) {
            MultiPoly::Exponent g = e;
            for (auto& x : g) {
                if ((x * scale) % p != 0) throw TruncationTooSmall("p-th root needs more depth");
                x = x * scale / p;
            }
            out.add_term(g, c);
        }
        return out;
    };
    return root_lift(w.a0).pow(static_cast<unsigned>(p)) + root_lift(w.a1).scaled(p);
}

}  // namespace hodgelab
