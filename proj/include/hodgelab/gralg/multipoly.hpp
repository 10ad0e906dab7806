#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hodgelab/error.hpp"
#include "hodgelab/gralg/coeff_ring.hpp"

namespace hodgelab {

// Variables of a graded (Laurent) polynomial ring. Exponents are stored as
// numerators over exp_prime^depth so that x^{1/p^m} is representable.
struct PolyContext {
    CoeffRing ring;
    std::vector<std::string> names;
    std::vector<long> weights;
    std::vector<bool> laurent;
    std::uint64_t exp_prime = 1;
    unsigned depth = 0;
    std::optional<long> max_weight;  // in numerator units

    long denominator() const {
        long d = 1;
        for (unsigned i = 0; i < depth; ++i) d *= static_cast<long>(exp_prime);
        return d;
    }
    std::size_t nvars() const { return names.size(); }

    static std::shared_ptr<const PolyContext> make(CoeffRing ring, std::vector<std::string> names,
                                                   std::vector<long> weights = {}) {
        auto c = std::make_shared<PolyContext>();
        c->ring = ring;
        c->names = std::move(names);
        c->weights = weights.empty() ? std::vector<long>(c->names.size(), 1) : std::move(weights);
        c->laurent.assign(c->names.size(), false);
        if (c->weights.size() != c->names.size()) throw DimensionMismatch("weights vs names");
        return c;
    }
};

using PolyContextPtr = std::shared_ptr<const PolyContext>;

class MultiPoly {
public:
    using Exponent = std::vector<long>;
    using Terms = std::map<Exponent, mpq_class>;

    explicit MultiPoly(PolyContextPtr ctx) : ctx_(std::move(ctx)) {}

    static MultiPoly constant(PolyContextPtr ctx, const mpq_class& c) {
        MultiPoly f(ctx);
        f.add_term(Exponent(ctx->nvars(), 0), c);
        return f;
    }
    static MultiPoly var(PolyContextPtr ctx, std::size_t i) {
        Exponent e(ctx->nvars(), 0);
        e.at(i) = ctx->denominator();
        MultiPoly f(ctx);
        f.add_term(e, 1);
        return f;
    }
    // exponent given in numerator units
    static MultiPoly monomial(PolyContextPtr ctx, Exponent e, const mpq_class& c = 1) {
        MultiPoly f(ctx);
        f.add_term(std::move(e), c);
        return f;
    }

    const PolyContextPtr& context() const { return ctx_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    long weight(const Exponent& e) const {
        long w = 0;
        for (std::size_t i = 0; i < e.size(); ++i) w += ctx_->weights[i] * e[i];
        return w;
    }

    // Weight if homogeneous.
    std::optional<long> homogeneous_weight() const {
        std::optional<long> w;
        for (auto& [e, c] : terms_) {
            long we = weight(e);
            if (w && *w != we) return std::nullopt;
            w = we;
        }
        return w;
    }

    void add_term(Exponent e, const mpq_class& c) {
        if (e.size() != ctx_->nvars()) throw DimensionMismatch("exponent length");
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] < 0 && !ctx_->laurent[i])
                throw RingMismatch("negative exponent of non-inverted variable " + ctx_->names[i]);
        if (ctx_->max_weight && weight(e) > *ctx_->max_weight)
            throw WeightOverflow("term of weight " + std::to_string(weight(e)) + " exceeds bound " +
                                 std::to_string(*ctx_->max_weight));
        mpq_class v = ctx_->ring.normalize(c);
        if (v == 0) return;
        auto [it, inserted] = terms_.try_emplace(std::move(e), v);
        if (!inserted) {
            it->second = ctx_->ring.normalize(it->second + v);
            if (it->second == 0) terms_.erase(it);
        }
    }

    MultiPoly& operator+=(const MultiPoly& g) {
        same_ring(g);
        for (auto& [e, c] : g.terms_) add_term(e, c);
        return *this;
    }
    MultiPoly& operator-=(const MultiPoly& g) {
        same_ring(g);
        for (auto& [e, c] : g.terms_) add_term(e, -c);
        return *this;
    }
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator-(const MultiPoly& a) { return a.scaled(-1); }

    MultiPoly scaled(const mpq_class& s) const {
        MultiPoly out(ctx_);
        for (auto& [e, c] : terms_) out.add_term(e, c * s);
        return out;
    }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        a.same_ring(b);
        MultiPoly out(a.ctx_);
        Exponent e(a.ctx_->nvars());
        for (auto& [ea, ca] : a.terms_)
            for (auto& [eb, cb] : b.terms_) {
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                out.add_term(e, ca * cb);
            }
        return out;
    }

    MultiPoly pow(unsigned n) const {
        MultiPoly r = constant(ctx_, 1), base = *this;
        while (n) {
            if (n & 1) r = r * base;
            n >>= 1;
            if (n) base = base * base;
        }
        return r;
    }

    // Single monomial with coefficient +-1, if that is what this is.
    std::optional<std::pair<Exponent, mpq_class>> as_unit_monomial() const {
        if (terms_.size() != 1) return std::nullopt;
        auto& [e, c] = *terms_.begin();
        if (c != 1 && c != -1 && !(ctx_->ring.has_char_p() && ctx_->ring.normalize(c + 1) == 0)) return std::nullopt;
        return std::make_pair(e, c);
    }

    // Ring map sending variable i to images[i] (all in one target context).
    // Fractional or negative powers are allowed only for unit-monomial images.
    MultiPoly substitute(const std::vector<MultiPoly>& images) const {
        if (images.size() != ctx_->nvars()) throw DimensionMismatch("substitute: image count");
        if (images.empty()) throw DimensionMismatch("substitute: no variables");
        const PolyContextPtr& tgt = images[0].context();
        const long den = ctx_->denominator();
        MultiPoly out(tgt);
        for (auto& [e, c] : terms_) {
            MultiPoly term = constant(tgt, c);
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (e[i] > 0 && e[i] % den == 0) {
                    term = term * images[i].pow(static_cast<unsigned>(e[i] / den));
                    continue;
                }
                auto mono = images[i].as_unit_monomial();
                if (!mono) throw RingMismatch("fractional or negative power of a non-monomial image");
                auto [me, mc] = *mono;
                Exponent scaled(me.size());
                for (std::size_t k = 0; k < me.size(); ++k) {
                    // me[k] is over tgt denominator; raise to e[i]/den
                    long num = me[k] * e[i];
                    if (num % den != 0) throw RingMismatch("exponent leaves the allowed denominators");
                    scaled[k] = num / den;
                }
                mpq_class sign = 1;
                if (mc != 1) {
                    if (e[i] % den != 0) throw RingMismatch("fractional power of -1");
                    if ((e[i] / den) % 2 != 0) sign = -1;
                }
                term = term * monomial(tgt, scaled, sign);
            }
            out += term;
        }
        return out;
    }

    // Coefficientwise Frobenius of the base: the identity on F_p and on W_2(F_p) = Z/p^2.
    MultiPoly frobenius_twist() const {
        if (!ctx_->ring.has_char_p()) throw WrongCharacteristic("Frobenius twist needs characteristic p");
        return *this;
    }

    // x -> x^p on variables.
    MultiPoly relative_frobenius() const {
        if (!ctx_->ring.has_char_p()) throw WrongCharacteristic("relative Frobenius needs characteristic p");
        MultiPoly out(ctx_);
        const long p = static_cast<long>(ctx_->ring.p);
        for (auto& [e, c] : terms_) {
            Exponent f = e;
            for (auto& x : f) x *= p;
            out.add_term(f, c);
        }
        return out;
    }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.terms_ == b.terms_; }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        const long den = ctx_->denominator();
        for (auto& [e, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            bool unit = (c == 1);
            bool has_var = false;
            for (auto x : e)
                if (x) has_var = true;
            if (!unit || !has_var) os << c;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (!e[i]) continue;
                if (!unit || has_var) os << (unit && i == first_var(e) ? "" : "*");
                os << ctx_->names[i];
                if (e[i] != den) {
                    mpq_class q(e[i], den);
                    q.canonicalize();
                    os << "^" << (q.get_den() == 1 ? q.get_num().get_str() : "(" + q.get_str() + ")");
                }
            }
        }
        return os.str();
    }

private:
    static std::size_t first_var(const Exponent& e) {
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i]) return i;
        return e.size();
    }
    void same_ring(const MultiPoly& g) const {
        if (ctx_ != g.ctx_ && !(ctx_->ring == g.ctx_->ring && ctx_->names == g.ctx_->names))
            throw RingMismatch("polynomials from different rings");
    }

    PolyContextPtr ctx_;
    Terms terms_;
};

}  // namespace hodgelab
