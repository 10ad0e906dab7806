#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "hodgelab/error.hpp"

namespace hodgelab {

struct CoeffRing {
    enum class Kind { Z, Q, Fp, ZmodP2 };
    Kind kind = Kind::Z;
    std::uint64_t p = 0;

    static CoeffRing integers() { return {Kind::Z, 0}; }
    static CoeffRing rationals() { return {Kind::Q, 0}; }
    static CoeffRing fp(std::uint64_t p) { return {Kind::Fp, p}; }
    static CoeffRing zmod_p2(std::uint64_t p) { return {Kind::ZmodP2, p}; }

    // "Z", "Q", "F3", "Fp" with p given separately, "Z/9"
    static CoeffRing parse(const std::string& s, std::uint64_t p = 0) {
        if (s == "Z") return integers();
        if (s == "Q") return rationals();
        if (s == "Fp" || s == "F_p") {
            if (p < 2) throw ConfigError("ring Fp needs --p");
            return fp(p);
        }
        if (s == "Zp2" || s == "Z/p2") {
            if (p < 2) throw ConfigError("ring Z/p^2 needs --p");
            return zmod_p2(p);
        }
        if (s.size() > 1 && s[0] == 'F') return fp(std::stoull(s.substr(1)));
        throw ConfigError("unknown ring '" + s + "'");
    }

    bool is_field() const { return kind == Kind::Q || kind == Kind::Fp; }
    bool has_char_p() const { return kind == Kind::Fp || kind == Kind::ZmodP2; }

    // 0 for Z and Q.
    mpz_class modulus() const {
        switch (kind) {
            case Kind::Fp: return mpz_class(static_cast<unsigned long>(p));
            case Kind::ZmodP2: return mpz_class(static_cast<unsigned long>(p)) * static_cast<unsigned long>(p);
            default: return 0;
        }
    }

    mpq_class normalize(const mpq_class& x) const {
        switch (kind) {
            case Kind::Q: return x;
            case Kind::Z:
                if (x.get_den() != 1) throw RingMismatch("non-integral coefficient over Z");
                return x;
            default: {
                mpz_class n = modulus(), inv;
                if (mpz_invert(inv.get_mpz_t(), x.get_den().get_mpz_t(), n.get_mpz_t()) == 0)
                    throw RingMismatch("denominator not invertible mod " + n.get_str());
                mpz_class r = x.get_num() * inv;
                mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
                return mpq_class(r);
            }
        }
    }

    std::string name() const {
        switch (kind) {
            case Kind::Z: return "Z";
            case Kind::Q: return "Q";
            case Kind::Fp: return "F" + std::to_string(p);
            case Kind::ZmodP2: return "Z/" + std::to_string(p * p);
        }
        return "?";
    }

    bool operator==(const CoeffRing&) const = default;
};

}  // namespace hodgelab
