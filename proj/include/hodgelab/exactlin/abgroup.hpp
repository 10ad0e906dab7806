#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

namespace hodgelab {

// Finitely generated abelian group Z^rank + sum Z/t_i, with t_1 | t_2 | ...
// and all t_i > 1. Over a field the rank is the dimension.
struct AbGroup {
    std::size_t rank = 0;
    std::vector<mpz_class> torsion;

    AbGroup() = default;
    AbGroup(std::size_t r, std::vector<mpz_class> t = {}) : rank(r), torsion(std::move(t)) { normalize(); }

    // Accepts arbitrary cyclic orders and rewrites them as an invariant factor chain.
    void normalize() {
        std::vector<mpz_class> primes_powers;
        for (auto t : torsion) {
            t = abs(t);
            if (t <= 1) continue;
            mpz_class q = 2;
            while (q * q <= t) {
                if (t % q == 0) {
                    mpz_class pk = 1;
                    while (t % q == 0) {
                        t /= q;
                        pk *= q;
                    }
                    primes_powers.push_back(pk);
                }
                ++q;
            }
            if (t > 1) primes_powers.push_back(t);
        }
        // Group prime powers by prime, largest first, and multiply across primes.
        std::vector<std::pair<mpz_class, std::vector<mpz_class>>> by_prime;
        for (auto& pk : primes_powers) {
            mpz_class p = smallest_prime_factor(pk);
            auto it = std::find_if(by_prime.begin(), by_prime.end(), [&](auto& e) { return e.first == p; });
            if (it == by_prime.end()) {
                by_prime.push_back({p, {pk}});
            } else {
                it->second.push_back(pk);
            }
        }
        std::size_t len = 0;
        for (auto& [p, v] : by_prime) {
            std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a > b; });
            len = std::max(len, v.size());
        }
        std::vector<mpz_class> chain(len, 1);
        for (auto& [p, v] : by_prime)
            for (std::size_t i = 0; i < v.size(); ++i) chain[len - 1 - i] *= v[i];
        torsion = std::move(chain);
    }

    bool is_zero() const { return rank == 0 && torsion.empty(); }

    // Number of invariant factors whose p-primary part is exactly p^k.
    std::size_t count_primary(const mpz_class& p, unsigned k) const {
        std::size_t n = 0;
        for (auto t : torsion) {
            unsigned e = 0;
            while (t % p == 0) {
                t /= p;
                ++e;
            }
            if (e == k) ++n;
        }
        return n;
    }

    // Every torsion invariant is squarefree: the group is killed by the product of primes.
    bool torsion_is_elementary() const {
        for (auto t : torsion) {
            mpz_class q = 2;
            while (q * q <= t) {
                if (t % (q * q) == 0) return false;
                ++q;
            }
        }
        return true;
    }

    std::string str() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        if (rank > 0) {
            os << "Z";
            if (rank > 1) os << "^" << rank;
            first = false;
        }
        for (auto& t : torsion) {
            os << (first ? "" : " + ") << "Z/" << t;
            first = false;
        }
        return os.str();
    }

    friend bool operator==(const AbGroup& a, const AbGroup& b) {
        return a.rank == b.rank && a.torsion == b.torsion;
    }

    static mpz_class smallest_prime_factor(const mpz_class& n) {
        mpz_class q = 2;
        while (q * q <= n) {
            if (n % q == 0) return q;
            ++q;
        }
        return n;
    }
};

inline std::ostream& operator<<(std::ostream& os, const AbGroup& g) { return os << g.str(); }

}  // namespace hodgelab
