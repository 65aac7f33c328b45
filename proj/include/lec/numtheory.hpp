#pragma once

// numtheory.hpp: primes in a range, exact and mod-p binomials (Lucas),
// Wilson residues, modular inverses of rationals, and CRT recombination.
// All exact arithmetic uses GMP (mpz_class / mpq_class); modular results
// are plain machine integers in [0, p).

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "errors.hpp"

namespace lec {

using Int = mpz_class;
using Rat = mpq_class;

// Ordered list of primes p with k < p < hi (strict on both ends; pinned by
// primes_between(4, 16) = {5, 7, 11, 13}).
inline std::vector<long> primes_between(long k, long hi) {
    if (k < 2) throw precondition_error("primes_between: k must be >= 2");
    if (hi <= k + 1) return {};
    std::vector<bool> composite(static_cast<size_t>(hi), false);
    std::vector<long> out;
    for (long q = 2; q < hi; ++q) {
        if (composite[static_cast<size_t>(q)]) continue;
        if (q > k) out.push_back(q);
        for (long r = q + q; r < hi; r += q) composite[static_cast<size_t>(r)] = true;
    }
    return out;
}

inline Int factorial(long n) {
    Int f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n < 0 ? 0 : n));
    return f;
}

// True iff the product of primes strictly between k and k^2 is at least
// 2^k * k!.
inline bool check_primes_product(long k) {
    if (k < 4 || k > 40) throw precondition_error("check_primes_product: need 4 <= k <= 40");
    Int prod = 1;
    for (long p : primes_between(k, k * k)) prod *= p;
    Int bound = factorial(k);
    mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
    return prod >= bound;
}

// Exact binomial coefficient; 0 when k > n or k < 0.  n must be >= 0.
inline Int binomial(const Int& n, const Int& k) {
    if (k < 0 || k > n || n < 0) return 0;
    Int r;
    mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k.get_ui());
    return r;
}

inline Int binomial(long n, long k) { return binomial(Int(n), Int(k)); }

namespace detail {
// Binomial of base-p digits, C(n, k) mod p for n, k < p, by the factorial
// formula with modular inverses (p prime, so inverses exist).
inline long small_binomial_mod(long n, long k, long p) {
    if (k < 0 || k > n) return 0;
    long num = 1, den = 1;
    for (long i = 1; i <= k; ++i) {
        num = static_cast<long>((static_cast<__int128>(num) * ((n - k + i) % p)) % p);
        den = static_cast<long>((static_cast<__int128>(den) * (i % p)) % p);
    }
    // den^(p-2) mod p
    long inv = 1, base = den % p, e = p - 2;
    while (e > 0) {
        if (e & 1) inv = static_cast<long>((static_cast<__int128>(inv) * base) % p);
        base = static_cast<long>((static_cast<__int128>(base) * base) % p);
        e >>= 1;
    }
    return static_cast<long>((static_cast<__int128>(num) * inv) % p);
}
}  // namespace detail

// C(n, k) mod p by Lucas' theorem, digit by digit in base p.
inline long binomial_mod(Int n, Int k, long p) {
    if (p < 2) throw precondition_error("binomial_mod: p must be prime >= 2");
    if (k < 0 || k > n || n < 0) return 0;
    long r = 1;
    while (n > 0 || k > 0) {
        long nd = mpz_fdiv_ui(n.get_mpz_t(), static_cast<unsigned long>(p));
        long kd = mpz_fdiv_ui(k.get_mpz_t(), static_cast<unsigned long>(p));
        r = static_cast<long>((static_cast<__int128>(r) * detail::small_binomial_mod(nd, kd, p)) % p);
        if (r == 0) return 0;
        n /= p;
        k /= p;
    }
    return r;
}

// (p-1)! mod p; always p-1 for prime p (Wilson's theorem), but computed
// directly so it doubles as a sanity check.
inline long wilson_residue(long p) {
    if (p < 2) throw precondition_error("wilson_residue: p must be prime >= 2");
    Int f = factorial(p - 1);
    return static_cast<long>(mpz_fdiv_ui(f.get_mpz_t(), static_cast<unsigned long>(p)));
}

// a * b^{-1} mod p for integers a, b with p prime and p not dividing b.
inline long rational_mod(const Int& a, const Int& b, long p) {
    if (p < 2) throw precondition_error("rational_mod: p must be prime >= 2");
    if (mpz_fdiv_ui(b.get_mpz_t(), static_cast<unsigned long>(p)) == 0)
        throw precondition_error("rational_mod: denominator divisible by p");
    Int pz(p), binv;
    if (mpz_invert(binv.get_mpz_t(), b.get_mpz_t(), pz.get_mpz_t()) == 0)
        throw precondition_error("rational_mod: no inverse");
    Int r = ((a % pz) * binv) % pz;
    if (r < 0) r += pz;
    return static_cast<long>(r.get_si());
}

inline long rational_mod(const Rat& q, long p) {
    return rational_mod(q.get_num(), q.get_den(), p);
}

// One congruence x = residue (mod modulus).
struct Residue {
    Int residue;
    Int modulus;
};

using ResidueSystem = std::vector<Residue>;

// Unique value in [0, prod moduli) congruent to every residue; moduli must be
// pairwise coprime.  Returns {value, product of moduli}.
inline std::pair<Int, Int> crt_combine(const ResidueSystem& rs) {
    if (rs.empty()) throw precondition_error("crt_combine: empty system");
    Int x = 0, mod = 1;
    for (const auto& r : rs) {
        if (r.modulus < 2) throw precondition_error("crt_combine: modulus < 2");
        Int g, inv;
        mpz_gcd(g.get_mpz_t(), mod.get_mpz_t(), r.modulus.get_mpz_t());
        if (g != 1) throw precondition_error("crt_combine: moduli not coprime");
        // x' = x + mod * t with t = (r - x)/mod  (mod r.modulus)
        if (mpz_invert(inv.get_mpz_t(), mod.get_mpz_t(), r.modulus.get_mpz_t()) == 0)
            throw precondition_error("crt_combine: no inverse");
        Int t = ((r.residue - x) % r.modulus) * inv % r.modulus;
        if (t < 0) t += r.modulus;
        x += mod * t;
        mod *= r.modulus;
    }
    return {x, mod};
}

}  // namespace lec
