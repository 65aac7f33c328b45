// Tests for primes-in-range, binomials (exact and Lucas), Wilson residues,
// rational residues, and CRT recombination.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lec/numtheory.hpp>

using namespace lec;

TEST_CASE("primes_between is strict on both ends") {
    CHECK(primes_between(4, 16) == std::vector<long>{5, 7, 11, 13});
    CHECK(primes_between(2, 4) == std::vector<long>{3});
    CHECK(primes_between(3, 9) == std::vector<long>{5, 7});
    CHECK(primes_between(5, 5) == std::vector<long>{});
    CHECK(primes_between(13, 14) == std::vector<long>{});
}

TEST_CASE("check_primes_product") {
    // k=4: 5*7*11*13 = 5005 >= 2^4 * 4! = 384.
    CHECK(check_primes_product(4));
    CHECK(check_primes_product(5));
    CHECK(check_primes_product(10));
    CHECK_THROWS_AS(check_primes_product(3), precondition_error);
    CHECK_THROWS_AS(check_primes_product(41), precondition_error);
}

TEST_CASE("exact binomials") {
    CHECK(binomial(4, 2) == 6);
    CHECK(binomial(0, 0) == 1);
    CHECK(binomial(5, 7) == 0);
    CHECK(binomial(14, 7) == 3432);
    CHECK(binomial(Int(52), Int(26)) == Int("495918532948104"));
}

TEST_CASE("Lucas binomial_mod matches exact values") {
    CHECK(binomial_mod(Int(14), Int(7), 2) == 0);
    CHECK(binomial_mod(Int(4), Int(3), 5) == 4);
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        for (long n = 0; n <= 200; n += (n < 40 ? 1 : 7)) {
            for (long k = 0; k <= n; k += (k < 25 ? 1 : 5)) {
                Int exact = binomial(n, k);
                long want = static_cast<long>(mpz_fdiv_ui(exact.get_mpz_t(), static_cast<unsigned long>(p)));
                CAPTURE(p); CAPTURE(n); CAPTURE(k);
                CHECK(binomial_mod(Int(n), Int(k), p) == want);
            }
        }
    }
}

TEST_CASE("block binomial congruences: C(a*p^3 + p^3 - 1 + b, p^3 - 1) mod p") {
    for (long p : {3L, 5L, 7L, 11L, 13L}) {
        Int p3 = Int(p) * p * p;
        for (long a : {1L, 2L}) {
            // b = 0: residue 1
            CHECK(binomial_mod(Int(a) * p3 + p3 - 1, p3 - 1, p) == 1);
            for (long b = 1; b <= 2 * p * p + 2 * p; ++b) {
                CAPTURE(p); CAPTURE(a); CAPTURE(b);
                CHECK(binomial_mod(Int(a) * p3 + p3 - 1 + b, p3 - 1, p) == 0);
                CHECK(binomial_mod(Int(a) * p3 + p3 - 1 - b, p3 - 1, p) == 0);
            }
        }
    }
}

TEST_CASE("wilson_residue") {
    CHECK(wilson_residue(5) == 4);
    CHECK(wilson_residue(2) == 1);
    CHECK(wilson_residue(13) == 12);
}

TEST_CASE("rational_mod") {
    // 3x = -8 = 3 (mod 11) -> x = 1
    CHECK(rational_mod(Int(-8), Int(3), 11) == 1);
    CHECK(rational_mod(Int(1), Int(1), 7) == 1);
    long x = rational_mod(Int(7), Int(3), 11);
    CHECK((3 * x) % 11 == 7 % 11);
    CHECK_THROWS_AS(rational_mod(Int(1), Int(11), 11), precondition_error);
    Rat q(-8, 3);
    CHECK(rational_mod(q, 11) == 1);
}

TEST_CASE("crt_combine") {
    auto [v1, m1] = crt_combine({{Int(1), Int(3)}, {Int(2), Int(5)}});
    CHECK(v1 == 7);
    CHECK(m1 == 15);
    auto [v2, m2] = crt_combine({{Int(0), Int(2)}});
    CHECK(v2 == 0);
    CHECK(m2 == 2);
    auto [v3, m3] = crt_combine({{Int(4), Int(5)}, {Int(6), Int(7)}, {Int(10), Int(11)}});
    CHECK(m3 == 385);
    CHECK(v3 % 5 == 4);
    CHECK(v3 % 7 == 6);
    CHECK(v3 % 11 == 10);
    // brute-scan confirmation
    bool found = false;
    for (long t = 0; t < 385; ++t)
        if (t % 5 == 4 && t % 7 == 6 && t % 11 == 10) {
            CHECK(Int(t) == v3);
            found = true;
            break;
        }
    CHECK(found);
    CHECK_THROWS_AS(crt_combine({{Int(1), Int(4)}, {Int(1), Int(6)}}), precondition_error);
}
