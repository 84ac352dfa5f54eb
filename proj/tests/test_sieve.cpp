#include "doctest.h"

#include <cstdint>
#include <vector>

#include "densum/sieve.hpp"
#include "oracles.hpp"

using namespace densum;

TEST_CASE("sieve_primes: small exact sets and counted checkpoints") {
    PrimeTable t10 = sieve_primes(10);
    std::vector<uint64_t> got = t10.primes_in(1, 10);
    CHECK(got == std::vector<uint64_t>{2, 3, 5, 7});

    PrimeTable t100 = sieve_primes(100);
    uint64_t pi100 = 0;
    for (uint64_t n = 1; n <= 100; ++n) pi100 += oracles::trial_is_prime(n);
    CHECK(pi100 == 25);
    CHECK(t100.bits().count() == 25);

    CHECK_THROWS_AS(sieve_primes(1), std::invalid_argument);
    CHECK_THROWS_AS(sieve_primes(kMaxTableLimit + 1), std::invalid_argument);
}

TEST_CASE("sieve_primes at 1e6 matches an independent trial-division sieve") {
    const uint64_t limit = 1'000'000;
    PrimeTable t = sieve_primes(limit);
    // independent oracle: byte sieve written here, not the library's
    std::vector<uint8_t> is_p(limit + 1, 1);
    is_p[0] = is_p[1] = 0;
    for (uint64_t i = 2; i * i <= limit; ++i)
        if (is_p[i])
            for (uint64_t j = i * i; j <= limit; j += i) is_p[j] = 0;
    uint64_t pi = 0;
    for (uint64_t n = 0; n <= limit; ++n) {
        pi += is_p[n];
        if (t.is_prime(n) != (is_p[n] != 0)) FAIL("prime bit mismatch at ", n);
    }
    CHECK(pi == 78498);
    CHECK(t.bits().count() == 78498);
}

TEST_CASE("segmented and monolithic construction are bit-identical") {
    const uint64_t limit = 1'000'000;
    PrimeTable mono = sieve_primes(limit, {limit + 64, 1});
    for (uint64_t seg : {uint64_t(1) << 10, uint64_t(1) << 16, uint64_t(1) << 20}) {
        PrimeTable segd = sieve_primes(limit, {seg, 1});
        CHECK(segd.bits() == mono.bits());
    }
    // and across thread counts
    PrimeTable threaded = sieve_primes(limit, {uint64_t(1) << 16, 4});
    CHECK(threaded.bits() == mono.bits());
}

TEST_CASE("sieve_lpf: base cases and agreement with the prime table") {
    LpfTable lpf = sieve_lpf(100'000);
    CHECK(lpf(1) == 1);
    CHECK(lpf(91) == 7);  // 91 = 7 * 13
    CHECK(lpf(97) == 97); // prime
    CHECK_THROWS_AS(sieve_lpf(0), std::invalid_argument);
    CHECK_THROWS_AS(sieve_lpf(kMaxLpfLimit + 1), std::invalid_argument);
    CHECK_THROWS_AS(lpf(100'001), std::out_of_range);

    PrimeTable t = sieve_primes(100'000);
    for (uint64_t n = 1; n <= 100'000; ++n) {
        // prime bit iff lpf(n) == n and n >= 2
        CHECK(t.is_prime(n) == (lpf(n) == n && n >= 2));
        if (n >= 2) {
            CHECK(n % lpf(n) == 0);
        }
    }
}

TEST_CASE("is_prime64: pseudoprime regressions and Mersenne cross-check") {
    CHECK(!is_prime64(1)); // units are not prime
    CHECK(!is_prime64(0));
    CHECK(is_prime64(2));
    CHECK(!is_prime64(341)); // 341 = 11 * 31, base-2 Fermat pseudoprime
    CHECK(!is_prime64(561)); // Carmichael
    CHECK(!is_prime64(3215031751ull)); // strong pseudoprime to bases 2,3,5,7
    // 2^61 - 1 via an independent Lucas-Lehmer oracle
    REQUIRE(oracles::lucas_lehmer(61));
    CHECK(is_prime64((uint64_t(1) << 61) - 1));
    REQUIRE(!oracles::lucas_lehmer(59));
    CHECK(!is_prime64((uint64_t(1) << 59) - 1));
    CHECK(!is_prime64(~uint64_t(0))); // 2^64 - 1 = 3 * 5 * 17 * 257 * ...
}

TEST_CASE("is_prime64 agrees with the table up to 1e6") {
    PrimeTable t = sieve_primes(1'000'000);
    for (uint64_t n = 0; n <= 1'000'000; ++n)
        if (is_prime64(n) != t.is_prime(n)) FAIL("is_prime64 mismatch at ", n);
    CHECK(true);
}

TEST_CASE("count_upto: floor semantics and range errors") {
    PrimeTable t = sieve_primes(120);
    CHECK(count_upto(t, 10.0) == 4);
    CHECK(count_upto(t, 10.9) == 4); // floor(10.9) = 10
    CHECK(count_upto(t, 100.0) == 25);
    CHECK(count_upto(t, 0.7) == 0);
    CHECK(count_upto(t, uint64_t(2)) == 1);
    CHECK_THROWS_AS(count_upto(t, 121.0), std::out_of_range);
    CHECK_THROWS_AS(count_upto(t, -1.0), std::invalid_argument);
}
