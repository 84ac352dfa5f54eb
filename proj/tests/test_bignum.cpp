#include "doctest.h"

#include <cstdint>
#include <random>

#include "densum/bignum.hpp"

using densum::BigNat;
using densum::Rational;

TEST_CASE("BigNat small-value arithmetic matches u128") {
    std::mt19937_64 rng(2024);
    for (int iter = 0; iter < 2000; ++iter) {
        uint64_t a = rng() >> (rng() % 40);
        uint64_t b = rng() >> (rng() % 40);
        BigNat A(a), B(b);
        unsigned __int128 sum = static_cast<unsigned __int128>(a) + b;
        if (sum <= ~uint64_t(0)) CHECK(*(A + B).to_u64() == a + b);
        else CHECK(!(A + B).to_u64().has_value());
        unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
        BigNat P = A * B;
        // compare against the 128-bit product limb by limb via decimal strings
        if (prod <= ~uint64_t(0)) {
            CHECK(P.to_u64().has_value());
            CHECK(*P.to_u64() == static_cast<uint64_t>(prod));
        } else {
            BigNat hi(static_cast<uint64_t>(prod >> 64));
            BigNat lo(static_cast<uint64_t>(prod));
            BigNat two32(uint64_t(1) << 32);
            CHECK(P == hi * two32 * two32 + lo);
        }
        if (a >= b) CHECK(*(A - B).to_u64() == a - b);
        if (b != 0) {
            BigNat Q = A;
            uint64_t r = Q.divmod_u64(b);
            CHECK(r == a % b);
            CHECK(*Q.to_u64() == a / b);
        }
    }
}

TEST_CASE("BigNat algebraic identities at multi-limb sizes") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 200; ++iter) {
        BigNat a(rng()), b(rng()), c(rng());
        for (int k = 0; k < 6; ++k) { a = a * BigNat(rng() | 1); }
        for (int k = 0; k < 5; ++k) { b = b * BigNat(rng() | 1); }
        CHECK((a + b) * c == a * c + b * c);
        CHECK((a + b) - b == a);
        auto [q, r] = (a * b + c).divmod(b.is_zero() ? BigNat(1) : b);
        if (!b.is_zero()) {
            CHECK(q * b + r == a * b + c);
            CHECK(r < b);
        }
    }
}

TEST_CASE("BigNat gcd matches std::gcd on 64-bit and scales under common factors") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 500; ++iter) {
        uint64_t a = rng(), b = rng();
        CHECK(*BigNat::gcd(BigNat(a), BigNat(b)).to_u64() == std::gcd(a, b));
    }
    // gcd(k*a, k*b) == k * gcd(a, b) with a multi-limb k
    BigNat k = BigNat(0xfeedface12345ull) * BigNat(0x9e3779b97f4a7c15ull);
    uint64_t a = 123456789, b = 987654321;
    CHECK(BigNat::gcd(k * BigNat(a), k * BigNat(b)) == k * BigNat(std::gcd(a, b)));
}

TEST_CASE("BigNat decimal strings and 2^k-1 construction") {
    CHECK(BigNat(0).to_decimal() == "0");
    CHECK(BigNat(1234567890123456789ull).to_decimal() == "1234567890123456789");
    CHECK(BigNat::power_of_two_minus_one(64).to_decimal() == "18446744073709551615");
    CHECK(BigNat::power_of_two_minus_one(89).to_decimal() == "618970019642690137449562111");
    CHECK(BigNat::power_of_two_minus_one(1) == BigNat(1));
    CHECK(BigNat::power_of_two_minus_one(0).is_zero());
    CHECK(BigNat::power_of_two_minus_one(64).bit_length() == 64);
}

TEST_CASE("Rational reduces, adds, multiplies and compares exactly") {
    Rational half(1, 2), third(1, 3);
    CHECK((half + third).to_string() == "5/6");
    CHECK((half * third).to_string() == "1/6");
    CHECK(Rational(6, 4).to_string() == "3/2");
    CHECK(Rational(0, 7).to_string() == "0");
    CHECK(Rational(8, 2).is_integer());
    CHECK(half < Rational(2, 3));
    CHECK(Rational(61, 35).compare(Rational(61, 35)) == 0);
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    CHECK(Rational(1, 3).to_double() == doctest::Approx(1.0 / 3).epsilon(1e-15));

    // harmonic-style accumulation stays exact: sum of 1/k for k = 1..10
    Rational h(0);
    for (uint64_t k = 1; k <= 10; ++k) h += Rational(1, k);
    CHECK(h.to_string() == "7381/2520");
}
