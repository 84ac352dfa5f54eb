#pragma once

// Correlated membership at a fixed offset N: the raw counter
//   |{q <= x - N : q in S and q + N in S}|
// via a shifted AND, plus sieve-style normalizations. The normalized ratio
// divides by x (log log x)^2 / (log x)^2 * S(N) and is defined for even N
// only; odd offsets stay countable but are never normalized. The two-linear-
// forms counter mirrors this with the x / (log x)^2 * S(k2 l1 - k1 l2) scale.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "densum/arith.hpp"
#include "densum/bitmap.hpp"
#include "densum/sieve.hpp"

namespace densum {

inline uint64_t count_pairs(uint64_t x, uint64_t offset, const Bitmap& s) {
    if (x > s.limit())
        throw std::out_of_range("count_pairs: x exceeds the membership bitmap limit " +
                                std::to_string(s.limit()));
    if (offset == 0) throw std::invalid_argument("count_pairs: N must be positive");
    if (offset >= x)
        throw std::invalid_argument("count_pairs: N = " + std::to_string(offset) +
                                    " leaves an empty range below x = " + std::to_string(x));
    return s.count_pairs_shifted(s, static_cast<int64_t>(offset), 1, x - offset);
}

struct PairReport {
    uint64_t x;
    uint64_t n;        // the offset N
    uint64_t count;
    Rational sigma;    // S(N), exact
    double normalized; // count / (x (log log x)^2 / (log x)^2 * S(N))
};

inline PairReport pair_ratio(uint64_t x, uint64_t offset, const Bitmap& s) {
    if (x < 16)
        throw std::domain_error("pair_ratio: normalization requires x >= 16");
    if (offset % 2 != 0)
        throw std::domain_error("pair_ratio: N must be even; odd offsets are countable via "
                                "count_pairs but carry no normalization");
    uint64_t c = count_pairs(x, offset, s);
    Rational sigma = sing_series(offset);
    double lx = std::log(static_cast<double>(x));
    double llx = std::log(lx);
    double normalized = static_cast<double>(c) * lx * lx /
                        (static_cast<double>(x) * llx * llx * sigma.to_double());
    return {x, offset, c, std::move(sigma), normalized};
}

struct LinearFormPair {
    uint64_t k1, l1, k2, l2;
};

struct PrimePairCount {
    uint64_t count;
    int64_t difference;                // k2 l1 - k1 l2
    Rational sigma;                    // S(|difference|)
    std::optional<double> normalized;  // absent when the difference is odd
};

// |{1 <= n <= x : k1 n + l1 and k2 n + l2 both prime}| plus the
// count / (x / (log x)^2 * S(k2 l1 - k1 l2)) ratio. The even-difference
// hypothesis gates only the normalization; the raw count stands either way.
inline PrimePairCount prime_pair_count(uint64_t x, const LinearFormPair& f,
                                       const PrimeTable& primes) {
    if (x == 0) throw std::invalid_argument("prime_pair_count: x must be positive");
    if (std::gcd(f.k1, f.l1) != 1)
        throw std::invalid_argument("prime_pair_count: gcd(k1, l1) must be 1");
    if (std::gcd(f.k2, f.l2) != 1)
        throw std::invalid_argument("prime_pair_count: gcd(k2, l2) must be 1");
    __int128 diff = static_cast<__int128>(f.k2) * f.l1 - static_cast<__int128>(f.k1) * f.l2;
    if (diff == 0)
        throw std::invalid_argument("prime_pair_count: k2*l1 - k1*l2 must be nonzero");
    uint128_t abs_diff = diff < 0 ? static_cast<uint128_t>(-diff) : static_cast<uint128_t>(diff);
    if (abs_diff > ~uint64_t(0))
        throw std::invalid_argument("prime_pair_count: |k2*l1 - k1*l2| exceeds 64 bits");
    uint128_t top1 = static_cast<uint128_t>(f.k1) * x + f.l1;
    uint128_t top2 = static_cast<uint128_t>(f.k2) * x + f.l2;
    if (top1 > primes.limit() || top2 > primes.limit())
        throw std::out_of_range("prime_pair_count: form values exceed the prime table limit " +
                                std::to_string(primes.limit()) + "; enlarge the table");

    uint64_t count = 0;
    for (uint64_t n = 1; n <= x; ++n)
        if (primes.is_prime(f.k1 * n + f.l1) && primes.is_prime(f.k2 * n + f.l2)) ++count;

    PrimePairCount out{count, static_cast<int64_t>(diff),
                       sing_series(static_cast<uint64_t>(abs_diff)), std::nullopt};
    if (abs_diff % 2 == 0 && x >= 2) {
        double lx = std::log(static_cast<double>(x));
        out.normalized = static_cast<double>(count) * lx * lx /
                         (static_cast<double>(x) * out.sigma.to_double());
    }
    return out;
}

} // namespace densum
