#pragma once

// Membership of every n <= limit in
//   P2      primes together with products of exactly two primes, and
//   P2*     members whose least prime factor psi satisfies psi(q)^3 < q
//           (psi(p) = 1 for primes, so every prime qualifies).
//
// Classification runs in one segmented pass over least prime factors:
// n is a semiprime exactly when n / lpf(n) is prime. The P2* test is the
// exact integer predicate psi^3 < n; no floating point is involved.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "densum/bitmap.hpp"
#include "densum/parallel.hpp"
#include "densum/sieve.hpp"

namespace densum {

struct CheckpointRecord {
    uint64_t x;
    uint64_t count;
    double normalized; // count * log x / (x * log log x)
};

class ClassifiedSet {
public:
    ClassifiedSet(uint64_t limit, Bitmap p2, Bitmap p2star)
        : limit_(limit), p2_(std::move(p2)), p2star_(std::move(p2star)) {}

    uint64_t limit() const { return limit_; }
    const Bitmap& p2() const { return p2_; }
    const Bitmap& p2star() const { return p2star_; }

private:
    uint64_t limit_;
    Bitmap p2_;
    Bitmap p2star_;
};

// psi(q): 1 for primes, least prime factor otherwise. q must be >= 2.
inline uint64_t psi(uint64_t q, const LpfTable& lpf) {
    if (q < 2) throw std::domain_error("psi: argument must be at least 2");
    uint64_t p = lpf(q);
    return p == q ? 1 : p;
}

inline ClassifiedSet classify(const PrimeTable& primes, const SieveOptions& opt = {}) {
    uint64_t limit = primes.limit();
    if (limit < 4) throw std::invalid_argument("classify: limit must be at least 4");

    uint64_t sqrt_limit = static_cast<uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
    while (sqrt_limit * sqrt_limit > limit) --sqrt_limit;
    std::vector<uint64_t> base = detail::small_primes_upto(sqrt_limit);

    Bitmap p2(limit), p2star(limit);
    uint64_t seg_bits = opt.segment_bits < 64 ? 64 : (opt.segment_bits + 63) / 64 * 64;
    uint64_t n_segments = limit / seg_bits + 1;

    auto classify_segment = [&](uint64_t seg) {
        uint64_t lo = seg * seg_bits;
        uint64_t hi = std::min(limit, lo + seg_bits - 1);
        // least prime factor <= sqrt(limit) for each slot; 0 where none divides
        std::vector<uint32_t> lpf_buf(hi - lo + 1, 0);
        for (uint64_t p : base) {
            uint64_t start = (lo + p - 1) / p * p;
            if (start < p * 2) start = p * 2; // p itself is not a proper multiple
            for (uint64_t m = start; m <= hi; m += p)
                if (lpf_buf[m - lo] == 0) lpf_buf[m - lo] = static_cast<uint32_t>(p);
        }
        for (uint64_t n = std::max<uint64_t>(lo, 2); n <= hi; ++n) {
            if (primes.is_prime(n)) { // psi = 1, always below n^(1/3)
                p2.set(n);
                p2star.set(n);
                continue;
            }
            uint64_t p1 = lpf_buf[n - lo];
            if (p1 == 0) continue; // composite n always has a factor <= sqrt(limit)
            uint64_t q = n / p1;
            if (!primes.is_prime(q)) continue; // three or more prime factors
            p2.set(n);
            if (p1 * p1 * p1 < n) p2star.set(n);
        }
    };
    parallel_chunks(n_segments, opt.threads, classify_segment);

    return ClassifiedSet(limit, std::move(p2), std::move(p2star));
}

inline ClassifiedSet classify(uint64_t limit, const SieveOptions& opt = {}) {
    if (limit < 4) throw std::invalid_argument("classify: limit must be at least 4");
    return classify(sieve_primes(limit, opt), opt);
}

// count * log x / (x * log log x); meaningful from x = 16 on.
inline double normalized_count(uint64_t x, uint64_t count) {
    if (x < 16)
        throw std::domain_error("normalized_count: undefined for x < 16 (log log too small)");
    double lx = std::log(static_cast<double>(x));
    return static_cast<double>(count) * lx / (static_cast<double>(x) * std::log(lx));
}

inline std::vector<CheckpointRecord> checkpoint_report(const Bitmap& set,
                                                       std::vector<uint64_t> xs) {
    std::sort(xs.begin(), xs.end());
    std::vector<CheckpointRecord> out;
    out.reserve(xs.size());
    for (uint64_t x : xs) {
        if (x < 16)
            throw std::domain_error("checkpoint_report: normalization undefined for x = " +
                                    std::to_string(x) + " (requires x >= 16)");
        uint64_t c = count_upto(set, x);
        out.push_back({x, c, normalized_count(x, c)});
    }
    return out;
}

// |{p prime : p^2 <= x}|. P2 includes prime squares; subtracting this count
// converts to the convention that excludes them.
inline uint64_t prime_squares_upto(const PrimeTable& primes, uint64_t x) {
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(x)));
    while (r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return count_upto(primes, r);
}

} // namespace densum
