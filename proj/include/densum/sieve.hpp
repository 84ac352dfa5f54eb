#pragma once

// Prime membership and least-prime-factor tables.
//
// The prime bitmap stores every residue (no wheel, no odd-only packing) so a
// table can be audited bit-for-bit against trial division. Construction is
// segmented; the result is bit-identical for any segment size or thread
// count, which the tests assert.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "densum/bitmap.hpp"
#include "densum/modmath.hpp"
#include "densum/parallel.hpp"

namespace densum {

// Caps chosen to keep a single resident table at or below 256 MB.
inline constexpr uint64_t kMaxTableLimit = uint64_t(1) << 31; // bitmap: 1 bit / value
inline constexpr uint64_t kMaxLpfLimit = uint64_t(1) << 26;   // lpf: 4 bytes / value

struct SieveOptions {
    uint64_t segment_bits = uint64_t(1) << 20; // rounded up to a multiple of 64
    unsigned threads = 1;                      // 0 = hardware concurrency
};

class PrimeTable {
public:
    PrimeTable() = default;
    PrimeTable(uint64_t limit, Bitmap bits) : limit_(limit), bits_(std::move(bits)) {}

    uint64_t limit() const { return limit_; }
    const Bitmap& bits() const { return bits_; }
    bool is_prime(uint64_t n) const { return bits_.test(n); }

    // primes in [lo, hi] as a vector
    std::vector<uint64_t> primes_in(uint64_t lo, uint64_t hi) const {
        std::vector<uint64_t> out;
        bits_.for_each_set(lo < 2 ? 2 : lo, hi, [&](uint64_t p) { out.push_back(p); });
        return out;
    }

private:
    uint64_t limit_ = 0;
    Bitmap bits_;
};

struct LpfTable {
    uint64_t limit = 0;
    std::vector<uint32_t> lpf; // index 0 unused; lpf[1] == 1

    uint32_t operator()(uint64_t n) const {
        if (n < 1 || n > limit)
            throw std::out_of_range("lpf: " + std::to_string(n) + " outside [1, " +
                                    std::to_string(limit) + "]");
        return lpf[n];
    }
};

namespace detail {

// Plain byte sieve, used to seed the segmented runs with base primes.
inline std::vector<uint64_t> small_primes_upto(uint64_t limit) {
    std::vector<uint64_t> primes;
    if (limit < 2) return primes;
    std::vector<uint8_t> composite(limit + 1, 0);
    for (uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
    }
    return primes;
}

} // namespace detail

inline PrimeTable sieve_primes(uint64_t limit, const SieveOptions& opt = {}) {
    if (limit < 2)
        throw std::invalid_argument("sieve_primes: limit must be at least 2");
    if (limit > kMaxTableLimit)
        throw std::invalid_argument(
            "sieve_primes: limit " + std::to_string(limit) + " exceeds the table cap " +
            std::to_string(kMaxTableLimit) + " (about 256 MB of bits); use segmented dumps");

    uint64_t seg_bits = opt.segment_bits < 64 ? 64 : (opt.segment_bits + 63) / 64 * 64;
    uint64_t sqrt_limit = static_cast<uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
    while (sqrt_limit * sqrt_limit > limit) --sqrt_limit;
    std::vector<uint64_t> base = detail::small_primes_upto(sqrt_limit);

    Bitmap bits(limit);
    uint64_t n_segments = limit / seg_bits + 1;
    auto sieve_segment = [&](uint64_t seg) {
        uint64_t lo = seg * seg_bits;
        uint64_t hi = std::min(limit, lo + seg_bits - 1);
        uint64_t words = (hi - lo) / 64 + 1;
        std::vector<uint64_t> buf(words, ~uint64_t(0));
        for (uint64_t p : base) {
            uint64_t start = p * p;
            if (start < lo) start = (lo + p - 1) / p * p;
            for (uint64_t m = start; m <= hi; m += p)
                buf[(m - lo) >> 6] &= ~(uint64_t(1) << ((m - lo) & 63));
        }
        if (lo == 0) buf[0] &= ~uint64_t(3); // 0 and 1
        // mask stray bits past hi, then publish into the shared table
        unsigned top = static_cast<unsigned>((hi - lo) & 63);
        if (top != 63) buf[words - 1] &= (uint64_t(1) << (top + 1)) - 1;
        auto out = bits.words();
        for (uint64_t w = 0; w < words; ++w) out[(lo >> 6) + w] = buf[w];
    };
    // segments are word-aligned, so writes never overlap
    parallel_chunks(n_segments, opt.threads, sieve_segment);

    return PrimeTable(limit, std::move(bits));
}

inline LpfTable sieve_lpf(uint64_t limit) {
    if (limit < 1)
        throw std::invalid_argument("sieve_lpf: limit must be at least 1");
    if (limit > kMaxLpfLimit)
        throw std::invalid_argument("sieve_lpf: limit " + std::to_string(limit) +
                                    " exceeds the lpf cap " + std::to_string(kMaxLpfLimit) +
                                    " (4 bytes per value); classify() streams segments instead");
    LpfTable t;
    t.limit = limit;
    t.lpf.assign(limit + 1, 0);
    t.lpf[0] = 0;
    if (limit >= 1) t.lpf[1] = 1;
    for (uint64_t p = 2; p <= limit; ++p) {
        if (t.lpf[p] != 0) continue; // composite, already claimed by a smaller prime
        t.lpf[p] = static_cast<uint32_t>(p);
        for (uint64_t m = p * p; m <= limit; m += p)
            if (t.lpf[m] == 0) t.lpf[m] = static_cast<uint32_t>(p);
    }
    return t;
}

// Deterministic Miller-Rabin over the first twelve prime bases; this base
// set is known to be exact for every n below 3.3 * 10^24, so the whole
// 64-bit range is decided.
inline bool is_prime64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

// |{a in set : 1 <= a <= x}| with floor semantics for real x.
inline uint64_t count_upto(const Bitmap& set, double x) {
    if (x < 0) throw std::invalid_argument("count_upto: x must be nonnegative");
    if (x > static_cast<double>(set.limit()))
        throw std::out_of_range("count_upto: x exceeds the table limit " +
                                std::to_string(set.limit()));
    uint64_t fx = static_cast<uint64_t>(x);
    return set.count_upto(fx);
}

inline uint64_t count_upto(const Bitmap& set, uint64_t x) {
    if (x > set.limit())
        throw std::out_of_range("count_upto: x exceeds the table limit " +
                                std::to_string(set.limit()));
    return set.count_upto(x);
}

inline uint64_t count_upto(const PrimeTable& t, double x) { return count_upto(t.bits(), x); }
inline uint64_t count_upto(const PrimeTable& t, uint64_t x) { return count_upto(t.bits(), x); }

} // namespace densum
