#pragma once

// The sumset 2^P + S and the representation function
//   r(n) = |{(p, q) : n = 2^p + q, p prime, q in S}|.
//
// sumset_count OR-accumulates S shifted by each admissible power of two.
// rep_square_sum runs one windowed shifted-AND popcount per ordered pair of
// exponents, so no per-n counter array is needed at large x; the direct
// counter path below serves as its oracle up to a memory cap.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "densum/bitmap.hpp"
#include "densum/sieve.hpp"

namespace densum {

inline constexpr uint64_t kDirectModeCap = 10'000'000; // one counter byte per n

// Prime exponents p with 2^p <= x, ascending.
inline std::vector<unsigned> exponent_set(uint64_t x) {
    std::vector<unsigned> exps;
    for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u, 43u,
                       47u, 53u, 59u, 61u}) {
        if (x >> p) exps.push_back(p); // 2^p <= x without overflow
    }
    return exps;
}

// Bitmap of {n <= x : n = 2^p + q, p in exponent_set(x), q in s, q >= 1}.
// Membership of n does not depend on x, so a bitmap built at limit X serves
// every x <= X through count_upto.
inline Bitmap sumset_bitmap(uint64_t x, const Bitmap& s) {
    if (x > s.limit())
        throw std::out_of_range("sumset: x exceeds the membership bitmap limit " +
                                std::to_string(s.limit()));
    Bitmap acc(x);
    for (unsigned p : exponent_set(x)) {
        uint64_t shift = uint64_t(1) << p;
        if (shift >= x) continue; // no room for q >= 1
        acc.or_shifted(s, shift, x - shift);
    }
    return acc;
}

inline uint64_t sumset_count(uint64_t x, const Bitmap& s) {
    return sumset_bitmap(x, s).count_upto(x);
}

// Sum of r(n) over n <= x, via the exact identity
//   sum r(n) = sum over p of |S intersect [1, x - 2^p]|.
inline uint64_t rep_sum(uint64_t x, const Bitmap& s) {
    if (x > s.limit())
        throw std::out_of_range("sumset: x exceeds the membership bitmap limit");
    uint64_t total = 0;
    for (unsigned p : exponent_set(x)) {
        uint64_t shift = uint64_t(1) << p;
        if (shift >= x) continue;
        total += s.count_upto(x - shift);
    }
    return total;
}

// Sum of r(n)^2 over n <= x. Over ordered exponent pairs (p1, p2), count
//   q1 in S, 1 <= q1 <= x - 2^p1, with q1 + 2^p1 - 2^p2 in S and >= 1
// (the upper window constraints for q1 and q2 coincide at x - 2^p1).
// All reported totals use ordered pairs; the half-sum convention over
// p2 < p1 is the off-diagonal part divided by two, with the diagonal
// contribution equal to rep_sum (a tested identity).
inline uint64_t rep_square_sum(uint64_t x, const Bitmap& s) {
    if (x > s.limit())
        throw std::out_of_range("sumset: x exceeds the membership bitmap limit");
    std::vector<unsigned> exps = exponent_set(x);
    uint64_t total = 0;
    for (unsigned p1 : exps) {
        uint64_t hi = x - (uint64_t(1) << p1); // 2^p1 <= x by construction
        if (hi == 0) continue;
        for (unsigned p2 : exps) {
            int64_t delta = static_cast<int64_t>(uint64_t(1) << p1) -
                            static_cast<int64_t>(uint64_t(1) << p2);
            uint64_t lo = delta >= 0 ? 1 : 1 + static_cast<uint64_t>(-delta);
            if (lo > hi) continue;
            total += s.count_pairs_shifted(s, delta, lo, hi);
        }
    }
    return total;
}

struct RepCounts {
    uint64_t x = 0;
    std::vector<uint8_t> r; // r[n] for n in [0, x]
};

// Exact r(n) for every n <= x by walking all (p, q) pairs.
inline RepCounts rep_counts_direct(uint64_t x, const Bitmap& s,
                                   uint64_t cap = kDirectModeCap) {
    if (x > s.limit())
        throw std::out_of_range("sumset: x exceeds the membership bitmap limit");
    if (x > cap)
        throw std::invalid_argument(
            "rep_counts_direct: x = " + std::to_string(x) + " exceeds the direct-mode cap " +
            std::to_string(cap) + "; use rep_sum / rep_square_sum moment identities instead");
    RepCounts rc;
    rc.x = x;
    rc.r.assign(x + 1, 0);
    for (unsigned p : exponent_set(x)) {
        uint64_t shift = uint64_t(1) << p;
        if (shift >= x) continue;
        s.for_each_set(1, x - shift, [&](uint64_t q) {
            uint8_t& slot = rc.r[shift + q];
            if (slot == 0xff) throw std::overflow_error("rep counter overflow"); // r(n) <= |exps|
            ++slot;
        });
    }
    return rc;
}

// (sum r)^2 / sum r^2: the Cauchy-Schwarz lower bound on sumset_count(x).
inline double cs_lower_bound(uint64_t x, const Bitmap& s) {
    uint64_t rs = rep_sum(x, s);
    if (rs == 0)
        throw std::domain_error("cs_lower_bound: sum of r(n) is zero, ratio undefined");
    uint64_t rss = rep_square_sum(x, s);
    return static_cast<double>(rs) * static_cast<double>(rs) / static_cast<double>(rss);
}

} // namespace densum
