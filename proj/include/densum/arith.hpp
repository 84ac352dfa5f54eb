#pragma once

// Multiplicative machinery: 64-bit factorization, orders of 2, the singular
// series S(n) = prod_{p|n} (1 + 1/p), Euler phi, squarefree tests, and the
// series that the density experiments monitor:
//
//   W(K)                   sum over odd squarefree d with e(d) <= K of 1/d,
//                          where e(d) is the order of 2 modulo d
//   inner_sum(k)           sum over squarefree d' of 1/(d' * lcm(k, d'))
//   double_series          sum over odd squarefree d, squarefree d' of
//                          1/(d * d' * lcm(e(d), d'))
//
// W(K) comes in two independent flavours: a direct scan over d <= D (a lower
// bound) and an exact dynamic program over the prime factorizations of
// 2^k - 1, k <= K. Exact rational arithmetic is used wherever a test asserts
// exact values; large truncations use compensated floating summation.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "densum/bignum.hpp"
#include "densum/bitmap.hpp"
#include "densum/errors.hpp"
#include "densum/modmath.hpp"
#include "densum/sieve.hpp"

namespace densum {

inline constexpr unsigned kDefaultWKMax = 60;      // w_dp cap unless raised by the caller
inline constexpr unsigned kInProcessMersenneMax = 64; // 2^k - 1 fits u64 for k <= 64

struct PrimePower {
    uint64_t prime;
    uint32_t exp;
    bool operator==(const PrimePower&) const = default;
};

struct Factorization {
    uint64_t n = 1;
    std::vector<PrimePower> factors; // sorted by prime; empty iff n == 1
};

namespace detail {

inline uint64_t pollard_brent(uint64_t n) {
    // Brent's cycle variant with batched gcds; parameters advance
    // deterministically until a proper factor appears.
    for (uint64_t c = 1;; ++c) {
        auto step = [&](uint64_t v) { return (mul_mod(v, v, n) + c) % n; };
        uint64_t y = 2, x = 2, ys = 2, q = 1, g = 1;
        uint64_t r = 1;
        const uint64_t batch = 128;
        while (g == 1) {
            x = y;
            for (uint64_t i = 0; i < r; ++i) y = step(y);
            for (uint64_t k = 0; k < r && g == 1; k += batch) {
                ys = y;
                uint64_t lim = std::min(batch, r - k);
                for (uint64_t i = 0; i < lim; ++i) {
                    y = step(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            do {
                ys = step(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void factor_into(uint64_t n, uint64_t trial_limit, std::map<uint64_t, uint32_t>& out) {
    static const std::vector<uint64_t> small = small_primes_upto(1024);
    for (uint64_t p : small) {
        if (p > trial_limit || p * p > n) break;
        while (n % p == 0) { ++out[p]; n /= p; }
    }
    if (trial_limit > 1024 && n > 1 && !is_prime64(n)) {
        static const std::vector<uint64_t> wide = small_primes_upto(1'000'000);
        for (uint64_t p : wide) {
            if (p > trial_limit || p * p > n) break;
            if (p <= 1024) continue;
            while (n % p == 0) { ++out[p]; n /= p; }
        }
    }
    if (n == 1) return;
    std::vector<uint64_t> pending{n};
    while (!pending.empty()) {
        uint64_t m = pending.back();
        pending.pop_back();
        if (m == 1) continue;
        if (is_prime64(m)) { ++out[m]; continue; }
        uint64_t d = pollard_brent(m);
        pending.push_back(d);
        pending.push_back(m / d);
    }
}

} // namespace detail

inline Factorization factorize(uint64_t n) {
    if (n == 0) throw std::invalid_argument("factorize: argument must be positive");
    Factorization f;
    f.n = n;
    if (n == 1) return f;
    std::map<uint64_t, uint32_t> acc;
    detail::factor_into(n, 1024, acc);
    f.factors.reserve(acc.size());
    for (auto& [p, e] : acc) f.factors.push_back({p, e});
    return f;
}

// Factors of 2^k - 1 for k <= 64: trial division to 1e6 first, then
// Pollard splitting with every cofactor certified by is_prime64.
inline std::vector<PrimePower> mersenne_factors(unsigned k) {
    if (k < 1 || k > kInProcessMersenneMax)
        throw std::invalid_argument("mersenne_factors: k must be in [1, 64]");
    uint64_t m = (k == 64) ? ~uint64_t(0) : (uint64_t(1) << k) - 1;
    std::map<uint64_t, uint32_t> acc;
    if (m > 1) detail::factor_into(m, 1'000'000, acc);
    std::vector<PrimePower> out;
    out.reserve(acc.size());
    for (auto& [p, e] : acc) out.push_back({p, e});
    return out;
}

// Least e >= 1 with 2^e == 1 (mod d), for odd d. Factors the group exponent
// lambda(d) and descends through its prime divisors; the result is verified
// by a final modular exponentiation.
inline uint64_t mult_order2(uint64_t d) {
    if (d % 2 == 0)
        throw std::domain_error("mult_order2: d must be odd (2 is not invertible mod " +
                                std::to_string(d) + ")");
    if (d == 1) return 1;
    uint64_t lambda = 1;
    for (const auto& pp : factorize(d).factors) {
        uint64_t lam_pa = pp.prime - 1;
        for (uint32_t i = 1; i < pp.exp; ++i) lam_pa *= pp.prime;
        lambda = std::lcm(lambda, lam_pa);
    }
    uint64_t e = lambda;
    for (const auto& fp : factorize(lambda).factors) {
        for (uint32_t i = 0; i < fp.exp; ++i) {
            if (e % fp.prime != 0) break;
            uint64_t cand = e / fp.prime;
            if (pow_mod(2, cand, d) == 1) e = cand;
            else break;
        }
    }
    if (pow_mod(2, e, d) != 1) throw std::logic_error("mult_order2: verification failed");
    return e;
}

// S(n) = prod_{p | n} (1 + 1/p), exact.
inline Rational sing_series(uint64_t n) {
    if (n == 0) throw std::invalid_argument("sing_series: argument must be positive");
    Rational s(1);
    for (const auto& pp : factorize(n).factors) s = s * Rational(pp.prime + 1, pp.prime);
    return s;
}

inline uint64_t euler_phi(uint64_t n) {
    if (n == 0) throw std::invalid_argument("euler_phi: argument must be positive");
    uint64_t r = n;
    for (const auto& pp : factorize(n).factors) r = r / pp.prime * (pp.prime - 1);
    return r;
}

inline bool is_squarefree(uint64_t n) {
    if (n == 0) throw std::invalid_argument("is_squarefree: argument must be positive");
    for (const auto& pp : factorize(n).factors)
        if (pp.exp > 1) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Series estimates
// ---------------------------------------------------------------------------

struct SeriesEstimate {
    double value = 0;
    std::optional<Rational> exact;     // set when computed in exact mode
    uint64_t terms_used = 0;
    std::string truncation;            // human-readable description of the cut
    std::optional<double> error_bound; // present only when a proven tail bound applies
};

namespace detail {

// least k <= cap with 2^k == 1 mod d, else 0; d odd
inline unsigned order2_capped(uint64_t d, unsigned cap) {
    if (d == 1) return 1;
    uint64_t r = 2 % d;
    for (unsigned k = 1; k <= cap; ++k) {
        if (r == 1) return k;
        r <<= 1;
        if (r >= d) r -= d;
    }
    return 0;
}

struct KahanSum {
    double s = 0, c = 0;
    void add(double v) {
        double y = v - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

} // namespace detail

// For each e in [1, K]: sum of 1/d and term count over odd squarefree d <= D
// with e(d) == e. Prefix sums of `sums` give w_scan for every K' <= K.
struct WScanBuckets {
    unsigned K = 0;
    uint64_t D = 0;
    std::vector<Rational> sums;    // index 1..K
    std::vector<uint64_t> counts;  // index 1..K
};

inline WScanBuckets w_scan_by_order(unsigned K, uint64_t D) {
    if (K < 1) throw std::invalid_argument("w_scan: K must be at least 1");
    if (D < 1) throw std::invalid_argument("w_scan: D must be at least 1");
    WScanBuckets b;
    b.K = K;
    b.D = D;
    b.sums.assign(K + 1, Rational(0));
    b.counts.assign(K + 1, 0);
    LpfTable lpf = sieve_lpf(D);
    // capped order for every odd prime <= D
    std::vector<uint32_t> ecap(D + 1, 0);
    for (uint64_t p = 3; p <= D; p += 2)
        if (lpf(p) == p) ecap[p] = detail::order2_capped(p, K);
    for (uint64_t d = 1; d <= D; d += 2) {
        uint64_t m = d, e = 1;
        bool ok = true;
        while (m > 1) {
            uint64_t p = lpf(m);
            m /= p;
            if (m % p == 0) { ok = false; break; } // squarefull
            uint32_t ep = ecap[p];
            if (ep == 0) { ok = false; break; }    // order exceeds K
            e = std::lcm(e, static_cast<uint64_t>(ep));
            if (e > K) { ok = false; break; }
        }
        if (!ok) continue;
        b.sums[e] += Rational(1, d);
        b.counts[e] += 1;
    }
    return b;
}

// Lower bound for W(K): restrict the defining sum to d <= D.
inline SeriesEstimate w_scan(unsigned K, uint64_t D) {
    WScanBuckets b = w_scan_by_order(K, D);
    Rational total(0);
    uint64_t terms = 0;
    for (unsigned e = 1; e <= K; ++e) {
        total += b.sums[e];
        terms += b.counts[e];
    }
    SeriesEstimate est;
    est.exact = total;
    est.value = total.to_double();
    est.terms_used = terms;
    est.truncation = "odd squarefree d <= " + std::to_string(D) + " with e(d) <= " +
                     std::to_string(K);
    return est; // no error_bound: this is a certified lower bound, not an approximation
}

// Factor table for 2^k - 1: map k -> primes with multiplicity.
using FactorTable = std::map<unsigned, std::vector<uint64_t>>;

// Parse and re-verify `k: p1 p2 ...` lines. Every line must reproduce
// 2^k - 1 exactly and every entry must certify prime; anything else is
// rejected, including entries too large for the 64-bit primality check.
inline FactorTable load_factor_table(std::istream& is) {
    FactorTable table;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string trimmed = line;
        auto hash = trimmed.find('#');
        if (hash != std::string::npos) trimmed.resize(hash);
        if (trimmed.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto colon = trimmed.find(':');
        if (colon == std::string::npos) throw ParseError(lineno, "expected `k: p1 p2 ...`");
        unsigned k = 0;
        try {
            size_t used = 0;
            unsigned long v = std::stoul(trimmed.substr(0, colon), &used);
            while (used < colon && std::isspace(static_cast<unsigned char>(trimmed[used]))) ++used;
            if (used != colon || v == 0) throw std::invalid_argument("");
            k = static_cast<unsigned>(v);
        } catch (const std::exception&) {
            throw ParseError(lineno, "bad exponent field before ':'");
        }
        if (table.count(k)) throw ParseError(lineno, "duplicate entry for k=" + std::to_string(k));
        std::vector<uint64_t> primes;
        std::istringstream rest(trimmed.substr(colon + 1));
        std::string tok;
        BigNat product(1);
        while (rest >> tok) {
            uint64_t p = 0;
            try {
                size_t used = 0;
                p = std::stoull(tok, &used);
                if (used != tok.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw VerificationError("factor table line " + std::to_string(lineno) +
                                        ": entry '" + tok + "' for k=" + std::to_string(k) +
                                        " is not a verifiable 64-bit integer");
            }
            if (!is_prime64(p))
                throw VerificationError("factor table line " + std::to_string(lineno) + ": entry " +
                                        tok + " for k=" + std::to_string(k) + " is not prime");
            product = product * BigNat(p);
            primes.push_back(p);
        }
        if (!(product == BigNat::power_of_two_minus_one(k)))
            throw VerificationError("factor table line " + std::to_string(lineno) +
                                    ": product does not equal 2^" + std::to_string(k) + "-1");
        table.emplace(k, std::move(primes));
    }
    return table;
}

namespace detail {

// p -> e(p) for every prime with e(p) <= K, from factorizations of 2^k - 1.
// Iterating k upward makes the first sighting of p exactly e(p).
inline std::map<uint64_t, unsigned> orders_from_mersennes(unsigned K, const FactorTable* table) {
    std::map<uint64_t, unsigned> orders;
    for (unsigned k = 1; k <= K; ++k) {
        if (table && table->count(k)) {
            for (uint64_t p : table->at(k)) orders.emplace(p, k);
        } else if (k <= kInProcessMersenneMax) {
            for (const auto& pp : mersenne_factors(k)) orders.emplace(pp.prime, k);
        } else {
            throw VerificationError("w_dp: no verified factorization of 2^" + std::to_string(k) +
                                    "-1 is available; supply a factor table covering k=" +
                                    std::to_string(k));
        }
    }
    return orders;
}

} // namespace detail

// Exact W(K) by dynamic programming over reachable lcm-of-orders values.
// Every state weight is kept as an integer numerator over the fixed common
// denominator prod p, so transitions are exact divisions by single primes.
inline SeriesEstimate w_dp(unsigned K, const FactorTable* table = nullptr,
                           unsigned k_max = kDefaultWKMax) {
    if (K < 1) throw std::invalid_argument("w_dp: K must be at least 1");
    if (K > k_max)
        throw std::invalid_argument("w_dp: K = " + std::to_string(K) + " exceeds k_max = " +
                                    std::to_string(k_max) + "; raise k_max explicitly to go further");
    auto orders = detail::orders_from_mersennes(K, table);
    BigNat denom(1);
    for (const auto& [p, e] : orders) denom = denom * BigNat(p);

    std::map<uint64_t, BigNat> weight; // lcm value -> numerator over denom
    std::map<uint64_t, uint64_t> members; // lcm value -> number of d represented
    weight[1] = denom;
    members[1] = 1; // d = 1
    for (const auto& [p, e] : orders) {
        std::vector<std::pair<uint64_t, BigNat>> add;
        std::vector<std::pair<uint64_t, uint64_t>> add_members;
        for (const auto& [m, num] : weight) {
            uint64_t m2 = std::lcm(m, static_cast<uint64_t>(e));
            if (m2 > K) continue; // pruned permanently: lcm only grows
            BigNat t = num;
            uint64_t rem = t.divmod_u64(p);
            if (rem != 0) throw std::logic_error("w_dp: inexact prime division");
            add.emplace_back(m2, std::move(t));
            add_members.emplace_back(m2, members[m]);
        }
        for (auto& [m2, t] : add) {
            auto it = weight.find(m2);
            if (it == weight.end()) weight.emplace(m2, std::move(t));
            else it->second += t;
        }
        for (auto& [m2, c] : add_members) members[m2] += c;
    }
    BigNat total;
    uint64_t terms = 0;
    for (const auto& [m, num] : weight) total += num;
    for (const auto& [m, c] : members) terms += c;
    Rational w(std::move(total), std::move(denom));

    SeriesEstimate est;
    est.value = w.to_double();
    est.exact = std::move(w);
    est.terms_used = terms;
    est.truncation = "all squarefree d with e(d) <= " + std::to_string(K) +
                     " (complete; exact rational)";
    return est;
}

// ---------------------------------------------------------------------------
// Inner sum and the double series
// ---------------------------------------------------------------------------

struct EulerProductConstant {
    double value;       // prod over primes p <= prime_limit of (1 + 1/p^2)
    double tail_bound;  // proven bound on the distance to the full product 15/pi^2
    uint64_t prime_limit;
};

// The constant prod_p (1 + 1/p^2) = zeta(2)/zeta(4) = 15/pi^2, computed from
// a truncated Euler product rather than hard-coded; the tail bound follows
// from sum_{n > P} 1/n^2 < 1/P.
inline const EulerProductConstant& zeta_ratio_constant() {
    static const EulerProductConstant c = [] {
        const uint64_t P = 1'000'000;
        double prod = 1.0;
        for (uint64_t p : detail::small_primes_upto(P))
            prod *= 1.0 + 1.0 / (static_cast<double>(p) * static_cast<double>(p));
        return EulerProductConstant{prod, prod * 2.0 / static_cast<double>(P), P};
    }();
    return c;
}

// Closed form of sum over squarefree d' of 1/(d' lcm(k, d')):
//   (1/k) * prod_{p | k} (1 + 1/p) * prod_{p !| k} (1 + 1/p^2)
// evaluated as (1/k) * S(k) * zeta_ratio / prod_{p | k} (1 + 1/p^2).
inline double inner_sum_closed(uint64_t k) {
    if (k == 0) throw std::invalid_argument("inner_sum_closed: k must be positive");
    double s = zeta_ratio_constant().value / static_cast<double>(k);
    for (const auto& pp : factorize(k).factors) {
        double p = static_cast<double>(pp.prime);
        s *= (1.0 + 1.0 / p) / (1.0 + 1.0 / (p * p));
    }
    return s;
}

// Squarefree indicator over [1, limit].
inline Bitmap squarefree_bitmap(uint64_t limit) {
    Bitmap sf(limit);
    if (limit >= 1) sf.set_range(1, limit);
    for (uint64_t p : detail::small_primes_upto(
             static_cast<uint64_t>(std::sqrt(static_cast<double>(limit))) + 1)) {
        uint64_t pp = p * p;
        if (pp > limit) break;
        for (uint64_t m = pp; m <= limit; m += pp) sf.reset(m);
    }
    return sf;
}

// Truncation of the inner sum at d' <= Dp; tail term is below 1/d'^2
// pointwise, so the cut is within 1/Dp of the full sum.
inline SeriesEstimate inner_sum_trunc(uint64_t k, uint64_t dp_limit) {
    if (k == 0 || dp_limit == 0)
        throw std::invalid_argument("inner_sum_trunc: k and Dp must be positive");
    Bitmap sf = squarefree_bitmap(dp_limit);
    detail::KahanSum sum;
    uint64_t terms = 0;
    for (uint64_t dprime = 1; dprime <= dp_limit; ++dprime) {
        if (!sf.test(dprime)) continue;
        uint64_t g = std::gcd(k, dprime);
        double lcm = static_cast<double>(k / g) * static_cast<double>(dprime);
        sum.add(1.0 / (static_cast<double>(dprime) * lcm));
        ++terms;
    }
    SeriesEstimate est;
    est.value = sum.s;
    est.terms_used = terms;
    est.truncation = "squarefree d' <= " + std::to_string(dp_limit);
    est.error_bound = 1.0 / static_cast<double>(dp_limit);
    return est;
}

// Partial sums of the double series over odd squarefree d <= Dd and
// squarefree d' <= Dp, grouped by e(d) so each distinct order value costs
// one pass over d'. Monotone nondecreasing in both truncation limits.
inline SeriesEstimate double_series_partial(uint64_t dd_limit, uint64_t dp_limit) {
    if (dd_limit == 0 || dp_limit == 0)
        throw std::invalid_argument("double_series_partial: Dd and Dp must be positive");
    LpfTable lpf = sieve_lpf(dd_limit);
    std::vector<uint64_t> prime_order(dd_limit + 1, 0);
    for (uint64_t p = 3; p <= dd_limit; p += 2)
        if (lpf(p) == p) prime_order[p] = mult_order2(p);

    // bucket odd squarefree d by e(d) = lcm of the prime orders
    std::map<uint64_t, detail::KahanSum> by_order;
    std::map<uint64_t, uint64_t> d_counts;
    for (uint64_t d = 1; d <= dd_limit; d += 2) {
        uint64_t m = d, e = 1;
        bool squarefree_d = true;
        while (m > 1) {
            uint64_t p = lpf(m);
            m /= p;
            if (m % p == 0) { squarefree_d = false; break; }
            e = std::lcm(e, prime_order[p]); // e(d) < d, no overflow
        }
        if (!squarefree_d) continue;
        by_order[e].add(1.0 / static_cast<double>(d));
        d_counts[e] += 1;
    }

    Bitmap sf = squarefree_bitmap(dp_limit);
    uint64_t dprime_count = 0;
    for (uint64_t dp = 1; dp <= dp_limit; ++dp)
        if (sf.test(dp)) ++dprime_count;

    detail::KahanSum total;
    uint64_t d_total = 0;
    for (const auto& [e, bucket] : by_order) {
        detail::KahanSum inner;
        for (uint64_t dprime = 1; dprime <= dp_limit; ++dprime) {
            if (!sf.test(dprime)) continue;
            uint64_t g = std::gcd(e, dprime);
            double lcm = static_cast<double>(e / g) * static_cast<double>(dprime);
            inner.add(1.0 / (static_cast<double>(dprime) * lcm));
        }
        total.add(bucket.s * inner.s);
        d_total += d_counts.at(e);
    }
    SeriesEstimate est;
    est.value = total.s;
    est.terms_used = d_total * dprime_count;
    est.truncation = "odd squarefree d <= " + std::to_string(dd_limit) +
                     ", squarefree d' <= " + std::to_string(dp_limit);
    return est;
}

// Exact-rational variant for small truncations; used by tests that assert
// closed values such as the (3, 3) partial sum 44/27.
inline SeriesEstimate double_series_partial_exact(uint64_t dd_limit, uint64_t dp_limit) {
    if (dd_limit == 0 || dp_limit == 0)
        throw std::invalid_argument("double_series_partial: Dd and Dp must be positive");
    Rational total(0);
    uint64_t terms = 0;
    for (uint64_t d = 1; d <= dd_limit; d += 2) {
        if (!is_squarefree(d)) continue;
        uint64_t e = mult_order2(d);
        for (uint64_t dprime = 1; dprime <= dp_limit; ++dprime) {
            if (!is_squarefree(dprime)) continue;
            uint64_t g = std::gcd(e, dprime);
            BigNat denom = BigNat(d) * BigNat(dprime) * (BigNat(e / g) * BigNat(dprime));
            total += Rational(BigNat(1), std::move(denom));
            ++terms;
        }
    }
    SeriesEstimate est;
    est.exact = total;
    est.value = total.to_double();
    est.terms_used = terms;
    est.truncation = "odd squarefree d <= " + std::to_string(dd_limit) +
                     ", squarefree d' <= " + std::to_string(dp_limit) + " (exact)";
    return est;
}

} // namespace densum
