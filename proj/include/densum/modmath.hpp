#pragma once

#include <cstdint>
#include <numeric>

namespace densum {

using uint128_t = unsigned __int128;

// (a * b) mod m for full 64-bit operands
inline uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((uint128_t)a * b % m);
}

// (base ^ exp) mod m, m >= 1
inline uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m) {
    if (m == 1) return 0;
    uint64_t result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

// lcm with saturation: returns 0 if the true lcm exceeds `cap`.
// Useful when only "lcm <= cap" matters and operands may be large.
inline uint64_t lcm_capped(uint64_t a, uint64_t b, uint64_t cap) {
    uint64_t g = std::gcd(a, b);
    uint64_t q = a / g;
    if (b != 0 && q > cap / b) return 0;
    uint64_t l = q * b;
    return l <= cap ? l : 0;
}

} // namespace densum
