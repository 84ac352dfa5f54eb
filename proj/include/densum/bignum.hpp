#pragma once

// Minimal arbitrary-precision naturals and nonnegative rationals, sized for
// exact series work: denominators here are products of at most a few hundred
// 64-bit primes, so schoolbook arithmetic is plenty. Limbs are base 2^32,
// little-endian, no trailing zero limbs.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace densum {

class BigNat {
public:
    BigNat() = default; // zero

    BigNat(uint64_t v) { // NOLINT: implicit by design
        if (v) {
            limbs_.push_back(static_cast<uint32_t>(v));
            if (v >> 32) limbs_.push_back(static_cast<uint32_t>(v >> 32));
        }
    }

    static BigNat power_of_two_minus_one(unsigned k) {
        BigNat n;
        if (k == 0) return n;
        n.limbs_.assign((k + 31) / 32, ~uint32_t(0));
        unsigned top = k % 32;
        if (top) n.limbs_.back() = (uint32_t(1) << top) - 1;
        return n;
    }

    bool is_zero() const { return limbs_.empty(); }
    bool is_even() const { return limbs_.empty() || (limbs_[0] & 1) == 0; }

    size_t bit_length() const {
        if (limbs_.empty()) return 0;
        uint32_t top = limbs_.back();
        size_t bits = (limbs_.size() - 1) * 32;
        while (top) { ++bits; top >>= 1; }
        return bits;
    }

    int compare(const BigNat& o) const {
        if (limbs_.size() != o.limbs_.size())
            return limbs_.size() < o.limbs_.size() ? -1 : 1;
        for (size_t i = limbs_.size(); i-- > 0;)
            if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i] ? -1 : 1;
        return 0;
    }

    bool operator==(const BigNat& o) const { return limbs_ == o.limbs_; }
    bool operator<(const BigNat& o) const { return compare(o) < 0; }
    bool operator<=(const BigNat& o) const { return compare(o) <= 0; }

    BigNat& operator+=(const BigNat& o) {
        if (o.limbs_.size() > limbs_.size()) limbs_.resize(o.limbs_.size(), 0);
        uint64_t carry = 0;
        for (size_t i = 0; i < limbs_.size(); ++i) {
            uint64_t t = carry + limbs_[i] + (i < o.limbs_.size() ? o.limbs_[i] : 0);
            limbs_[i] = static_cast<uint32_t>(t);
            carry = t >> 32;
        }
        if (carry) limbs_.push_back(static_cast<uint32_t>(carry));
        return *this;
    }

    // requires *this >= o
    BigNat& operator-=(const BigNat& o) {
        if (compare(o) < 0) throw std::underflow_error("BigNat: negative difference");
        uint64_t borrow = 0;
        for (size_t i = 0; i < limbs_.size(); ++i) {
            uint64_t sub = borrow + (i < o.limbs_.size() ? o.limbs_[i] : 0);
            uint64_t cur = limbs_[i];
            if (cur >= sub) {
                limbs_[i] = static_cast<uint32_t>(cur - sub);
                borrow = 0;
            } else {
                limbs_[i] = static_cast<uint32_t>(cur + (uint64_t(1) << 32) - sub);
                borrow = 1;
            }
        }
        trim();
        return *this;
    }

    BigNat operator+(const BigNat& o) const { BigNat r = *this; r += o; return r; }
    BigNat operator-(const BigNat& o) const { BigNat r = *this; r -= o; return r; }

    BigNat operator*(const BigNat& o) const {
        if (is_zero() || o.is_zero()) return {};
        BigNat r;
        r.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
        for (size_t i = 0; i < limbs_.size(); ++i) {
            uint64_t carry = 0;
            for (size_t j = 0; j < o.limbs_.size(); ++j) {
                uint64_t t = static_cast<uint64_t>(limbs_[i]) * o.limbs_[j] +
                             r.limbs_[i + j] + carry;
                r.limbs_[i + j] = static_cast<uint32_t>(t);
                carry = t >> 32;
            }
            size_t k = i + o.limbs_.size();
            while (carry) {
                uint64_t t = r.limbs_[k] + carry;
                r.limbs_[k] = static_cast<uint32_t>(t);
                carry = t >> 32;
                ++k;
            }
        }
        r.trim();
        return r;
    }

    BigNat& operator*=(const BigNat& o) { *this = *this * o; return *this; }

    // divide in place by a nonzero 64-bit divisor, returning the remainder
    uint64_t divmod_u64(uint64_t d) {
        if (d == 0) throw std::domain_error("BigNat: division by zero");
        unsigned __int128 rem = 0;
        for (size_t i = limbs_.size(); i-- > 0;) {
            unsigned __int128 cur = (rem << 32) | limbs_[i];
            limbs_[i] = static_cast<uint32_t>(cur / d); // quotient limb < 2^32 since rem < d
            rem = cur % d;
        }
        trim();
        return static_cast<uint64_t>(rem);
    }

    BigNat& shr1() {
        uint32_t carry = 0;
        for (size_t i = limbs_.size(); i-- > 0;) {
            uint32_t next = limbs_[i] & 1;
            limbs_[i] = (limbs_[i] >> 1) | (carry << 31);
            carry = next;
        }
        trim();
        return *this;
    }

    BigNat& shl1() {
        uint32_t carry = 0;
        for (size_t i = 0; i < limbs_.size(); ++i) {
            uint32_t next = limbs_[i] >> 31;
            limbs_[i] = (limbs_[i] << 1) | carry;
            carry = next;
        }
        if (carry) limbs_.push_back(carry);
        return *this;
    }

    static BigNat gcd(BigNat a, BigNat b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        unsigned shift = 0;
        while (a.is_even() && b.is_even()) { a.shr1(); b.shr1(); ++shift; }
        while (a.is_even()) a.shr1();
        for (;;) {
            while (b.is_even()) b.shr1();
            if (a.compare(b) > 0) std::swap(a, b);
            b -= a; // b >= a, both odd -> difference even (or zero)
            if (b.is_zero()) break;
        }
        while (shift--) a.shl1();
        return a;
    }

    bool bit(size_t i) const {
        size_t limb = i / 32;
        return limb < limbs_.size() && (limbs_[limb] >> (i % 32)) & 1;
    }

    // quotient and remainder; binary long division, fine at our sizes
    std::pair<BigNat, BigNat> divmod(const BigNat& d) const {
        if (d.is_zero()) throw std::domain_error("BigNat: division by zero");
        if (auto small = d.to_u64()) {
            BigNat q = *this;
            uint64_t rem = q.divmod_u64(*small);
            return {std::move(q), BigNat(rem)};
        }
        BigNat q, r;
        for (size_t i = bit_length(); i-- > 0;) {
            r.shl1();
            if (bit(i)) {
                if (r.limbs_.empty()) r.limbs_.push_back(1);
                else r.limbs_[0] |= 1;
            }
            q.shl1();
            if (d <= r) { r -= d; q += BigNat(1); }
        }
        return {std::move(q), std::move(r)};
    }

    std::optional<uint64_t> to_u64() const {
        if (limbs_.size() > 2) return std::nullopt;
        uint64_t v = 0;
        if (limbs_.size() > 1) v = static_cast<uint64_t>(limbs_[1]) << 32;
        if (!limbs_.empty()) v |= limbs_[0];
        return v;
    }

    long double to_long_double() const {
        long double v = 0;
        for (size_t i = limbs_.size(); i-- > 0;) v = v * 4294967296.0L + limbs_[i];
        return v;
    }

    std::string to_decimal() const {
        if (is_zero()) return "0";
        BigNat tmp = *this;
        std::string out;
        while (!tmp.is_zero()) {
            uint64_t chunk = tmp.divmod_u64(1'000'000'000);
            std::string part = std::to_string(chunk);
            if (!tmp.is_zero()) part.insert(0, 9 - part.size(), '0');
            out.insert(0, part);
        }
        return out;
    }

private:
    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    }

    std::vector<uint32_t> limbs_;
};

// Nonnegative rational, always reduced, denominator nonzero.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(uint64_t n) : num_(n), den_(1) {} // NOLINT: implicit by design
    Rational(uint64_t n, uint64_t d) : Rational(BigNat(n), BigNat(d)) {}

    Rational(BigNat n, BigNat d) : num_(std::move(n)), den_(std::move(d)) {
        if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
        reduce();
    }

    const BigNat& num() const { return num_; }
    const BigNat& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_integer() const { return den_ == BigNat(1); }

    Rational& operator+=(const Rational& o) {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ = den_ * o.den_;
        reduce();
        return *this;
    }

    Rational operator+(const Rational& o) const { Rational r = *this; r += o; return r; }

    Rational operator*(const Rational& o) const {
        return Rational(num_ * o.num_, den_ * o.den_);
    }

    int compare(const Rational& o) const { return (num_ * o.den_).compare(o.num_ * den_); }
    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator<(const Rational& o) const { return compare(o) < 0; }
    bool operator<=(const Rational& o) const { return compare(o) <= 0; }

    double to_double() const {
        return static_cast<double>(num_.to_long_double() / den_.to_long_double());
    }

    std::string to_string() const {
        if (is_integer()) return num_.to_decimal();
        return num_.to_decimal() + "/" + den_.to_decimal();
    }

private:
    void reduce() {
        if (num_.is_zero()) { den_ = BigNat(1); return; }
        BigNat g = BigNat::gcd(num_, den_);
        if (!(g == BigNat(1))) {
            num_ = divide_exact(num_, g);
            den_ = divide_exact(den_, g);
        }
    }

    // exact division by a known divisor (the gcd)
    static BigNat divide_exact(const BigNat& a, const BigNat& g) {
        auto [q, r] = a.divmod(g);
        if (!r.is_zero()) throw std::logic_error("Rational: inexact division in reduce");
        return q;
    }

    BigNat num_;
    BigNat den_;
};

} // namespace densum
