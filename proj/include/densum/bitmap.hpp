#pragma once

// Dense bitmap over the integers [0, limit], one bit per value.
// This is the common substrate for prime tables, membership sets and the
// shifted OR/AND sumset kernels. Bits above `limit` in the last word are
// kept at zero so whole-word popcounts never over-count.

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "densum/errors.hpp"

namespace densum {

class Bitmap {
public:
    Bitmap() = default;

    explicit Bitmap(uint64_t limit)
        : limit_(limit), words_(limit / 64 + 1, 0) {}

    uint64_t limit() const { return limit_; }
    uint64_t word_count() const { return words_.size(); }
    std::span<const uint64_t> words() const { return words_; }
    std::span<uint64_t> words() { return words_; }

    bool test(uint64_t n) const {
        return n <= limit_ && (words_[n >> 6] >> (n & 63)) & 1;
    }

    void set(uint64_t n) {
        check_index(n);
        words_[n >> 6] |= uint64_t(1) << (n & 63);
    }

    void reset(uint64_t n) {
        check_index(n);
        words_[n >> 6] &= ~(uint64_t(1) << (n & 63));
    }

    // Set every bit in [lo, hi]
    void set_range(uint64_t lo, uint64_t hi) {
        if (lo > hi) return;
        check_index(hi);
        uint64_t wl = lo >> 6, wh = hi >> 6;
        if (wl == wh) {
            words_[wl] |= high_mask(lo & 63) & low_mask(hi & 63);
            return;
        }
        words_[wl] |= high_mask(lo & 63);
        for (uint64_t w = wl + 1; w < wh; ++w) words_[w] = ~uint64_t(0);
        words_[wh] |= low_mask(hi & 63);
    }

    uint64_t count() const {
        uint64_t c = 0;
        for (uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    // Number of set bits in [lo, hi]; empty when lo > hi.
    uint64_t count_range(uint64_t lo, uint64_t hi) const {
        if (lo > hi) return 0;
        check_index(hi);
        uint64_t wl = lo >> 6, wh = hi >> 6;
        uint64_t head = words_[wl] & high_mask(lo & 63);
        if (wl == wh) return std::popcount(head & low_mask(hi & 63));
        uint64_t c = std::popcount(head);
        for (uint64_t w = wl + 1; w < wh; ++w) c += std::popcount(words_[w]);
        c += std::popcount(words_[wh] & low_mask(hi & 63));
        return c;
    }

    // Set bits in [1, x]
    uint64_t count_upto(uint64_t x) const { return x == 0 ? 0 : count_range(1, x); }

    // 64 bits starting at arbitrary (possibly negative) position `pos`;
    // positions outside [0, hi_clip] read as zero.
    uint64_t fetch64(int64_t pos, uint64_t hi_clip) const {
        if (hi_clip > limit_) hi_clip = limit_;
        if (pos > static_cast<int64_t>(hi_clip) || pos <= -64) return 0;
        int64_t w = pos >> 6;               // arithmetic shift: floor division
        unsigned off = static_cast<unsigned>(pos - (w << 6));
        uint64_t lo_word = (w >= 0 && w < static_cast<int64_t>(words_.size())) ? words_[w] : 0;
        uint64_t hi_word =
            (w + 1 >= 0 && w + 1 < static_cast<int64_t>(words_.size())) ? words_[w + 1] : 0;
        uint64_t out = off ? (lo_word >> off) | (hi_word << (64 - off)) : lo_word;
        // clip the tail: bits at positions pos+i with pos+i > hi_clip
        if (pos + 63 > static_cast<int64_t>(hi_clip)) {
            unsigned keep = static_cast<unsigned>(static_cast<int64_t>(hi_clip) - pos + 1);
            out &= low_mask(keep - 1);
        }
        return out;
    }

    // this |= (src restricted to [0, src_hi]) << shift, clipped to [0, limit]
    void or_shifted(const Bitmap& src, uint64_t shift, uint64_t src_hi) {
        if (shift > limit_) return;
        if (src_hi > src.limit_) src_hi = src.limit_;
        uint64_t dest_hi = shift + src_hi;
        if (dest_hi > limit_) dest_hi = limit_;
        uint64_t wl = shift >> 6, wh = dest_hi >> 6;
        for (uint64_t w = wl; w <= wh; ++w) {
            uint64_t bits = src.fetch64(static_cast<int64_t>(w << 6) - static_cast<int64_t>(shift),
                                        src_hi);
            if (w == wh) bits &= low_mask(dest_hi & 63);
            words_[w] |= bits;
        }
    }

    // |{ i in [lo, hi] : this.test(i) and other.test(i + delta) }|
    uint64_t count_pairs_shifted(const Bitmap& other, int64_t delta, uint64_t lo,
                                 uint64_t hi) const {
        if (lo > hi) return 0;
        check_index(hi);
        uint64_t wl = lo >> 6, wh = hi >> 6;
        uint64_t c = 0;
        for (uint64_t w = wl; w <= wh; ++w) {
            uint64_t bits = words_[w];
            if (w == wl) bits &= high_mask(lo & 63);
            if (w == wh) bits &= low_mask(hi & 63);
            if (!bits) continue;
            uint64_t shifted = other.fetch64(static_cast<int64_t>(w << 6) + delta, other.limit_);
            c += std::popcount(bits & shifted);
        }
        return c;
    }

    // Visit set bits in [lo, hi] in increasing order.
    template <typename Fn>
    void for_each_set(uint64_t lo, uint64_t hi, Fn&& fn) const {
        if (lo > hi) return;
        check_index(hi);
        uint64_t wl = lo >> 6, wh = hi >> 6;
        for (uint64_t w = wl; w <= wh; ++w) {
            uint64_t bits = words_[w];
            if (w == wl) bits &= high_mask(lo & 63);
            if (w == wh) bits &= low_mask(hi & 63);
            while (bits) {
                fn((w << 6) + std::countr_zero(bits));
                bits &= bits - 1;
            }
        }
    }

    bool operator==(const Bitmap&) const = default;

private:
    static uint64_t low_mask(unsigned top_bit) { // bits [0, top_bit]
        return top_bit >= 63 ? ~uint64_t(0) : (uint64_t(1) << (top_bit + 1)) - 1;
    }
    static uint64_t high_mask(unsigned bottom_bit) { // bits [bottom_bit, 63]
        return ~uint64_t(0) << bottom_bit;
    }
    void check_index(uint64_t n) const {
        if (n > limit_) throw std::out_of_range("bit index " + std::to_string(n) +
                                                " exceeds bitmap limit " + std::to_string(limit_));
    }

    uint64_t limit_ = 0;
    std::vector<uint64_t> words_{0};
};

// ---------------------------------------------------------------------------
// Binary dump format: header { magic "RLAB", version u32, limit u64, kind u8 },
// then the words as little-endian u64. Byte order is fixed regardless of host.
// ---------------------------------------------------------------------------

enum class BitmapKind : uint8_t { generic = 0, primes = 1, p2 = 2, p2star = 3 };

namespace detail {
inline void put_le(std::ostream& os, uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline uint64_t get_le(std::istream& is, int bytes) {
    uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
        int c = is.get();
        if (c == EOF) throw VerificationError("bitmap dump: truncated header or payload");
        v |= static_cast<uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
}
} // namespace detail

inline constexpr char kBitmapMagic[4] = {'R', 'L', 'A', 'B'};
inline constexpr uint32_t kBitmapFormatVersion = 1;

inline void write_bitmap(std::ostream& os, const Bitmap& bm, BitmapKind kind) {
    os.write(kBitmapMagic, 4);
    detail::put_le(os, kBitmapFormatVersion, 4);
    detail::put_le(os, bm.limit(), 8);
    os.put(static_cast<char>(kind));
    for (uint64_t w : bm.words()) detail::put_le(os, w, 8);
}

inline Bitmap read_bitmap(std::istream& is, BitmapKind* kind_out = nullptr) {
    char magic[4];
    is.read(magic, 4);
    if (is.gcount() != 4 || std::memcmp(magic, kBitmapMagic, 4) != 0)
        throw VerificationError("bitmap dump: bad magic");
    uint64_t version = detail::get_le(is, 4);
    if (version != kBitmapFormatVersion)
        throw VerificationError("bitmap dump: unsupported version " + std::to_string(version));
    uint64_t limit = detail::get_le(is, 8);
    uint8_t kind = static_cast<uint8_t>(detail::get_le(is, 1));
    if (kind_out) *kind_out = static_cast<BitmapKind>(kind);
    Bitmap bm(limit);
    for (uint64_t& w : bm.words()) w = detail::get_le(is, 8);
    return bm;
}

} // namespace densum
