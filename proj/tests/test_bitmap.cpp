#include "doctest.h"

#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "densum/bitmap.hpp"

using densum::Bitmap;

namespace {

// reference model: a std::set of positions
struct Model {
    uint64_t limit;
    std::set<uint64_t> bits;

    uint64_t count_range(uint64_t lo, uint64_t hi) const {
        uint64_t c = 0;
        for (uint64_t b : bits)
            if (b >= lo && b <= hi) ++c;
        return c;
    }
};

Model random_model(uint64_t limit, double density, std::mt19937_64& rng) {
    Model m{limit, {}};
    std::bernoulli_distribution flip(density);
    for (uint64_t n = 0; n <= limit; ++n)
        if (flip(rng)) m.bits.insert(n);
    return m;
}

Bitmap to_bitmap(const Model& m) {
    Bitmap b(m.limit);
    for (uint64_t n : m.bits) b.set(n);
    return b;
}

} // namespace

TEST_CASE("bitmap basics: set/test/count/count_range") {
    Bitmap b(130);
    CHECK(b.limit() == 130);
    CHECK(b.count() == 0);
    b.set(0);
    b.set(63);
    b.set(64);
    b.set(130);
    CHECK(b.test(0));
    CHECK(b.test(63));
    CHECK(b.test(64));
    CHECK(b.test(130));
    CHECK(!b.test(1));
    CHECK(!b.test(129));
    CHECK(b.count() == 4);
    CHECK(b.count_range(0, 130) == 4);
    CHECK(b.count_range(1, 129) == 2);
    CHECK(b.count_range(64, 64) == 1);
    CHECK(b.count_range(65, 64) == 0); // empty window
    CHECK(b.count_upto(63) == 1);      // count_upto starts at 1, excludes bit 0
    b.reset(64);
    CHECK(!b.test(64));
    CHECK_THROWS_AS(b.set(131), std::out_of_range);
    CHECK(!b.test(200)); // out-of-range reads as false
}

TEST_CASE("bitmap set_range fills word spans exactly") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 50; ++iter) {
        uint64_t limit = 1 + rng() % 400;
        uint64_t lo = rng() % (limit + 1);
        uint64_t hi = lo + rng() % (limit - lo + 1);
        Bitmap b(limit);
        b.set_range(lo, hi);
        for (uint64_t n = 0; n <= limit; ++n) CHECK(b.test(n) == (n >= lo && n <= hi));
    }
}

TEST_CASE("count_range agrees with a set model on random data") {
    std::mt19937_64 rng(42);
    Model m = random_model(700, 0.3, rng);
    Bitmap b = to_bitmap(m);
    CHECK(b.count() == m.bits.size());
    for (int iter = 0; iter < 200; ++iter) {
        uint64_t lo = rng() % 701;
        uint64_t hi = rng() % 701;
        if (lo > hi) std::swap(lo, hi);
        CHECK(b.count_range(lo, hi) == m.count_range(lo, hi));
    }
}

TEST_CASE("or_shifted matches the naive shifted union") {
    std::mt19937_64 rng(1234);
    for (int iter = 0; iter < 60; ++iter) {
        uint64_t src_limit = 40 + rng() % 300;
        uint64_t dst_limit = 40 + rng() % 300;
        uint64_t shift = rng() % 200;
        uint64_t src_hi = rng() % (src_limit + 80); // may exceed src_limit on purpose
        Model src = random_model(src_limit, 0.25, rng);
        Model dst = random_model(dst_limit, 0.1, rng);

        Bitmap b = to_bitmap(dst);
        b.or_shifted(to_bitmap(src), shift, src_hi);

        std::set<uint64_t> expect = dst.bits;
        for (uint64_t q : src.bits)
            if (q <= src_hi && q + shift <= dst_limit) expect.insert(q + shift);
        for (uint64_t n = 0; n <= dst_limit; ++n) CHECK(b.test(n) == (expect.count(n) > 0));
    }
}

TEST_CASE("count_pairs_shifted matches the naive loop, including negative deltas") {
    std::mt19937_64 rng(99);
    for (int iter = 0; iter < 80; ++iter) {
        uint64_t limit_a = 50 + rng() % 260;
        uint64_t limit_b = 50 + rng() % 260;
        Model ma = random_model(limit_a, 0.3, rng);
        Model mb = random_model(limit_b, 0.3, rng);
        Bitmap a = to_bitmap(ma), b = to_bitmap(mb);
        int64_t delta = static_cast<int64_t>(rng() % 240) - 120;
        uint64_t lo = rng() % (limit_a + 1);
        uint64_t hi = rng() % (limit_a + 1);
        if (lo > hi) std::swap(lo, hi);

        uint64_t expect = 0;
        for (uint64_t i = lo; i <= hi; ++i) {
            if (!ma.bits.count(i)) continue;
            int64_t j = static_cast<int64_t>(i) + delta;
            if (j >= 0 && mb.bits.count(static_cast<uint64_t>(j))) ++expect;
        }
        CHECK(a.count_pairs_shifted(b, delta, lo, hi) == expect);
    }
}

TEST_CASE("for_each_set visits exactly the set positions in order") {
    std::mt19937_64 rng(5);
    Model m = random_model(500, 0.2, rng);
    Bitmap b = to_bitmap(m);
    std::vector<uint64_t> seen;
    b.for_each_set(3, 490, [&](uint64_t n) { seen.push_back(n); });
    std::vector<uint64_t> expect;
    for (uint64_t n : m.bits)
        if (n >= 3 && n <= 490) expect.push_back(n);
    CHECK(seen == expect);
}

TEST_CASE("bitmap dump round-trips and the header bytes are pinned") {
    Bitmap b(70);
    b.set(2);
    b.set(69);
    std::ostringstream os(std::ios::binary);
    densum::write_bitmap(os, b, densum::BitmapKind::primes);
    std::string bytes = os.str();
    // header: magic, version u32 LE, limit u64 LE, kind u8, then 2 words
    REQUIRE(bytes.size() == 4 + 4 + 8 + 1 + 16);
    CHECK(bytes.substr(0, 4) == "RLAB");
    CHECK(static_cast<unsigned char>(bytes[4]) == 1);
    CHECK(static_cast<unsigned char>(bytes[5]) == 0);
    CHECK(static_cast<unsigned char>(bytes[8]) == 70);
    CHECK(static_cast<unsigned char>(bytes[16]) == 1); // kind = primes

    std::istringstream is(bytes, std::ios::binary);
    densum::BitmapKind kind{};
    Bitmap back = densum::read_bitmap(is, &kind);
    CHECK(kind == densum::BitmapKind::primes);
    CHECK(back == b);

    std::istringstream bad("RLXB???", std::ios::binary);
    CHECK_THROWS_AS(densum::read_bitmap(bad), densum::VerificationError);
}
