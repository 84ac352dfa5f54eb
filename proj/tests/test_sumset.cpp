#include "doctest.h"

#include <cstdint>
#include <set>
#include <vector>

#include "densum/psets.hpp"
#include "densum/sumset.hpp"
#include "oracles.hpp"

using namespace densum;

namespace {

Bitmap p2star_upto(uint64_t limit) { return classify(limit).p2star(); }

std::vector<uint64_t> p2star_members(uint64_t limit) {
    return oracles::members_upto(limit, [](uint64_t n) {
        return oracles::trial_classify(n).in_p2star;
    });
}

} // namespace

TEST_CASE("exponent_set: exact powers, no floating point") {
    CHECK(exponent_set(3) == std::vector<unsigned>{});
    CHECK(exponent_set(4) == std::vector<unsigned>{2});
    CHECK(exponent_set(20) == std::vector<unsigned>{2, 3});
    CHECK(exponent_set(32) == std::vector<unsigned>{2, 3, 5});
    CHECK(exponent_set((uint64_t(1) << 13) - 1) == std::vector<unsigned>{2, 3, 5, 7, 11});
    CHECK(exponent_set(uint64_t(1) << 13) == std::vector<unsigned>{2, 3, 5, 7, 11, 13});
}

TEST_CASE("sumset at x = 20: the union is exactly the eleven pinned values") {
    Bitmap s = p2star_upto(20);
    CHECK(sumset_count(20, s) == 11);
    Bitmap acc = sumset_bitmap(20, s);
    std::set<uint64_t> expect{6, 7, 9, 10, 11, 13, 14, 15, 17, 18, 19};
    for (uint64_t n = 0; n <= 20; ++n) CHECK(acc.test(n) == (expect.count(n) > 0));
    CHECK(sumset_count(5, p2star_upto(5)) == 0); // smallest element 2^2 + 2 = 6
}

TEST_CASE("sumset_count equals the brute-force double loop at x = 100 and on prefixes") {
    Bitmap s = p2star_upto(100'000);
    auto members = p2star_members(100'000);
    CHECK(sumset_count(100, s) == oracles::brute_sumset_count(100, members));

    // one bitmap at the top limit serves every x below: compare whole prefix
    auto r = oracles::brute_rep_counts(100'000, members);
    Bitmap acc = sumset_bitmap(100'000, s);
    uint64_t running = 0;
    for (uint64_t x = 1; x <= 100'000; ++x) {
        running += r[x] > 0;
        if (acc.count_upto(x) != running) FAIL("prefix sumset count diverges at ", x);
    }
    CHECK(acc.count_upto(100'000) == running);
    // spot-check that fresh per-x computations agree with the prefix view
    for (uint64_t x : {6, 20, 63, 64, 65, 1000, 4096, 99'999})
        CHECK(sumset_count(x, s) == acc.count_upto(x));
}

TEST_CASE("rep_sum: identity against set counts and the x = 20 value") {
    Bitmap s = p2star_upto(100'000);
    CHECK(rep_sum(20, s) == 14); // P2*(16) + P2*(12) = 8 + 6
    CHECK(count_upto(s, uint64_t(16)) == 8);
    CHECK(count_upto(s, uint64_t(12)) == 6);
    CHECK(rep_sum(5, s) == 0);
    for (uint64_t x : {100, 1000, 12345, 100'000}) {
        uint64_t direct = 0;
        for (unsigned p : exponent_set(x)) {
            uint64_t shift = uint64_t(1) << p;
            if (shift < x) direct += count_upto(s, x - shift);
        }
        CHECK(rep_sum(x, s) == direct);
    }
}

TEST_CASE("rep_counts_direct: exact r values and the pair split at x = 20") {
    Bitmap s = p2star_upto(200);
    RepCounts rc = rep_counts_direct(200, s);
    CHECK(rc.r[15] == 2);  // 15 = 4+11 = 8+7
    CHECK(rc.r[100] == 0); // 96, 92, 68 all outside P2*
    CHECK(rc.r[6] == 1);   // 6 = 4+2
    CHECK(rc.r[5] == 0);

    // at x = 20: 8 pairs at shift 4 and 6 pairs at shift 8
    RepCounts rc20 = rep_counts_direct(20, s);
    uint64_t total = 0;
    for (uint64_t n = 0; n <= 20; ++n) total += rc20.r[n];
    CHECK(total == 14);
    for (uint64_t n : {11, 15, 18}) CHECK(rc20.r[n] == 2);

    CHECK_THROWS_AS(rep_counts_direct(200, s, 100), std::invalid_argument);
}

TEST_CASE("rep_square_sum: windowed shifted-AND equals direct counters") {
    Bitmap s = p2star_upto(100'000);
    CHECK(rep_square_sum(20, s) == 20); // 3 values with r=2, 8 with r=1
    CHECK(rep_square_sum(5, s) == 0);
    for (uint64_t x : {100, 1000, 9999, 65'536, 100'000}) {
        RepCounts rc = rep_counts_direct(x, s);
        uint64_t direct = 0;
        for (uint64_t n = 0; n <= x; ++n)
            direct += static_cast<uint64_t>(rc.r[n]) * rc.r[n];
        CHECK(rep_square_sum(x, s) == direct);
    }
}

TEST_CASE("diagonal extraction: the p1 == p2 share of the second moment is rep_sum") {
    Bitmap s = p2star_upto(50'000);
    for (uint64_t x : {100, 5000, 50'000}) {
        uint64_t diag = 0;
        for (unsigned p : exponent_set(x)) {
            uint64_t shift = uint64_t(1) << p;
            if (shift < x) diag += s.count_pairs_shifted(s, 0, 1, x - shift);
        }
        CHECK(diag == rep_sum(x, s));
    }
}

TEST_CASE("cs_lower_bound: certificate value, equality case, and the empty error") {
    Bitmap s = p2star_upto(1000);
    CHECK(cs_lower_bound(20, s) == doctest::Approx(9.8)); // 14^2 / 20
    CHECK(cs_lower_bound(20, s) <= 11.0);
    CHECK_THROWS_AS(cs_lower_bound(5, s), std::domain_error);

    // all r(n) in {0, 1} forces equality with rep_sum: B = {2} gives distinct sums
    Bitmap single(1000);
    single.set(2);
    uint64_t rs = rep_sum(1000, single);
    CHECK(rs > 0);
    CHECK(rep_square_sum(1000, single) == rs);
    CHECK(cs_lower_bound(1000, single) == doctest::Approx(static_cast<double>(rs)));

    // Cauchy-Schwarz as an exact integer inequality at several x
    for (uint64_t x : {20, 100, 1000}) {
        uint64_t a = rep_sum(x, s);
        uint64_t b = rep_square_sum(x, s);
        uint64_t c = sumset_count(x, s);
        CHECK(static_cast<unsigned __int128>(a) * a <= static_cast<unsigned __int128>(c) * b);
    }
}
