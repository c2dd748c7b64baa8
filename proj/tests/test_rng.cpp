#include <doctest.h>

#include <cmath>
#include <vector>

#include "flq/rng.hpp"

using namespace flq;

TEST_SUITE_BEGIN("rng");

TEST_CASE("streams are deterministic and seed-sensitive") {
    Rng a(42), b(42), c(43);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 64; ++i) {
        const uint64_t va = a.next_u64();
        all_equal &= va == b.next_u64();
        any_diff |= va != c.next_u64();
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("hash64 separates inputs and is order-sensitive") {
    CHECK(hash64({1, 2}) != hash64({2, 1}));
    CHECK(hash64({0}) != hash64({0, 0}));
    CHECK(hash64({7, 9}) == hash64({7, 9}));
}

TEST_CASE("next_below stays in range and covers small supports") {
    Rng rng(7);
    std::vector<int> seen(5, 0);
    for (int i = 0; i < 5000; ++i) {
        const uint64_t v = rng.next_below(5);
        REQUIRE(v < 5);
        ++seen[v];
    }
    for (int count : seen) CHECK(count > 800);  // ~1000 each
}

TEST_CASE("next_double in [0,1)") {
    Rng rng(11);
    double sum = 0;
    for (int i = 0; i < 10000; ++i) {
        const double v = rng.next_double();
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
        sum += v;
    }
    CHECK(sum / 10000 == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("gaussian moments") {
    Rng rng(13);
    const int m = 200000;
    double sum = 0, ss = 0;
    for (int i = 0; i < m; ++i) {
        const double v = rng.next_gaussian();
        sum += v;
        ss += v * v;
    }
    const double mean = sum / m;
    const double var = ss / m - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(var == doctest::Approx(1.0).epsilon(0.03));
}

TEST_SUITE_END();
