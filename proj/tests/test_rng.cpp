#include <catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <vector>

#include "ipl/parallel.hpp"
#include "ipl/rng.hpp"

using namespace ipl;

TEST_CASE("mix_seed matches the published splitmix64 first output", "[rng]") {
    CHECK(mix_seed(0) == 0xE220A8397B1DCDAFULL);
    CHECK(mix_seed(1) != mix_seed(2));
    CHECK(derive_seed(7, 1) != derive_seed(7, 2));
    CHECK(derive_seed(7, 1) == derive_seed(7, 1));
}

TEST_CASE("same seed gives the same stream, different seeds differ", "[rng]") {
    Rng a(123), b(123), c(124);
    bool all_equal = true, any_equal_c = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform01(), y = b.uniform01(), z = c.uniform01();
        all_equal = all_equal && x == y;
        any_equal_c = any_equal_c || x == z;
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal_c);
}

TEST_CASE("uniform draws stay inside their interval", "[rng]") {
    Rng rng(5);
    double lo_seen = 1.0, hi_seen = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        lo_seen = std::min(lo_seen, u);
        hi_seen = std::max(hi_seen, u);
    }
    CHECK(lo_seen < 0.01);
    CHECK(hi_seen > 0.99);
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.uniform(-3.0, 7.0);
        REQUIRE(v >= -3.0);
        REQUIRE(v < 7.0);
    }
}

TEST_CASE("normal moments are near standard", "[rng]") {
    Rng rng(9);
    const int n = 40000;
    double sum = 0, sumsq = 0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sumsq += z * z;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.03);
    Rng r2(9);
    const double shifted = r2.normal(10.0, 2.0);
    Rng r3(9);
    CHECK(shifted == Catch::Approx(10.0 + 2.0 * r3.normal()).margin(0));
}

TEST_CASE("one normal consumes exactly two uniform draws", "[rng]") {
    Rng a(77), b(77);
    a.normal();
    b.uniform01();
    b.uniform01();
    CHECK(a.uniform01() == b.uniform01());
}

TEST_CASE("uniform_int is bounded and hits every residue", "[rng]") {
    Rng rng(3);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 7000; ++i) {
        const std::uint64_t k = rng.uniform_int(7);
        REQUIRE(k < 7);
        counts[static_cast<std::size_t>(k)]++;
    }
    for (int c : counts) CHECK(c > 0);
    CHECK_THROWS_AS(rng.uniform_int(0), ConfigError);
}

TEST_CASE("parallel_for covers every index once, any thread count", "[rng]") {
    const int n = 1003;
    for (int threads : {1, 2, 4, 7}) {
        std::vector<int> hits(n, 0);
        parallel_for(n, threads, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
            for (std::ptrdiff_t i = lo; i < hi; ++i) hits[static_cast<std::size_t>(i)]++;
        });
        bool ok = true;
        for (int h : hits) ok = ok && h == 1;
        CHECK(ok);
    }
    // zero work is a no-op
    parallel_for(0, 4, [&](std::ptrdiff_t, std::ptrdiff_t) { FAIL("must not be called"); });
}

TEST_CASE("parallel_for rethrows exceptions from workers", "[rng]") {
    CHECK_THROWS_AS(parallel_for(500, 4,
                                 [&](std::ptrdiff_t lo, std::ptrdiff_t) {
                                     if (lo > 0) throw ConfigError("boom");
                                 }),
                    ConfigError);
}
