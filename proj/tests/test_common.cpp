#include <catch_amalgamated.hpp>

#include <cmath>

#include "ipl/common.hpp"
#include "ipl/rng.hpp"

using namespace ipl;

TEST_CASE("ipow matches repeated multiplication", "[common]") {
    for (double base : {0.0, 1.0, -1.7, 0.3, 2.5}) {
        double expect = 1.0;
        for (int e = 0; e <= 12; ++e) {
            CHECK(ipow(base, e) == Catch::Approx(expect).margin(1e-12 * std::abs(expect)));
            expect *= base;
        }
    }
    CHECK(ipow(3.0, 0) == 1.0);
    CHECK(ipow(2.0, 10) == 1024.0);
    CHECK_THROWS_AS(ipow(2.0, -1), NumericError);
}

TEST_CASE("format_double round-trips doubles exactly", "[common]") {
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        double x = 0.0;
        switch (i % 4) {
            case 0: x = rng.uniform(-1e6, 1e6); break;
            case 1: x = rng.normal() * 1e-7; break;
            case 2: x = rng.normal() * 1e12; break;
            case 3: x = rng.uniform01(); break;
        }
        const std::string s = format_double(x);
        const double back = parse_double(s, "round-trip");
        CHECK(std::memcmp(&back, &x, sizeof x) == 0);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(-2.0) == "-2");
    CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("parse_double rejects junk and names the context", "[common]") {
    CHECK(parse_double(" 2.75 ", "ctx") == 2.75);
    for (const char* bad : {"", "abc", "1.2.3", "1e", "0x10", "--5", "1,5"}) {
        CHECK_THROWS_AS(parse_double(bad, "ctx"), ConfigError);
        CHECK_THROWS_WITH(parse_double(bad, "ctx"), Catch::Matchers::ContainsSubstring("ctx"));
    }
}

TEST_CASE("finite and size checks throw with the caller's name", "[common]") {
    Eigen::MatrixXd m(2, 2);
    m << 1, 2, 3, 4;
    CHECK_NOTHROW(check_finite(m, "here"));
    m(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_WITH(check_finite(m, "here"), Catch::Matchers::ContainsSubstring("here"));
    m(1, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(check_finite(m, "here"), ConfigError);
    CHECK_NOTHROW(check_same_size(3, 3, "sz"));
    CHECK_THROWS_WITH(check_same_size(3, 4, "sz"), Catch::Matchers::ContainsSubstring("sz"));
}
