#include <catch_amalgamated.hpp>

#include <set>

#include "ipl/multi_index.hpp"
#include "ipl/rng.hpp"
#include "support/oracles.hpp"

using namespace ipl;

TEST_CASE("space dimension matches the Pascal recurrence", "[multi_index]") {
    for (int d = 1; d <= 6; ++d)
        for (int s = 0; s <= 6; ++s)
            CHECK(polynomial_space_dimension(d, s) == oracles::monomial_count(d, s));
    CHECK(polynomial_space_dimension(2, 2) == 6);
    CHECK(polynomial_space_dimension(5, 2) == 21);
    CHECK(polynomial_space_dimension(7, 2) == 36);
    CHECK_THROWS_AS(polynomial_space_dimension(1000000, 12), NumericError);
    CHECK_THROWS_AS(polynomial_space_dimension(0, 2), ConfigError);
    CHECK_THROWS_AS(polynomial_space_dimension(2, -1), ConfigError);
}

TEST_CASE("enumeration is complete, unique, and ordered", "[multi_index]") {
    for (int d : {1, 2, 3, 5})
        for (int s : {0, 1, 2, 3}) {
            const auto all = enumerate_multi_indices(d, s);
            CHECK(static_cast<long long>(all.size()) == polynomial_space_dimension(d, s));
            std::set<std::vector<int>> seen;
            for (std::size_t i = 0; i < all.size(); ++i) {
                CHECK(all[i].dim() == d);
                CHECK(all[i].degree() <= s);
                seen.insert(all[i].exponents);
                if (i > 0) {
                    CHECK(grlex_less(all[i - 1], all[i]));
                    CHECK_FALSE(grlex_less(all[i], all[i - 1]));
                }
            }
            CHECK(seen.size() == all.size());
        }
}

TEST_CASE("two-variable degree-2 enumeration, written out", "[multi_index]") {
    const auto all = enumerate_multi_indices(2, 2);
    const std::vector<std::vector<int>> expect = {{0, 0}, {0, 1}, {1, 0},
                                                  {0, 2}, {1, 1}, {2, 0}};
    REQUIRE(all.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) CHECK(all[i].exponents == expect[i]);
}

TEST_CASE("ordering sorts by total degree before tuple comparison", "[multi_index]") {
    const MultiIndex low{{2, 0, 0}};  // degree 2
    const MultiIndex high{{0, 1, 2}}; // degree 3
    CHECK(grlex_less(low, high));
    CHECK_FALSE(grlex_less(high, low));
    const MultiIndex a{{0, 2}}, b{{1, 1}};
    CHECK(grlex_less(a, b)); // equal degree, lexicographic on tuples
    CHECK_FALSE(grlex_less(a, a));
}

TEST_CASE("multinomial coefficients match the factorial formula", "[multi_index]") {
    Rng rng(321);
    for (int trial = 0; trial < 500; ++trial) {
        const int s = 1 + static_cast<int>(rng.uniform_int(12));
        const int d = 1 + static_cast<int>(rng.uniform_int(4));
        std::vector<int> alpha(static_cast<std::size_t>(d), 0);
        int budget = s;
        for (auto& a : alpha) {
            a = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(budget) + 1));
            budget -= a;
        }
        const MultiIndex m{alpha};
        CHECK(multinomial_coefficient_exact(s, m) == oracles::factorial_multinomial(s, alpha));
    }
    CHECK(multinomial_coefficient_exact(2, MultiIndex{{1, 1}}) == 2);
    CHECK(multinomial_coefficient_exact(2, MultiIndex{{0, 0}}) == 1);
    CHECK(multinomial_coefficient_exact(3, MultiIndex{{1, 1}}) == 6);
    CHECK(multinomial_coefficient(3, MultiIndex{{1, 1}}) == 6.0);
}

TEST_CASE("multinomial rejects bad arguments", "[multi_index]") {
    CHECK_THROWS_AS(multinomial_coefficient_exact(21, MultiIndex{{1}}), NumericError);
    CHECK_THROWS_AS(multinomial_coefficient_exact(2, MultiIndex{{3}}), ConfigError);
    CHECK_THROWS_AS(multinomial_coefficient_exact(2, MultiIndex{{-1, 1}}), ConfigError);
    CHECK_NOTHROW(multinomial_coefficient_exact(20, MultiIndex{{10, 10}}));
}

TEST_CASE("term names concatenate powered variables", "[multi_index]") {
    const std::vector<std::string> names = {"x1[t]", "x2[t]", "y[t-1]"};
    CHECK(term_name(MultiIndex{{0, 0, 0}}, names) == "const");
    CHECK(term_name(MultiIndex{{1, 0, 0}}, names) == "x1[t]");
    CHECK(term_name(MultiIndex{{0, 2, 0}}, names) == "x2[t]^2");
    CHECK(term_name(MultiIndex{{1, 1, 0}}, names) == "x1[t]*x2[t]");
    CHECK(term_name(MultiIndex{{0, 1, 2}}, names) == "x2[t]*y[t-1]^2");
    CHECK_THROWS_AS(term_name(MultiIndex{{1, 0}}, names), ConfigError);
}
