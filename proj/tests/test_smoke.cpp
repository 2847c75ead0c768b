#include <catch_amalgamated.hpp>

#include "ipl/ipl.hpp"

TEST_CASE("library headers compile and basic plumbing works", "[smoke]") {
    using namespace ipl;
    CHECK(polynomial_space_dimension(2, 2) == 6);
    CHECK(format_double(0.5) == "0.5");
    Rng rng(1);
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
}
