#include <catch_amalgamated.hpp>

#include <cmath>

#include "ipl/kernel.hpp"
#include "ipl/rng.hpp"
#include "support/oracles.hpp"

using namespace ipl;

namespace {

CenterSet wrap_centers(const Eigen::MatrixXd& m) {
    CenterSet cs;
    cs.centers = m;
    return cs;
}

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform01();
    return m;
}

} // namespace

TEST_CASE("kernel value is the powered shifted dot product", "[kernel]") {
    Eigen::VectorXd x(2), eta(2);
    x << 1.0, 2.0;
    eta << 3.0, 4.0;
    CHECK(kernel_eval(x, eta, 2) == 144.0); // (1 + 3 + 8)^2
    CHECK(kernel_eval(x, eta, 1) == 12.0);
    CHECK(kernel_eval(x, eta, 3) == 1728.0);
    Rng rng(2);
    for (int i = 0; i < 200; ++i) {
        Eigen::VectorXd a(3), b(3);
        for (int k = 0; k < 3; ++k) {
            a(k) = rng.uniform(-2, 2);
            b(k) = rng.uniform(-2, 2);
        }
        const int s = 1 + static_cast<int>(rng.uniform_int(4));
        CHECK(kernel_eval(a, b, s) ==
              Catch::Approx(std::pow(1.0 + a.dot(b), s)).epsilon(1e-12));
    }
}

TEST_CASE("kernel matrix equals elementwise evaluation, any thread count", "[kernel]") {
    const auto X = random_matrix(40, 3, 1);
    const auto C = random_matrix(10, 3, 2);
    const Eigen::MatrixXd K1 = kernel_matrix(X, wrap_centers(C), 2, 1);
    REQUIRE(K1.rows() == 40);
    REQUIRE(K1.cols() == 10);
    for (Eigen::Index i = 0; i < K1.rows(); ++i)
        for (Eigen::Index j = 0; j < K1.cols(); ++j)
            CHECK(K1(i, j) == kernel_eval(X.row(i).transpose(), C.row(j).transpose(), 2));
    const Eigen::MatrixXd K4 = kernel_matrix(X, wrap_centers(C), 2, 4);
    CHECK(K1 == K4); // bitwise
}

TEST_CASE("first-sample centers are the leading rows", "[kernel]") {
    const auto X = random_matrix(30, 2, 3);
    const CenterSet cs = build_centers(X, 2);
    CHECK(cs.n() == 6); // C(2+2, 2)
    CHECK(cs.strategy == CenterStrategy::FirstSamples);
    CHECK(cs.centers == X.topRows(6));
}

TEST_CASE("subsampled centers are distinct rows of X in time order", "[kernel]") {
    const auto X = random_matrix(50, 2, 4);
    const CenterSet cs = build_centers(X, 2, CenterStrategy::RandomSubsample, 9);
    REQUIRE(cs.n() == 6);
    Eigen::Index prev = -1;
    for (Eigen::Index j = 0; j < cs.n(); ++j) {
        Eigen::Index found = -1;
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            if (X.row(i) == cs.centers.row(j)) {
                found = i;
                break;
            }
        REQUIRE(found >= 0);
        CHECK(found > prev); // strictly increasing source index
        prev = found;
    }
    const CenterSet again = build_centers(X, 2, CenterStrategy::RandomSubsample, 9);
    CHECK(again.centers == cs.centers);
    const CenterSet other = build_centers(X, 2, CenterStrategy::RandomSubsample, 10);
    CHECK(other.centers != cs.centers);
}

TEST_CASE("uniform centers stay inside the per-feature box", "[kernel]") {
    auto X = random_matrix(25, 3, 5);
    X.col(1) *= 10.0;
    const CenterSet cs = build_centers(X, 2, CenterStrategy::RandomUniform, 1);
    REQUIRE(cs.n() == 10); // C(3+2, 2)
    for (Eigen::Index j = 0; j < cs.n(); ++j)
        for (Eigen::Index k = 0; k < 3; ++k) {
            CHECK(cs.centers(j, k) >= X.col(k).minCoeff());
            CHECK(cs.centers(j, k) <= X.col(k).maxCoeff());
        }
    CHECK(build_centers(X, 2, CenterStrategy::RandomUniform, 1).centers == cs.centers);
}

TEST_CASE("center construction needs enough rows", "[kernel]") {
    const auto X = random_matrix(5, 2, 6);
    CHECK_THROWS_WITH(build_centers(X, 2), Catch::Matchers::ContainsSubstring("6"));
    CHECK_THROWS_AS(build_centers(X, 2, CenterStrategy::RandomSubsample, 1), ConfigError);
    CHECK_NOTHROW(build_centers(X, 2, CenterStrategy::RandomUniform, 1)); // draws, no rows needed
}

TEST_CASE("fundamental system check agrees with an LU rank oracle", "[kernel]") {
    const auto X = random_matrix(40, 2, 7);
    const CenterSet good = build_centers(X, 2);
    const auto check = validate_fundamental_system(good, 2);
    CHECK(check.required == 6);
    CHECK(check.is_fundamental);
    CHECK(check.rank == 6);
    const Eigen::MatrixXd gram = kernel_matrix(good.centers, good, 2);
    CHECK(oracles::lu_rank(gram) == check.rank);

    Eigen::MatrixXd dup = good.centers;
    dup.row(5) = dup.row(0); // duplicate center: no longer a fundamental system
    const auto bad = validate_fundamental_system(wrap_centers(dup), 2);
    CHECK_FALSE(bad.is_fundamental);
    CHECK(bad.rank < 6);
    const Eigen::MatrixXd gram_bad = kernel_matrix(dup, wrap_centers(dup), 2);
    CHECK(oracles::lu_rank(gram_bad) == bad.rank);
    CHECK(bad.sigma_min <= bad.sigma_max);
}

TEST_CASE("center strategy names round-trip", "[kernel]") {
    for (auto s : {CenterStrategy::FirstSamples, CenterStrategy::RandomUniform,
                   CenterStrategy::RandomSubsample})
        CHECK(center_strategy_from_string(to_string(s)) == s);
    CHECK_THROWS_AS(center_strategy_from_string("bogus"), ConfigError);
}
