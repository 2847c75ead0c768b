#include <catch_amalgamated.hpp>

#include "ipl/scaling.hpp"

using namespace ipl;

TEST_CASE("min-max scaling maps the observed range onto [0, 1]", "[scaling]") {
    Eigen::MatrixXd X(3, 2);
    X << 1.0, 10.0,
         3.0, 20.0,
         2.0, 15.0;
    const MinMaxScaling sc = MinMaxScaling::fit(X);
    CHECK(sc.min(0) == 1.0);
    CHECK(sc.max(0) == 3.0);
    CHECK(sc.min(1) == 10.0);
    CHECK(sc.max(1) == 20.0);
    const Eigen::MatrixXd S = sc.apply(X);
    CHECK(S(0, 0) == 0.0);
    CHECK(S(1, 0) == 1.0);
    CHECK(S(2, 0) == 0.5);
    CHECK(S(0, 1) == 0.0);
    CHECK(S(1, 1) == 1.0);
    CHECK(S(2, 1) == 0.5);
}

TEST_CASE("a constant column scales to zero instead of dividing by zero", "[scaling]") {
    Eigen::MatrixXd X(3, 2);
    X << 4.0, 1.0,
         4.0, 2.0,
         4.0, 3.0;
    const MinMaxScaling sc = MinMaxScaling::fit(X);
    const Eigen::MatrixXd S = sc.apply(X);
    for (int i = 0; i < 3; ++i) {
        CHECK(S(i, 0) == 0.0);
        CHECK(std::isfinite(S(i, 1)));
    }
}

TEST_CASE("vector and matrix application agree", "[scaling]") {
    Eigen::MatrixXd X(4, 3);
    X << 0, 5, -1, 2, 6, -2, 1, 7, 0, 3, 8, 4;
    const MinMaxScaling sc = MinMaxScaling::fit(X);
    const Eigen::MatrixXd S = sc.apply(X);
    for (int i = 0; i < 4; ++i) {
        const Eigen::VectorXd row = sc.apply(Eigen::VectorXd(X.row(i).transpose()));
        CHECK(row.transpose() == S.row(i));
    }
    const Eigen::VectorXd short_vec = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_AS(sc.apply(short_vec), ConfigError);
}

TEST_CASE("scaling an empty feature block is a no-op", "[scaling]") {
    Eigen::MatrixXd X(5, 0);
    const MinMaxScaling sc = MinMaxScaling::fit(X);
    CHECK(sc.dim() == 0);
    CHECK(sc.apply(X).rows() == 5);
    CHECK(sc.apply(X).cols() == 0);
}
