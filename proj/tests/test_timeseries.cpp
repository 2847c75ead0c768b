#include <catch_amalgamated.hpp>

#include <cmath>

#include "ipl/timeseries.hpp"

using namespace ipl;

namespace {

RawSeries toy_series() {
    RawSeries s;
    s.features.resize(5, 1);
    s.features << 10, 11, 12, 13, 14;
    s.targets.resize(5);
    s.targets << 100, 101, 102, 103, 104;
    s.feature_names = {"x"};
    s.target_name = "y";
    s.timestamps = {"a", "b", "c", "d", "e"};
    return s;
}

} // namespace

TEST_CASE("lag embedding, worked through by hand", "[timeseries]") {
    const SupervisedDataset d = lag_embed(toy_series(), LagSpec{1, 2});
    REQUIRE(d.rows() == 3); // drops max(1, 2) = 2 leading rows
    CHECK(d.feature_names ==
          std::vector<std::string>{"x[t]", "x[t-1]", "y[t-1]", "y[t-2]"});
    Eigen::MatrixXd expect(3, 4);
    expect << 12, 11, 101, 100,
              13, 12, 102, 101,
              14, 13, 103, 102;
    CHECK(d.inputs == expect);
    Eigen::VectorXd ty(3);
    ty << 102, 103, 104;
    CHECK(d.targets == ty);
    CHECK(d.timestamps == std::vector<std::string>{"c", "d", "e"});
    CHECK(d.target_name == "y");
}

TEST_CASE("zero lags embed the series unchanged", "[timeseries]") {
    const SupervisedDataset d = lag_embed(toy_series(), LagSpec{});
    CHECK(d.rows() == 5);
    CHECK(d.feature_names == std::vector<std::string>{"x[t]"});
    CHECK(d.inputs.col(0) == toy_series().features.col(0));
    CHECK(d.targets == toy_series().targets);
}

TEST_CASE("embedding failure modes", "[timeseries]") {
    CHECK_THROWS_AS(lag_embed(toy_series(), LagSpec{0, 5}), ConfigError);
    CHECK_THROWS_AS(lag_embed(toy_series(), LagSpec{-1, 0}), ConfigError);
    RawSeries no_features = toy_series();
    no_features.features.resize(5, 0);
    no_features.feature_names.clear();
    CHECK_THROWS_AS(lag_embed(no_features, LagSpec{0, 0}), ConfigError);
    CHECK_NOTHROW(lag_embed(no_features, LagSpec{0, 1}));
    RawSeries bad = toy_series();
    bad.features(2, 0) = std::nan("");
    CHECK_THROWS_WITH(bad.validate(), Catch::Matchers::ContainsSubstring("3"));
}

TEST_CASE("chronological split keeps the most recent rows for test", "[timeseries]") {
    const SupervisedDataset d = lag_embed(toy_series(), LagSpec{});
    const SplitResult sp = chronological_split(d, 2, 1, 2);
    CHECK(sp.train.rows() == 2);
    CHECK(sp.validation.rows() == 1);
    CHECK(sp.test.rows() == 2);
    CHECK(sp.train.timestamps == std::vector<std::string>{"a", "b"});
    CHECK(sp.validation.timestamps == std::vector<std::string>{"c"});
    CHECK(sp.test.timestamps == std::vector<std::string>{"d", "e"});

    // counts that under-cover drop the oldest rows, never the newest
    const SplitResult sp2 = chronological_split(d, 1, 1, 2);
    CHECK(sp2.train.timestamps == std::vector<std::string>{"b"});
    CHECK(sp2.test.timestamps == std::vector<std::string>{"d", "e"});

    // an empty validation block is fine; negative or over-long blocks are not
    CHECK(chronological_split(d, 2, 0, 3).validation.rows() == 0);
    CHECK_THROWS_AS(chronological_split(d, 4, 1, 2), ConfigError);
    CHECK_THROWS_AS(chronological_split(d, -1, 1, 2), ConfigError);
}

TEST_CASE("fractional split floors train and validation", "[timeseries]") {
    RawSeries s;
    s.features.resize(10, 1);
    s.targets.resize(10);
    for (int i = 0; i < 10; ++i) {
        s.features(i, 0) = i;
        s.targets(i) = i;
    }
    s.feature_names = {"x"};
    const SupervisedDataset d = lag_embed(s, LagSpec{});
    const SplitResult sp = chronological_split_fractions(d, 0.6, 0.2);
    CHECK(sp.train.rows() == 6);
    CHECK(sp.validation.rows() == 2);
    CHECK(sp.test.rows() == 2);
    CHECK(sp.test.targets(1) == 9.0);
}

TEST_CASE("direction labels use a strict comparison", "[timeseries]") {
    Eigen::VectorXd prices(4);
    prices << 1, 2, 2, 1;
    const Eigen::VectorXd lab = make_direction_targets(prices, 1);
    REQUIRE(lab.size() == 3);
    CHECK(lab(0) == 1.0);  // 2 > 1
    CHECK(lab(1) == -1.0); // 2 > 2 is false
    CHECK(lab(2) == -1.0); // 1 > 2 is false
    const Eigen::VectorXd lab2 = make_direction_targets(prices, 3);
    REQUIRE(lab2.size() == 1);
    CHECK(lab2(0) == -1.0); // 1 > 1 is false
    CHECK_THROWS_AS(make_direction_targets(prices, 4), ConfigError);
    CHECK_THROWS_AS(make_direction_targets(prices, 0), ConfigError);
}

TEST_CASE("direction series renames the target and trims rows", "[timeseries]") {
    const RawSeries d = make_direction_series(toy_series(), 2);
    CHECK(d.target_name == "Target_2period");
    CHECK(d.rows() == 3);
    CHECK(d.targets(0) == 1.0); // 102 > 100
    CHECK(d.timestamps == std::vector<std::string>{"a", "b", "c"});
    CHECK(d.features == toy_series().features.topRows(3));
}

TEST_CASE("subsampling keeps every stride-th row from the start", "[timeseries]") {
    const RawSeries d = subsample_series(toy_series(), 2);
    CHECK(d.rows() == 3);
    CHECK(d.features(0, 0) == 10);
    CHECK(d.features(1, 0) == 12);
    CHECK(d.features(2, 0) == 14);
    CHECK(d.timestamps == std::vector<std::string>{"a", "c", "e"});
    CHECK(subsample_series(toy_series(), 1).features == toy_series().features);
    CHECK_THROWS_AS(subsample_series(toy_series(), 0), ConfigError);
}

TEST_CASE("perturbation noises exactly one column", "[timeseries]") {
    SupervisedDataset d;
    const int T = 4000;
    d.inputs.resize(T, 3);
    d.targets.resize(T);
    Rng rng(1);
    for (int i = 0; i < T; ++i) {
        d.inputs(i, 0) = rng.uniform01();
        d.inputs(i, 1) = rng.normal(0, 2.0);
        d.inputs(i, 2) = 5.0; // constant
        d.targets(i) = rng.uniform01();
    }
    d.feature_names = {"a", "b", "c"};

    const PerturbResult zero = perturb_feature(d, 1, 0.0, 99);
    CHECK(zero.data.inputs == d.inputs);
    CHECK_FALSE(zero.warned_constant);

    const PerturbResult p = perturb_feature(d, 1, 0.5, 99);
    CHECK(p.data.inputs.col(0) == d.inputs.col(0));
    CHECK(p.data.inputs.col(2) == d.inputs.col(2));
    CHECK(p.data.targets == d.targets);
    const Eigen::VectorXd delta = p.data.inputs.col(1) - d.inputs.col(1);
    CHECK(delta.cwiseAbs().maxCoeff() > 0.0);
    // noise sd should be near alpha * column sd = 0.5 * 2
    const double sd = std::sqrt(delta.squaredNorm() / (T - 1));
    CHECK(sd == Catch::Approx(1.0).epsilon(0.1));

    // same seed reproduces, different seed does not
    CHECK(perturb_feature(d, 1, 0.5, 99).data.inputs == p.data.inputs);
    CHECK(perturb_feature(d, 1, 0.5, 100).data.inputs != p.data.inputs);

    const PerturbResult c = perturb_feature(d, 2, 0.5, 1);
    CHECK(c.warned_constant);
    CHECK(c.data.inputs == d.inputs);

    CHECK_THROWS_AS(perturb_feature(d, 3, 0.5, 1), ConfigError);
    CHECK_THROWS_AS(perturb_feature(d, 1, -0.1, 1), ConfigError);
}
