#include <catch_amalgamated.hpp>

#include <cmath>

#include "ipl/model.hpp"
#include "ipl/rng.hpp"

using namespace ipl;

namespace {

// A syntactically valid model with random centers and weights; weights need
// not come from a fit for the expansion identity to hold.
KernelModel random_model(int dim, int degree, std::uint64_t seed, bool with_scaling) {
    Rng rng(seed);
    KernelModel m;
    m.degree = degree;
    m.loss = Loss::Squared;
    const auto n = polynomial_space_dimension(dim, degree);
    m.centers.centers.resize(n, dim);
    for (Eigen::Index i = 0; i < n; ++i)
        for (int k = 0; k < dim; ++k) m.centers.centers(i, k) = rng.uniform(-1, 1);
    m.weights.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) m.weights(i) = rng.normal();
    for (int k = 0; k < dim; ++k) m.feature_names.push_back("f" + std::to_string(k + 1));
    if (with_scaling) {
        MinMaxScaling sc;
        sc.min.resize(dim);
        sc.max.resize(dim);
        for (int k = 0; k < dim; ++k) {
            sc.min(k) = rng.uniform(-2, 0);
            sc.max(k) = sc.min(k) + rng.uniform(0.5, 2.0);
        }
        m.scaling = sc;
    }
    return m;
}

} // namespace

TEST_CASE("degree-1 expansion in one variable, by algebra", "[model]") {
    KernelModel m;
    m.degree = 1;
    m.centers.centers.resize(2, 1);
    m.centers.centers << 3.0, -2.0;
    m.weights.resize(2);
    m.weights << 0.5, 4.0;
    m.feature_names = {"x"};
    // f(x) = 0.5(1 + 3x) + 4(1 - 2x) = 4.5 - 6.5x
    const SparsePolynomial p = expand_to_monomials(m);
    REQUIRE(p.terms.size() == 2);
    CHECK(p.terms[0].index.exponents == std::vector<int>{0});
    CHECK(p.terms[0].coefficient == Catch::Approx(4.5).epsilon(1e-14));
    CHECK(p.terms[1].index.exponents == std::vector<int>{1});
    CHECK(p.terms[1].coefficient == Catch::Approx(-6.5).epsilon(1e-14));
}

TEST_CASE("degree-2 expansion in one variable, by algebra", "[model]") {
    KernelModel m;
    m.degree = 2;
    m.centers.centers.resize(3, 1);
    m.centers.centers << 1.0, 2.0, 0.5;
    m.weights.resize(3);
    m.weights << 1.0, -1.0, 2.0;
    m.feature_names = {"x"};
    // sum_j u_j (1 + a_j x)^2: const = sum u_j, linear = 2 sum u_j a_j,
    // square = sum u_j a_j^2
    const SparsePolynomial p = expand_to_monomials(m);
    REQUIRE(p.terms.size() == 3);
    CHECK(p.terms[0].coefficient == Catch::Approx(1.0 - 1.0 + 2.0).epsilon(1e-14));
    CHECK(p.terms[1].coefficient ==
          Catch::Approx(2.0 * (1.0 - 2.0 + 1.0)).margin(1e-14));
    CHECK(p.terms[2].coefficient ==
          Catch::Approx(1.0 - 4.0 + 0.5).epsilon(1e-14));
}

TEST_CASE("kernel and expanded forms agree at random points", "[model]") {
    Rng rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        const int dim = 1 + static_cast<int>(rng.uniform_int(8));
        const int degree = 1 + static_cast<int>(rng.uniform_int(3));
        const bool scaled = rng.uniform01() < 0.5;
        const KernelModel m = random_model(dim, degree, 1000 + trial, scaled);
        const SparsePolynomial p = expand_to_monomials(m);
        for (int pt = 0; pt < 40; ++pt) {
            Eigen::VectorXd x(dim);
            for (int k = 0; k < dim; ++k) x(k) = rng.uniform(-1.5, 1.5);
            const double kv = predict_kernel(m, x);
            const double sv = predict_sparse(p, x);
            REQUIRE(std::abs(kv - sv) <= 1e-8 * (1.0 + std::abs(kv)));
        }
    }
}

TEST_CASE("expansion terms arrive in enumeration order", "[model]") {
    const KernelModel m = random_model(3, 2, 5, false);
    const SparsePolynomial p = expand_to_monomials(m);
    const auto expect = enumerate_multi_indices(3, 2);
    REQUIRE(p.terms.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i)
        CHECK(p.terms[i].index == expect[i]);
    CHECK(p.degree == 2);
    CHECK(p.feature_names == m.feature_names);
}

TEST_CASE("expansion is identical for any thread count", "[model]") {
    const KernelModel m = random_model(5, 3, 6, true);
    const SparsePolynomial p1 = expand_to_monomials(m, 1);
    const SparsePolynomial p4 = expand_to_monomials(m, 4);
    REQUIRE(p1.terms.size() == p4.terms.size());
    for (std::size_t i = 0; i < p1.terms.size(); ++i)
        CHECK(p1.terms[i].coefficient == p4.terms[i].coefficient); // bitwise
}

TEST_CASE("thresholding keeps exactly the large terms, in order", "[model]") {
    const KernelModel m = random_model(4, 2, 7, false);
    const SparsePolynomial full = expand_to_monomials(m);
    const SparsePolynomial cut = apply_threshold(full, 0.3);
    CHECK(cut.threshold == 0.3);
    for (const auto& t : cut.terms) CHECK(std::abs(t.coefficient) >= 0.3);
    // every kept term appears in the full expansion with the same value
    std::size_t pos = 0;
    for (const auto& t : cut.terms) {
        while (pos < full.terms.size() && !(full.terms[pos].index == t.index)) ++pos;
        REQUIRE(pos < full.terms.size());
        CHECK(full.terms[pos].coefficient == t.coefficient);
    }
    // a larger threshold keeps a subset
    const SparsePolynomial tighter = apply_threshold(full, 0.6);
    for (const auto& t : tighter.terms) {
        bool found = false;
        for (const auto& u : cut.terms) found = found || (u.index == t.index);
        CHECK(found);
    }
    CHECK(apply_threshold(full, 0.0).terms.size() == full.terms.size());
    CHECK_THROWS_AS(apply_threshold(full, -1.0), ConfigError);
}

TEST_CASE("scaled models score raw inputs", "[model]") {
    // against a manually scaled twin: same centers/weights, no scaling field,
    // fed pre-scaled points
    const KernelModel scaled = random_model(3, 2, 8, true);
    KernelModel bare = scaled;
    bare.scaling.reset();
    Rng rng(9);
    for (int i = 0; i < 50; ++i) {
        Eigen::VectorXd x(3);
        for (int k = 0; k < 3; ++k) x(k) = rng.uniform(-3, 3);
        const Eigen::VectorXd xs = scaled.scaling->apply(x);
        CHECK(predict_kernel(scaled, x) == predict_kernel(bare, xs));
    }
}

TEST_CASE("batch prediction equals pointwise prediction", "[model]") {
    const KernelModel m = random_model(4, 2, 10, true);
    const SparsePolynomial p = expand_to_monomials(m);
    Rng rng(11);
    Eigen::MatrixXd X(30, 4);
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (int k = 0; k < 4; ++k) X(i, k) = rng.uniform(-1, 1);
    const Eigen::VectorXd kb = predict_kernel(m, X);
    const Eigen::VectorXd sb = predict_sparse(p, X);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        CHECK(kb(i) == predict_kernel(m, Eigen::VectorXd(X.row(i).transpose())));
        CHECK(sb(i) == predict_sparse(p, Eigen::VectorXd(X.row(i).transpose())));
    }
    CHECK(predict_kernel(m, X, 4) == kb);
    CHECK(predict_sparse(p, X, 4) == sb);
}

TEST_CASE("monomial feature matrix holds plain products of powers", "[model]") {
    Eigen::MatrixXd X(3, 2);
    X << 2, 3,
         0.5, -1,
         1, 4;
    std::vector<MultiIndex> terms = {MultiIndex{{1, 0}}, MultiIndex{{1, 1}}, MultiIndex{{0, 2}}};
    const Eigen::MatrixXd F = monomial_features(X, std::nullopt, terms);
    REQUIRE(F.rows() == 3);
    REQUIRE(F.cols() == 3);
    CHECK(F(0, 0) == 2.0);
    CHECK(F(0, 1) == 6.0);
    CHECK(F(0, 2) == 9.0);
    CHECK(F(1, 1) == -0.5);
    CHECK(F(2, 2) == 16.0);
    CHECK(monomial_features(X, std::nullopt, terms, 4) == F);
}

TEST_CASE("classification helpers", "[model]") {
    CHECK(classify_score(0.0) == 1.0);
    CHECK(classify_score(1e-300) == 1.0);
    CHECK(classify_score(-1e-300) == -1.0);
    for (auto l : {Loss::Squared, Loss::Hinge, Loss::Logistic})
        CHECK(loss_from_string(to_string(l)) == l);
    CHECK_THROWS_AS(loss_from_string("huber"), ConfigError);
}

TEST_CASE("model validation catches inconsistent shapes", "[model]") {
    KernelModel m = random_model(3, 2, 12, false);
    CHECK_NOTHROW(m.validate());
    m.weights.resize(3);
    CHECK_THROWS_AS(m.validate(), ConfigError);
}
