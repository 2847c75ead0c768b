#ifndef IPL_SIMULATE_HPP
#define IPL_SIMULATE_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ipl/common.hpp"
#include "ipl/model.hpp"
#include "ipl/rng.hpp"
#include "ipl/timeseries.hpp"

namespace ipl {

struct SimulateOptions {
    Eigen::Index t_train = 4000;
    Eigen::Index t_test = 1000;
    std::uint64_t seed = 0;
    bool include_temporal = true; // cos(y_{t-1}) * sin(y_{t-2}) recursion term
    double noise_sd = 0.1;        // train-only; test targets are noiseless
    bool add_irrelevant = false;  // append x6 ~ U[0,1], absent from the target
};

struct SimulatedData {
    RawSeries train;
    RawSeries test;
    SparsePolynomial truth; // generating polynomial, raw [0,1]^d space
};

namespace detail {

/// The generating polynomial
/// f(x) = (1 + x1 + 2 x2 + 3 x3 + 4 x4 + 5 x5 + 6 x1 x2 - 7 x3 x4) / 15
/// as an explicit term list over d >= 5 variables (extra variables, such as
/// an appended irrelevant x6, simply never appear).
inline SparsePolynomial simulated_truth(int d) {
    if (d < 5) throw ConfigError("simulated_truth: needs at least 5 variables");
    auto idx = [d](std::initializer_list<int> vars) {
        MultiIndex m;
        m.exponents.assign(static_cast<std::size_t>(d), 0);
        for (int v : vars) m.exponents[static_cast<std::size_t>(v)] += 1;
        return m;
    };
    SparsePolynomial truth;
    truth.degree = 2;
    truth.threshold = 0.0;
    for (int k = 0; k < d; ++k) truth.feature_names.push_back("x" + std::to_string(k + 1));
    truth.terms = {
        {idx({}), 1.0 / 15.0},     {idx({0}), 1.0 / 15.0},    {idx({1}), 2.0 / 15.0},
        {idx({2}), 3.0 / 15.0},    {idx({3}), 4.0 / 15.0},    {idx({4}), 5.0 / 15.0},
        {idx({0, 1}), 6.0 / 15.0}, {idx({2, 3}), -7.0 / 15.0},
    };
    return truth;
}

} // namespace detail

/// Simulated forecasting task: features x_t are i.i.d. uniform on [0,1]^5
/// (plus an optional irrelevant x6) and targets follow
///   y_t = cos(y_{t-1}) sin(y_{t-2}) + f(x_t) + eps_t,
/// with the recursion seeded at y_0 = y_{-1} = 0 and eps ~ N(0, noise_sd^2)
/// on training rows only; the test block continues the recursion without
/// noise. include_temporal=false drops the cos*sin term, which makes targets
/// a pure polynomial of the current features - the exact-recovery setting.
/// Feature draws and noise draws come from separate seed streams, so the
/// same seed yields the same inputs whether or not noise is enabled.
inline SimulatedData simulate_forecasting_task(const SimulateOptions& opt) {
    if (opt.t_train < 3 || opt.t_test < 0)
        throw ConfigError("simulate_forecasting_task: need at least 3 training rows");
    if (opt.noise_sd < 0) throw ConfigError("simulate_forecasting_task: negative noise level");

    const int d = opt.add_irrelevant ? 6 : 5;
    SimulatedData out;
    out.truth = detail::simulated_truth(d);

    Rng feature_rng(derive_seed(opt.seed, 1));
    Rng noise_rng(derive_seed(opt.seed, 2));

    double y_prev = 0.0, y_prev2 = 0.0;
    auto generate = [&](Eigen::Index T, bool noisy) {
        RawSeries series;
        series.features.resize(T, d);
        series.targets.resize(T);
        series.feature_names = out.truth.feature_names;
        series.target_name = "y";
        VectorXd x(d);
        for (Eigen::Index t = 0; t < T; ++t) {
            for (int k = 0; k < d; ++k) x(k) = feature_rng.uniform01();
            series.features.row(t) = x;
            double y = predict_sparse(out.truth, x);
            if (opt.include_temporal) y += std::cos(y_prev) * std::sin(y_prev2);
            if (noisy && opt.noise_sd > 0) y += noise_rng.normal(0.0, opt.noise_sd);
            series.targets(t) = y;
            y_prev2 = y_prev;
            y_prev = y;
        }
        return series;
    };

    out.train = generate(opt.t_train, true);
    out.test = generate(opt.t_test, false);
    return out;
}

} // namespace ipl

#endif // IPL_SIMULATE_HPP
