#ifndef IPL_TIMESERIES_HPP
#define IPL_TIMESERIES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ipl/common.hpp"
#include "ipl/rng.hpp"

namespace ipl {

/// Lag structure of the embedding: L_x past feature vectors and L_y past
/// target values are appended to each input.
struct LagSpec {
    int lx = 0;
    int ly = 0;

    int embedded_dim(int d) const { return d * (1 + lx) + ly; }
    int drop() const { return std::max(lx, ly); }

    bool operator==(const LagSpec&) const = default;
};

/// A raw time-ordered series: T feature rows, T targets, optional timestamp
/// labels. Row order is time order; numeric timestamps are validated as
/// monotone non-decreasing, non-numeric ones are carried as labels only.
struct RawSeries {
    std::vector<std::string> timestamps; // empty, or one label per row
    MatrixXd features;                   // T x d
    VectorXd targets;                    // T
    std::vector<std::string> feature_names;
    std::string target_name = "y";

    Eigen::Index rows() const { return features.rows(); }
    Eigen::Index dim() const { return features.cols(); }

    void validate() const {
        check_same_size(features.rows(), targets.size(), "RawSeries rows/targets");
        if (feature_names.size() != static_cast<std::size_t>(features.cols()))
            throw ConfigError("RawSeries: " + std::to_string(feature_names.size()) +
                              " feature names for " + std::to_string(features.cols()) +
                              " columns");
        if (!timestamps.empty() && timestamps.size() != static_cast<std::size_t>(features.rows()))
            throw ConfigError("RawSeries: timestamp count does not match row count");
        for (Eigen::Index i = 0; i < features.rows(); ++i) {
            if (!features.row(i).allFinite() || !std::isfinite(targets(i)))
                throw ConfigError("RawSeries: row " + std::to_string(i + 1) +
                                  " contains NaN or infinite values");
        }
    }
};

/// Time-aligned supervised rows after lag embedding: inputs hold current
/// features, lagged features, and lagged targets; names record origin and
/// lag (for example "x3[t]", "x1[t-2]", "y[t-1]").
struct SupervisedDataset {
    MatrixXd inputs; // rows x D
    VectorXd targets;
    std::vector<std::string> feature_names;
    std::vector<std::string> timestamps; // empty, or one per row
    std::string target_name = "y";

    Eigen::Index rows() const { return inputs.rows(); }
    Eigen::Index dim() const { return inputs.cols(); }

    SupervisedDataset slice(Eigen::Index start, Eigen::Index count) const {
        if (start < 0 || count < 0 || start + count > rows())
            throw ConfigError("SupervisedDataset::slice: range [" + std::to_string(start) +
                              ", " + std::to_string(start + count) + ") out of bounds");
        SupervisedDataset out;
        out.inputs = inputs.middleRows(start, count);
        out.targets = targets.segment(start, count);
        out.feature_names = feature_names;
        out.target_name = target_name;
        if (!timestamps.empty())
            out.timestamps.assign(timestamps.begin() + start, timestamps.begin() + start + count);
        return out;
    }
};

/// Builds the lag-embedded dataset: row for time i holds
/// (x_i, x_{i-1}, ..., x_{i-L_x}, y_{i-1}, ..., y_{i-L_y}) with target y_i.
/// The first max(L_x, L_y) rows have incomplete history and are dropped.
/// Inputs never touch data past time i, and targets enter only from earlier
/// times, so the embedding cannot leak the value being predicted.
inline SupervisedDataset lag_embed(const RawSeries& series, const LagSpec& spec) {
    if (spec.lx < 0 || spec.ly < 0) throw ConfigError("lag_embed: negative lag");
    series.validate();
    const Eigen::Index T = series.rows();
    const Eigen::Index d = series.dim();
    const Eigen::Index m = spec.drop();
    if (T <= m)
        throw ConfigError("lag_embed: need at least " + std::to_string(m + 1) +
                          " rows for lags (L_x=" + std::to_string(spec.lx) +
                          ", L_y=" + std::to_string(spec.ly) + "), got " + std::to_string(T));

    const Eigen::Index D = spec.embedded_dim(static_cast<int>(d));
    if (D == 0)
        throw ConfigError("lag_embed: no input columns; the series has no features and "
                          "L_y is 0");
    SupervisedDataset out;
    out.inputs.resize(T - m, D);
    out.targets.resize(T - m);
    out.target_name = series.target_name;

    for (int lag = 0; lag <= spec.lx; ++lag)
        for (Eigen::Index k = 0; k < d; ++k) {
            std::string name = series.feature_names[static_cast<std::size_t>(k)];
            name += (lag == 0) ? "[t]" : "[t-" + std::to_string(lag) + "]";
            out.feature_names.push_back(std::move(name));
        }
    for (int lag = 1; lag <= spec.ly; ++lag)
        out.feature_names.push_back(series.target_name + "[t-" + std::to_string(lag) + "]");

    for (Eigen::Index r = 0; r < T - m; ++r) {
        const Eigen::Index i = r + m;
        for (int lag = 0; lag <= spec.lx; ++lag)
            out.inputs.block(r, static_cast<Eigen::Index>(lag) * d, 1, d) =
                series.features.row(i - lag);
        for (int lag = 1; lag <= spec.ly; ++lag)
            out.inputs(r, d * (1 + spec.lx) + lag - 1) = series.targets(i - lag);
        out.targets(r) = series.targets(i);
    }
    if (!series.timestamps.empty())
        out.timestamps.assign(series.timestamps.begin() + m, series.timestamps.end());
    return out;
}

struct SplitResult {
    SupervisedDataset train;
    SupervisedDataset validation;
    SupervisedDataset test;
};

/// Contiguous chronological split. Blocks are anchored at the end of the
/// series so the test block is always the most recent data; when the counts
/// do not cover every row, the oldest rows are dropped.
inline SplitResult chronological_split(const SupervisedDataset& data, Eigen::Index n_train,
                                       Eigen::Index n_val, Eigen::Index n_test) {
    if (n_train < 0 || n_val < 0 || n_test < 0)
        throw ConfigError("chronological_split: negative block size");
    const Eigen::Index total = n_train + n_val + n_test;
    if (total > data.rows())
        throw ConfigError("chronological_split: blocks need " + std::to_string(total) +
                          " rows, dataset has " + std::to_string(data.rows()));
    const Eigen::Index start = data.rows() - total;
    SplitResult out;
    out.train = data.slice(start, n_train);
    out.validation = data.slice(start + n_train, n_val);
    out.test = data.slice(start + n_train + n_val, n_test);
    return out;
}

/// Fraction-based variant; the test block absorbs rounding remainders.
inline SplitResult chronological_split_fractions(const SupervisedDataset& data, double f_train,
                                                 double f_val) {
    if (f_train < 0 || f_val < 0 || f_train + f_val > 1.0)
        throw ConfigError("chronological_split: fractions must be non-negative with sum <= 1");
    const auto n_train = static_cast<Eigen::Index>(std::floor(f_train * static_cast<double>(data.rows())));
    const auto n_val = static_cast<Eigen::Index>(std::floor(f_val * static_cast<double>(data.rows())));
    return chronological_split(data, n_train, n_val, data.rows() - n_train - n_val);
}

/// Direction labels: +1 iff the price k steps ahead strictly exceeds the
/// current price, else -1. The last k rows have no lookahead and are dropped.
inline VectorXd make_direction_targets(const Eigen::Ref<const VectorXd>& prices, int k) {
    if (k < 1) throw ConfigError("make_direction_targets: horizon must be >= 1");
    if (prices.size() <= k)
        throw ConfigError("make_direction_targets: need more than " + std::to_string(k) +
                          " prices, got " + std::to_string(prices.size()));
    check_finite(prices, "make_direction_targets: prices");
    VectorXd labels(prices.size() - k);
    for (Eigen::Index t = 0; t < labels.size(); ++t)
        labels(t) = prices(t + k) > prices(t) ? 1.0 : -1.0;
    return labels;
}

/// Rewrites a price series as a direction-classification series: targets
/// become the k-step direction labels and the unlabelable tail is dropped.
inline RawSeries make_direction_series(const RawSeries& series, int k) {
    series.validate();
    VectorXd labels = make_direction_targets(series.targets, k);
    RawSeries out;
    out.features = series.features.topRows(labels.size());
    out.targets = labels;
    out.feature_names = series.feature_names;
    out.target_name = "Target_" + std::to_string(k) + "period";
    if (!series.timestamps.empty())
        out.timestamps.assign(series.timestamps.begin(), series.timestamps.begin() + labels.size());
    return out;
}

/// Keeps rows 0, stride, 2*stride, ... of the series, thinning an
/// oversampled recording before any lag embedding.
inline RawSeries subsample_series(const RawSeries& series, int stride) {
    if (stride < 1) throw ConfigError("subsample stride must be >= 1");
    series.validate();
    if (stride == 1) return series;
    const Eigen::Index kept = (series.rows() + stride - 1) / stride;
    RawSeries out;
    out.features.resize(kept, series.dim());
    out.targets.resize(kept);
    out.feature_names = series.feature_names;
    out.target_name = series.target_name;
    for (Eigen::Index i = 0; i < kept; ++i) {
        const Eigen::Index src = i * stride;
        out.features.row(i) = series.features.row(src);
        out.targets(i) = series.targets(src);
        if (!series.timestamps.empty())
            out.timestamps.push_back(series.timestamps[static_cast<std::size_t>(src)]);
    }
    return out;
}

struct PerturbResult {
    SupervisedDataset data;
    bool warned_constant = false;
};

/// Adds alpha_p * N(0, sigma_j^2) noise to embedded column j, where sigma_j
/// is the column's sample standard deviation; every other column is copied
/// bit-identically. A constant column comes back unchanged with a warning
/// flag instead of an error.
inline PerturbResult perturb_feature(const SupervisedDataset& data, Eigen::Index feature_index,
                                     double alpha_p, std::uint64_t seed) {
    if (feature_index < 0 || feature_index >= data.dim())
        throw ConfigError("perturb_feature: feature index " + std::to_string(feature_index) +
                          " out of range for " + std::to_string(data.dim()) + " columns");
    if (alpha_p < 0) throw ConfigError("perturb_feature: negative perturbation level");
    if (data.rows() < 2) throw ConfigError("perturb_feature: need at least 2 rows");

    PerturbResult out;
    out.data = data;
    if (alpha_p == 0.0) return out;

    const auto col = data.inputs.col(feature_index);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().sum() / static_cast<double>(data.rows() - 1);
    if (var <= 0.0) {
        out.warned_constant = true;
        return out;
    }
    const double sd = std::sqrt(var);
    Rng rng(seed);
    for (Eigen::Index i = 0; i < data.rows(); ++i)
        out.data.inputs(i, feature_index) += alpha_p * rng.normal(0.0, sd);
    return out;
}

} // namespace ipl

#endif // IPL_TIMESERIES_HPP
