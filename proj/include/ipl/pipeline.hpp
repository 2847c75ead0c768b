#ifndef IPL_PIPELINE_HPP
#define IPL_PIPELINE_HPP

#include <chrono>
#include <cstdint>
#include <string>
#include <utility>

#include "ipl/admm.hpp"
#include "ipl/common.hpp"
#include "ipl/interpret.hpp"
#include "ipl/kernel.hpp"
#include "ipl/model.hpp"
#include "ipl/scaling.hpp"
#include "ipl/timeseries.hpp"

namespace ipl {

enum class SolverChoice { Auto, Pinv, Admm };

inline std::string to_string(SolverChoice s) {
    switch (s) {
        case SolverChoice::Auto: return "auto";
        case SolverChoice::Pinv: return "pinv";
        case SolverChoice::Admm: return "admm";
    }
    throw ConfigError("unknown solver");
}

inline SolverChoice solver_from_string(const std::string& s) {
    if (s == "auto") return SolverChoice::Auto;
    if (s == "pinv") return SolverChoice::Pinv;
    if (s == "admm") return SolverChoice::Admm;
    throw ConfigError("unknown solver '" + s + "' (expected auto, pinv, or admm)");
}

struct FitOptions {
    int degree = 2;
    Loss loss = Loss::Squared;
    LagSpec lag;
    double threshold = 0.0;
    bool scale = true;
    CenterStrategy center_strategy = CenterStrategy::FirstSamples;
    std::uint64_t center_seed = 0;
    // Auto resolves to the analytic least-squares path for squared loss and
    // the splitting solver for hinge/logistic.
    SolverChoice solver = SolverChoice::Auto;
    AdmmConfig admm;
    int threads = 1;
};

struct FitOutcome {
    KernelModel model;
    SparsePolynomial sparse; // thresholded expansion
    FitReport report;
    std::string solver_used;
    double wall_seconds = 0.0;
};

/// End-to-end fit on an embedded dataset: scale, pick centers, build the
/// kernel matrix, solve for the weights, expand, threshold.
inline FitOutcome fit_supervised(const SupervisedDataset& data, const FitOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    if (opt.degree < 1) throw ConfigError("fit: degree must be >= 1");
    if (opt.threshold < 0) throw ConfigError("fit: threshold must be >= 0");
    if (data.rows() < 1) throw ConfigError("fit: empty dataset");
    check_finite(data.inputs, "fit: inputs");
    check_finite(data.targets, "fit: targets");
    if (opt.loss != Loss::Squared) check_binary_labels(data.targets, "fit");
    if (opt.solver == SolverChoice::Pinv && opt.loss != Loss::Squared)
        throw ConfigError("fit: the pinv solver applies to squared loss only");

    FitOutcome out;
    out.model.degree = opt.degree;
    out.model.loss = opt.loss;
    out.model.lag = opt.lag;
    out.model.feature_names = data.feature_names;
    out.model.target_name = data.target_name;
    if (opt.scale) out.model.scaling = MinMaxScaling::fit(data.inputs);

    const MatrixXd Xs =
        opt.scale ? out.model.scaling->apply(data.inputs) : MatrixXd(data.inputs);
    out.model.centers = build_centers(Xs, opt.degree, opt.center_strategy, opt.center_seed);
    const MatrixXd A = kernel_matrix(Xs, out.model.centers, opt.degree, opt.threads);

    const bool use_pinv = opt.loss == Loss::Squared && opt.solver != SolverChoice::Admm;
    if (use_pinv) {
        out.model.weights = fit_pinv(A, data.targets);
        out.solver_used = "pinv";
        out.report.initial_objective =
            mean_loss(opt.loss, VectorXd::Zero(data.rows()), data.targets);
        out.report.final_primal = 0.0;
        out.report.final_dual = 0.0;
        out.report.converged = true;
        out.report.objective_trace = {mean_loss(opt.loss, A * out.model.weights, data.targets)};
    } else {
        auto [u, rep] = fit_admm(A, data.targets, opt.loss, opt.admm, opt.threads);
        out.model.weights = std::move(u);
        out.report = std::move(rep);
        out.solver_used = "admm";
    }

    out.sparse = apply_threshold(expand_to_monomials(out.model, opt.threads), opt.threshold);
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

/// Lag-embeds a raw series and fits it.
inline std::pair<FitOutcome, SupervisedDataset> fit_series(const RawSeries& series,
                                                           const FitOptions& opt) {
    SupervisedDataset data = lag_embed(series, opt.lag);
    FitOutcome outcome = fit_supervised(data, opt);
    return {std::move(outcome), std::move(data)};
}

/// Embeds a raw series for use with an already-fitted model, checking that
/// the embedded layout matches what the model was trained on.
inline SupervisedDataset embed_for_model(const KernelModel& model, const RawSeries& series) {
    SupervisedDataset data = lag_embed(series, model.lag);
    if (data.feature_names != model.feature_names) {
        std::string got, want;
        for (const auto& n : data.feature_names) got += (got.empty() ? "" : ", ") + n;
        for (const auto& n : model.feature_names) want += (want.empty() ? "" : ", ") + n;
        throw ConfigError("embedded columns [" + got + "] do not match the model's [" + want +
                          "]");
    }
    return data;
}

} // namespace ipl

#endif // IPL_PIPELINE_HPP
