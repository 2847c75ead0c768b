#ifndef IPL_ESTIMATORS_HPP
#define IPL_ESTIMATORS_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "ipl/admm.hpp"
#include "ipl/common.hpp"

namespace ipl {

/// Downstream evaluation estimators. These exist to score feature choices
/// (perturbation and sparsity analyses), not as part of the model itself,
/// so they are kept to the minimum: least squares and a damped-Newton
/// logistic fit, both deterministic.

/// Least-squares coefficients with intercept: returns beta of length
/// cols+1, intercept first. Minimum-norm solution, so singular designs
/// (duplicated columns) never fail.
inline VectorXd fit_linear_regression(const Eigen::Ref<const MatrixXd>& X,
                                      const Eigen::Ref<const VectorXd>& y) {
    check_same_size(X.rows(), y.size(), "fit_linear_regression");
    MatrixXd design(X.rows(), X.cols() + 1);
    design.col(0).setOnes();
    design.rightCols(X.cols()) = X;
    return fit_pinv(design, y);
}

inline VectorXd predict_linear(const Eigen::Ref<const VectorXd>& beta,
                               const Eigen::Ref<const MatrixXd>& X) {
    check_same_size(beta.size(), X.cols() + 1, "predict_linear");
    return (X * beta.tail(X.cols())).array() + beta(0);
}

/// Logistic regression on labels in {-1, 1} by damped Newton on the mean
/// log-loss plus a small ridge term (keeps the Hessian invertible on
/// separable data). Returns beta with intercept first.
inline VectorXd fit_logistic_regression(const Eigen::Ref<const MatrixXd>& X,
                                        const Eigen::Ref<const VectorXd>& y, int max_iters = 100,
                                        double tol = 1e-10, double ridge = 1e-8) {
    check_same_size(X.rows(), y.size(), "fit_logistic_regression");
    check_binary_labels(y, "fit_logistic_regression");
    check_finite(X, "fit_logistic_regression: X");
    const Eigen::Index T = X.rows();
    const Eigen::Index p = X.cols() + 1;

    MatrixXd design(T, p);
    design.col(0).setOnes();
    design.rightCols(X.cols()) = X;

    auto objective = [&](const VectorXd& beta) {
        const VectorXd z = design * beta;
        double acc = 0.0;
        for (Eigen::Index i = 0; i < T; ++i) acc += loss_value(Loss::Logistic, z(i), y(i));
        return acc / static_cast<double>(T) + 0.5 * ridge * beta.squaredNorm();
    };

    VectorXd beta = VectorXd::Zero(p);
    double obj = objective(beta);
    for (int it = 0; it < max_iters; ++it) {
        const VectorXd z = design * beta;
        VectorXd grad = ridge * beta;
        MatrixXd hess = ridge * MatrixXd::Identity(p, p);
        for (Eigen::Index i = 0; i < T; ++i) {
            const double s = sigmoid(-y(i) * z(i));
            grad += (-y(i) * s / static_cast<double>(T)) * design.row(i).transpose();
            hess += (s * (1.0 - s) / static_cast<double>(T)) * design.row(i).transpose() *
                    design.row(i);
        }
        const VectorXd step = hess.ldlt().solve(grad);
        if (!step.allFinite()) break;

        double scale = 1.0;
        VectorXd next;
        double next_obj = obj;
        for (int halving = 0; halving < 30; ++halving) {
            next = beta - scale * step;
            next_obj = objective(next);
            if (next_obj <= obj) break;
            scale *= 0.5;
        }
        if (next_obj > obj) break; // no descent direction left
        const double drop = obj - next_obj;
        beta = next;
        obj = next_obj;
        if (drop <= tol) break;
    }
    return beta;
}

inline VectorXd logistic_scores(const Eigen::Ref<const VectorXd>& beta,
                                const Eigen::Ref<const MatrixXd>& X) {
    return predict_linear(beta, X);
}

inline double mean_squared_error(const Eigen::Ref<const VectorXd>& pred,
                                 const Eigen::Ref<const VectorXd>& y) {
    check_same_size(pred.size(), y.size(), "mean_squared_error");
    if (pred.size() == 0) throw ConfigError("mean_squared_error: empty input");
    return (pred - y).squaredNorm() / static_cast<double>(pred.size());
}

/// Fraction of score signs matching the labels (zero scores count as +1).
inline double sign_accuracy(const Eigen::Ref<const VectorXd>& scores,
                            const Eigen::Ref<const VectorXd>& y) {
    check_same_size(scores.size(), y.size(), "sign_accuracy");
    if (scores.size() == 0) throw ConfigError("sign_accuracy: empty input");
    Eigen::Index hits = 0;
    for (Eigen::Index i = 0; i < scores.size(); ++i)
        if ((scores(i) >= 0 ? 1.0 : -1.0) == y(i)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(scores.size());
}

/// Area under the ROC curve by the rank statistic, with tied scores given
/// their average rank. Requires both classes present.
inline double auc_score(const Eigen::Ref<const VectorXd>& scores,
                        const Eigen::Ref<const VectorXd>& y) {
    check_same_size(scores.size(), y.size(), "auc_score");
    check_binary_labels(y, "auc_score");
    const Eigen::Index T = scores.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(T));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return scores(a) < scores(b); });

    double pos_rank_sum = 0.0;
    Eigen::Index n_pos = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores(order[j]) == scores(order[i])) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j); // ranks are 1-based
        for (std::size_t k = i; k < j; ++k)
            if (y(order[k]) == 1.0) {
                pos_rank_sum += avg_rank;
                ++n_pos;
            }
        i = j;
    }
    const Eigen::Index n_neg = T - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw ConfigError("auc_score: needs both classes in the labels");
    return (pos_rank_sum - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1)) /
           (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

} // namespace ipl

#endif // IPL_ESTIMATORS_HPP
