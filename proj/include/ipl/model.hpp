#ifndef IPL_MODEL_HPP
#define IPL_MODEL_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ipl/common.hpp"
#include "ipl/kernel.hpp"
#include "ipl/multi_index.hpp"
#include "ipl/parallel.hpp"
#include "ipl/scaling.hpp"
#include "ipl/timeseries.hpp"

namespace ipl {

enum class Loss { Squared, Hinge, Logistic };

inline std::string to_string(Loss loss) {
    switch (loss) {
        case Loss::Squared: return "squared";
        case Loss::Hinge: return "hinge";
        case Loss::Logistic: return "logistic";
    }
    throw ConfigError("unknown loss");
}

inline Loss loss_from_string(const std::string& s) {
    if (s == "squared") return Loss::Squared;
    if (s == "hinge") return Loss::Hinge;
    if (s == "logistic") return Loss::Logistic;
    throw ConfigError("unknown loss '" + s + "' (expected squared, hinge, or logistic)");
}

/// Fitted kernel-form model: score(x) = sum_j u_j (1 + eta_j . x_s)^s where
/// x_s is the input after the stored min-max scaling (identity when absent).
/// Centers are stored in scaled space, matching how they were built.
struct KernelModel {
    int degree = 2;
    CenterSet centers;
    VectorXd weights;
    std::optional<MinMaxScaling> scaling;
    LagSpec lag;
    Loss loss = Loss::Squared;
    std::vector<std::string> feature_names;
    std::string target_name = "y";

    Eigen::Index dim() const { return centers.dim(); }

    void validate() const {
        if (degree < 1) throw ConfigError("KernelModel: degree must be >= 1");
        check_same_size(weights.size(), centers.n(), "KernelModel weights/centers");
        if (feature_names.size() != static_cast<std::size_t>(centers.dim()))
            throw ConfigError("KernelModel: feature name count does not match input dimension");
        if (scaling && scaling->dim() != centers.dim())
            throw ConfigError("KernelModel: scaling dimension does not match input dimension");
        check_finite(centers.centers, "KernelModel: centers");
        check_finite(weights, "KernelModel: weights");
    }
};

/// Thresholded monomial form: the terms (alpha, omega_alpha) with
/// |omega_alpha| >= threshold, in graded lexicographic order. Carries the
/// same input scaling as the model it came from, so both forms accept raw
/// inputs and agree on them.
struct SparsePolynomial {
    struct Term {
        MultiIndex index;
        double coefficient = 0.0;
    };

    std::vector<Term> terms;
    double threshold = 0.0;
    int degree = 0;
    std::vector<std::string> feature_names;
    std::optional<MinMaxScaling> scaling;

    Eigen::Index dim() const { return static_cast<Eigen::Index>(feature_names.size()); }
};

namespace detail {

inline VectorXd maybe_scale(const std::optional<MinMaxScaling>& scaling, const VectorXd& x) {
    return scaling ? scaling->apply(x) : x;
}

inline MatrixXd maybe_scale(const std::optional<MinMaxScaling>& scaling, const MatrixXd& X) {
    return scaling ? scaling->apply(X) : X;
}

} // namespace detail

/// Kernel-form score for one raw embedded input.
inline double predict_kernel(const KernelModel& model, const VectorXd& x) {
    check_same_size(x.size(), model.dim(), "predict_kernel");
    check_finite(x, "predict_kernel: input");
    const VectorXd xs = detail::maybe_scale(model.scaling, x);
    double score = 0.0;
    for (Eigen::Index j = 0; j < model.centers.n(); ++j)
        score += model.weights(j) * ipow(1.0 + model.centers.centers.row(j).dot(xs), model.degree);
    return score;
}

/// Kernel-form scores for a batch of raw rows.
inline VectorXd predict_kernel(const KernelModel& model, const MatrixXd& X,
                               int threads = 1) {
    check_same_size(X.cols(), model.dim(), "predict_kernel");
    check_finite(X, "predict_kernel: input");
    const MatrixXd Xs = detail::maybe_scale(model.scaling, X);
    VectorXd scores(X.rows());
    parallel_for(X.rows(), threads, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
        for (std::ptrdiff_t i = lo; i < hi; ++i) {
            double s = 0.0;
            for (Eigen::Index j = 0; j < model.centers.n(); ++j)
                s += model.weights(j) * ipow(1.0 + Xs.row(i).dot(model.centers.centers.row(j)),
                                             model.degree);
            scores(i) = s;
        }
    });
    return scores;
}

/// Class label for hinge/logistic models: the sign of the score, with a
/// zero score mapped to +1.
inline double classify_score(double score) { return score >= 0.0 ? 1.0 : -1.0; }

inline double predict_class(const KernelModel& model, const VectorXd& x) {
    return classify_score(predict_kernel(model, x));
}

/// Value of the monomial x^alpha at an already-scaled input.
inline double monomial_value(const Eigen::Ref<const VectorXd>& x_scaled, const MultiIndex& alpha) {
    check_same_size(x_scaled.size(), static_cast<Eigen::Index>(alpha.exponents.size()),
                    "monomial_value");
    double v = 1.0;
    for (Eigen::Index k = 0; k < x_scaled.size(); ++k) {
        const int e = alpha.exponents[static_cast<std::size_t>(k)];
        if (e != 0) v *= ipow(x_scaled(k), e);
    }
    return v;
}

/// Sparse-form score for one raw embedded input.
inline double predict_sparse(const SparsePolynomial& poly, const VectorXd& x) {
    check_same_size(x.size(), poly.dim(), "predict_sparse");
    check_finite(x, "predict_sparse: input");
    const VectorXd xs = detail::maybe_scale(poly.scaling, x);
    double score = 0.0;
    for (const auto& term : poly.terms) score += term.coefficient * monomial_value(xs, term.index);
    return score;
}

inline VectorXd predict_sparse(const SparsePolynomial& poly, const MatrixXd& X,
                               int threads = 1) {
    check_same_size(X.cols(), poly.dim(), "predict_sparse");
    check_finite(X, "predict_sparse: input");
    const MatrixXd Xs = detail::maybe_scale(poly.scaling, X);
    VectorXd scores(X.rows());
    parallel_for(X.rows(), threads, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
        for (std::ptrdiff_t i = lo; i < hi; ++i) {
            double s = 0.0;
            for (const auto& term : poly.terms)
                s += term.coefficient * monomial_value(Xs.row(i).transpose(), term.index);
            scores(i) = s;
        }
    });
    return scores;
}

/// Rewrites the kernel form as an explicit polynomial: expanding each
/// (1 + eta_j . x)^s by the multinomial theorem and collecting terms gives
/// omega_alpha = M(s, alpha) * sum_j u_j * prod_k eta_jk^alpha_k.
/// Returns every |alpha| <= s term (threshold 0) in graded lexicographic
/// order; the result evaluates identically to the kernel form.
inline SparsePolynomial expand_to_monomials(const KernelModel& model, int threads = 1) {
    model.validate();
    const auto indices = enumerate_multi_indices(static_cast<int>(model.dim()), model.degree);

    SparsePolynomial poly;
    poly.threshold = 0.0;
    poly.degree = model.degree;
    poly.feature_names = model.feature_names;
    poly.scaling = model.scaling;
    poly.terms.resize(indices.size());

    const MatrixXd& H = model.centers.centers;
    parallel_for(static_cast<std::ptrdiff_t>(indices.size()), threads,
                 [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
                     for (std::ptrdiff_t t = lo; t < hi; ++t) {
                         const MultiIndex& alpha = indices[static_cast<std::size_t>(t)];
                         const double m = multinomial_coefficient(model.degree, alpha);
                         double acc = 0.0;
                         for (Eigen::Index j = 0; j < H.rows(); ++j)
                             acc += model.weights(j) *
                                    monomial_value(H.row(j).transpose(), alpha);
                         poly.terms[static_cast<std::size_t>(t)] = {alpha, m * acc};
                     }
                 });
    return poly;
}

/// Keeps the terms with |omega_alpha| >= threshold (the Omega_I selection).
inline SparsePolynomial apply_threshold(const SparsePolynomial& poly, double threshold) {
    if (threshold < 0) throw ConfigError("apply_threshold: threshold must be >= 0");
    SparsePolynomial out;
    out.threshold = threshold;
    out.degree = poly.degree;
    out.feature_names = poly.feature_names;
    out.scaling = poly.scaling;
    for (const auto& term : poly.terms)
        if (std::abs(term.coefficient) >= threshold) out.terms.push_back(term);
    return out;
}

/// Matrix of monomial values (rows x terms) for raw inputs, used to feed
/// tree induction and downstream estimators with interaction features.
inline MatrixXd monomial_features(const MatrixXd& X,
                                  const std::optional<MinMaxScaling>& scaling,
                                  const std::vector<MultiIndex>& terms, int threads = 1) {
    check_finite(X, "monomial_features: input");
    const MatrixXd Xs = detail::maybe_scale(scaling, X);
    MatrixXd F(X.rows(), static_cast<Eigen::Index>(terms.size()));
    parallel_for(X.rows(), threads, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
        for (std::ptrdiff_t i = lo; i < hi; ++i)
            for (std::size_t t = 0; t < terms.size(); ++t)
                F(i, static_cast<Eigen::Index>(t)) =
                    monomial_value(Xs.row(i).transpose(), terms[t]);
    });
    return F;
}

} // namespace ipl

#endif // IPL_MODEL_HPP
