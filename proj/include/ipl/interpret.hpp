#ifndef IPL_INTERPRET_HPP
#define IPL_INTERPRET_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ipl/common.hpp"
#include "ipl/estimators.hpp"
#include "ipl/model.hpp"
#include "ipl/rng.hpp"
#include "ipl/timeseries.hpp"

namespace ipl {

struct ImportanceEntry {
    std::string name;
    MultiIndex index;
    double coefficient = 0.0;
    int rank = 0;
};

/// Ranked monomial importances: entries sorted by |coefficient| descending,
/// ties broken by graded lexicographic order so the ranking is a fixed
/// permutation of the surviving terms.
struct ImportanceReport {
    std::vector<ImportanceEntry> entries;
    double threshold = 0.0;
    int degree = 0;
    LagSpec lag;
    Loss loss = Loss::Squared;
    std::vector<std::string> feature_names;
};

/// Expands the model, drops terms below the threshold (and by default the
/// constant, which says nothing about any feature), and ranks the rest by
/// coefficient magnitude.
inline ImportanceReport rank_features(const KernelModel& model, double threshold = 0.0,
                                      bool exclude_constant = true, int threads = 1) {
    if (threshold < 0) throw ConfigError("rank_features: threshold must be >= 0");
    const SparsePolynomial full = expand_to_monomials(model, threads);

    ImportanceReport report;
    report.threshold = threshold;
    report.degree = model.degree;
    report.lag = model.lag;
    report.loss = model.loss;
    report.feature_names = model.feature_names;

    for (const auto& term : full.terms) {
        if (exclude_constant && term.index.degree() == 0) continue;
        if (std::abs(term.coefficient) < threshold) continue;
        report.entries.push_back(
            {term_name(term.index, model.feature_names), term.index, term.coefficient, 0});
    }
    std::sort(report.entries.begin(), report.entries.end(),
              [](const ImportanceEntry& a, const ImportanceEntry& b) {
                  const double ma = std::abs(a.coefficient), mb = std::abs(b.coefficient);
                  if (ma != mb) return ma > mb;
                  return grlex_less(a.index, b.index);
              });
    for (std::size_t i = 0; i < report.entries.size(); ++i)
        report.entries[i].rank = static_cast<int>(i) + 1;
    return report;
}

/// First k entries (ranks preserved); fewer if the report is shorter.
inline ImportanceReport top_k_report(const ImportanceReport& report, int k) {
    if (k < 0) throw ConfigError("top_k_report: k must be >= 0");
    ImportanceReport out = report;
    if (static_cast<std::size_t>(k) < out.entries.size()) out.entries.resize(static_cast<std::size_t>(k));
    return out;
}

/// Zero-pads a multi-index to `dim` variables (truth terms are stated over
/// the raw features; fitted reports may carry extra lagged variables).
inline MultiIndex pad_index(const MultiIndex& alpha, Eigen::Index dim) {
    if (alpha.dim() > dim)
        throw ConfigError("pad_index: index over " + std::to_string(alpha.dim()) +
                          " variables cannot map into " + std::to_string(dim));
    MultiIndex out = alpha;
    out.exponents.resize(static_cast<std::size_t>(dim), 0);
    return out;
}

/// Ground-truth terms of a generating polynomial, constant excluded, sorted
/// by |coefficient| descending (grlex on ties): the reference ranking.
inline std::vector<SparsePolynomial::Term> truth_ranking(const SparsePolynomial& truth) {
    std::vector<SparsePolynomial::Term> terms;
    for (const auto& t : truth.terms)
        if (t.index.degree() > 0) terms.push_back(t);
    if (terms.empty()) throw ConfigError("truth_ranking: no non-constant terms");
    std::sort(terms.begin(), terms.end(),
              [](const SparsePolynomial::Term& a, const SparsePolynomial::Term& b) {
                  const double ma = std::abs(a.coefficient), mb = std::abs(b.coefficient);
                  if (ma != mb) return ma > mb;
                  return grlex_less(a.index, b.index);
              });
    return terms;
}

/// Share of the truth terms that appear in the report's top-k entries.
inline double feature_overlap_ratio(const std::vector<MultiIndex>& truth_terms,
                                    const ImportanceReport& report, int top_k = 10) {
    if (truth_terms.empty()) throw ConfigError("feature_overlap_ratio: empty truth set");
    if (top_k < 1) throw ConfigError("feature_overlap_ratio: top_k must be >= 1");
    const std::size_t limit = std::min(report.entries.size(), static_cast<std::size_t>(top_k));
    std::size_t hits = 0;
    for (const auto& t : truth_terms) {
        const MultiIndex padded = pad_index(t, static_cast<Eigen::Index>(report.feature_names.size()));
        for (std::size_t i = 0; i < limit; ++i)
            if (report.entries[i].index == padded) {
                ++hits;
                break;
            }
    }
    return static_cast<double>(hits) / static_cast<double>(truth_terms.size());
}

/// rho = 1 - 6 sum d_i^2 / (n (n^2 - 1)) over paired rank vectors.
/// Undefined (NaN) for fewer than two terms.
inline double ranking_similarity_from_ranks(const std::vector<double>& method_ranks,
                                            const std::vector<double>& truth_ranks) {
    if (method_ranks.size() != truth_ranks.size())
        throw ConfigError("ranking_similarity: rank vectors differ in length");
    const auto n = static_cast<double>(method_ranks.size());
    if (method_ranks.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < method_ranks.size(); ++i) {
        const double d = method_ranks[i] - truth_ranks[i];
        sum_sq += d * d;
    }
    return 1.0 - 6.0 * sum_sq / (n * (n * n - 1.0));
}

/// Rank agreement between the report and the truth terms (given in truth
/// rank order, best first). Terms the report never surfaces get rank
/// len(report) + 1.
inline double ranking_similarity(const ImportanceReport& report,
                                 const std::vector<MultiIndex>& truth_terms_ranked) {
    std::vector<double> method_ranks, truth_ranks;
    const double absent = static_cast<double>(report.entries.size()) + 1.0;
    for (std::size_t i = 0; i < truth_terms_ranked.size(); ++i) {
        const MultiIndex padded =
            pad_index(truth_terms_ranked[i], static_cast<Eigen::Index>(report.feature_names.size()));
        double rank = absent;
        for (const auto& e : report.entries)
            if (e.index == padded) {
                rank = static_cast<double>(e.rank);
                break;
            }
        method_ranks.push_back(rank);
        truth_ranks.push_back(static_cast<double>(i) + 1.0);
    }
    return ranking_similarity_from_ranks(method_ranks, truth_ranks);
}

/// Cosine similarity of two coefficient vectors; a zero method vector
/// scores 0 (flagged by the caller-visible bundle below).
inline double value_similarity(const VectorXd& method_coeffs, const VectorXd& truth_coeffs) {
    check_same_size(method_coeffs.size(), truth_coeffs.size(), "value_similarity");
    if (truth_coeffs.size() < 1) throw ConfigError("value_similarity: empty vectors");
    const double tn = truth_coeffs.norm();
    if (tn == 0) throw ConfigError("value_similarity: truth coefficients are all zero");
    const double mn = method_coeffs.norm();
    if (mn == 0) return 0.0;
    return method_coeffs.dot(truth_coeffs) / (mn * tn);
}

struct MetricBundle {
    double feature_overlap = std::numeric_limits<double>::quiet_NaN();
    double ranking = std::numeric_limits<double>::quiet_NaN();
    double value = std::numeric_limits<double>::quiet_NaN();
    bool ranking_defined = false;
    bool method_coeffs_zero = false;
};

/// The three interpretability scores of a report against a generating
/// polynomial: truth coverage in the top-k, rank agreement over the truth
/// terms, and cosine similarity of the coefficients on those terms.
inline MetricBundle compute_interpretability_metrics(const ImportanceReport& report,
                                                     const SparsePolynomial& truth,
                                                     int top_k = 10) {
    const auto ranked = truth_ranking(truth);

    std::vector<MultiIndex> truth_terms;
    VectorXd truth_coeffs(static_cast<Eigen::Index>(ranked.size()));
    VectorXd method_coeffs = VectorXd::Zero(static_cast<Eigen::Index>(ranked.size()));
    const auto dim = static_cast<Eigen::Index>(report.feature_names.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        truth_terms.push_back(ranked[i].index);
        truth_coeffs(static_cast<Eigen::Index>(i)) = ranked[i].coefficient;
        const MultiIndex padded = pad_index(ranked[i].index, dim);
        for (const auto& e : report.entries)
            if (e.index == padded) {
                method_coeffs(static_cast<Eigen::Index>(i)) = e.coefficient;
                break;
            }
    }

    MetricBundle out;
    out.feature_overlap = feature_overlap_ratio(truth_terms, report, top_k);
    out.ranking = ranking_similarity(report, truth_terms);
    out.ranking_defined = !std::isnan(out.ranking);
    out.method_coeffs_zero = method_coeffs.norm() == 0;
    out.value = value_similarity(method_coeffs, truth_coeffs);
    return out;
}

struct PerturbationRow {
    Eigen::Index feature = 0;
    std::string feature_name;
    double alpha = 0.0;
    double mean_degradation = 0.0;
    double std_error = 0.0;
    bool warned_constant = false;
};

/// Feature-sensitivity probe: train one least-squares regressor on the
/// clean training rows, then for each (feature, alpha, trial) perturb that
/// test column with fresh noise and record the relative rise in test MSE,
/// (MSE_perturbed - MSE_clean) / MSE_clean, averaged over trials. Trial
/// seeds derive from (feature position, alpha position, trial), so results
/// do not depend on evaluation order.
inline std::vector<PerturbationRow> perturbation_analysis(const SupervisedDataset& train,
                                                          const SupervisedDataset& test,
                                                          const std::vector<Eigen::Index>& features,
                                                          const std::vector<double>& alphas,
                                                          int trials, std::uint64_t seed) {
    if (trials < 1) throw ConfigError("perturbation_analysis: trials must be >= 1");
    if (features.empty()) throw ConfigError("perturbation_analysis: no features given");
    if (alphas.empty()) throw ConfigError("perturbation_analysis: no alpha levels given");
    for (double a : alphas)
        if (!(a >= 0) || !std::isfinite(a))
            throw ConfigError("perturbation_analysis: alpha levels must be finite and >= 0");
    check_same_size(train.dim(), test.dim(), "perturbation_analysis");

    const VectorXd beta = fit_linear_regression(train.inputs, train.targets);
    const double mse_clean = mean_squared_error(predict_linear(beta, test.inputs), test.targets);
    if (mse_clean <= 0)
        throw NumericError("perturbation_analysis: clean test MSE is zero, relative degradation "
                           "is undefined");

    std::vector<PerturbationRow> rows;
    for (std::size_t fi = 0; fi < features.size(); ++fi) {
        const Eigen::Index f = features[fi];
        if (f < 0 || f >= test.dim())
            throw ConfigError("perturbation_analysis: feature index " + std::to_string(f) +
                              " out of range");
        for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
            PerturbationRow row;
            row.feature = f;
            row.feature_name = test.feature_names[static_cast<std::size_t>(f)];
            row.alpha = alphas[ai];

            std::vector<double> degradation(static_cast<std::size_t>(trials));
            for (int t = 0; t < trials; ++t) {
                const std::uint64_t s = derive_seed(
                    derive_seed(derive_seed(seed, fi + 1), ai + 1), static_cast<std::uint64_t>(t) + 1);
                const PerturbResult pr = perturb_feature(test, f, alphas[ai], s);
                row.warned_constant = row.warned_constant || pr.warned_constant;
                const double mse =
                    mean_squared_error(predict_linear(beta, pr.data.inputs), pr.data.targets);
                degradation[static_cast<std::size_t>(t)] = (mse - mse_clean) / mse_clean;
            }
            double mean = 0.0;
            for (double d : degradation) mean += d;
            mean /= static_cast<double>(trials);
            double var = 0.0;
            for (double d : degradation) var += (d - mean) * (d - mean);
            row.mean_degradation = mean;
            row.std_error = trials > 1
                                ? std::sqrt(var / static_cast<double>(trials - 1) /
                                            static_cast<double>(trials))
                                : 0.0;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

enum class SweepMetric { AUC, Accuracy };

inline std::string to_string(SweepMetric m) {
    return m == SweepMetric::AUC ? "auc" : "accuracy";
}

inline SweepMetric sweep_metric_from_string(const std::string& s) {
    if (s == "auc") return SweepMetric::AUC;
    if (s == "accuracy") return SweepMetric::Accuracy;
    throw ConfigError("unknown sweep metric '" + s + "' (expected auc or accuracy)");
}

struct SweepRow {
    int k = 0;
    int k_used = 0; // k clamped to the number of ranked terms
    double score = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double max_fluctuation = 0.0; // (max - min) / min over the scores
    bool clamped = false;
};

/// Accuracy (or AUC) of a logistic classifier trained on the values of the
/// top-k ranked monomial terms, for each k: how much predictive power the
/// leading terms already carry.
inline SweepResult sparsity_accuracy_sweep(const KernelModel& model,
                                           const ImportanceReport& report,
                                           const SupervisedDataset& train,
                                           const SupervisedDataset& test,
                                           const std::vector<int>& ks, SweepMetric metric,
                                           int threads = 1) {
    if (ks.empty()) throw ConfigError("sparsity_accuracy_sweep: no k values");
    if (report.entries.empty()) throw ConfigError("sparsity_accuracy_sweep: empty ranking");
    check_binary_labels(train.targets, "sparsity_accuracy_sweep: train labels");
    check_binary_labels(test.targets, "sparsity_accuracy_sweep: test labels");
    check_same_size(train.dim(), static_cast<Eigen::Index>(model.feature_names.size()),
                    "sparsity_accuracy_sweep");
    check_same_size(test.dim(), train.dim(), "sparsity_accuracy_sweep");

    SweepResult out;
    for (int k : ks) {
        if (k < 1) throw ConfigError("sparsity_accuracy_sweep: k must be >= 1");
        const int k_used = std::min(k, static_cast<int>(report.entries.size()));
        out.clamped = out.clamped || (k_used < k);

        std::vector<MultiIndex> terms;
        for (int i = 0; i < k_used; ++i)
            terms.push_back(report.entries[static_cast<std::size_t>(i)].index);
        const MatrixXd f_train = monomial_features(train.inputs, model.scaling, terms, threads);
        const MatrixXd f_test = monomial_features(test.inputs, model.scaling, terms, threads);

        const VectorXd beta = fit_logistic_regression(f_train, train.targets);
        const VectorXd scores = logistic_scores(beta, f_test);
        const double score = metric == SweepMetric::AUC ? auc_score(scores, test.targets)
                                                        : sign_accuracy(scores, test.targets);
        out.rows.push_back({k, k_used, score});
    }

    double lo = out.rows.front().score, hi = out.rows.front().score;
    for (const auto& r : out.rows) {
        lo = std::min(lo, r.score);
        hi = std::max(hi, r.score);
    }
    out.max_fluctuation = lo > 0 ? (hi - lo) / lo : std::numeric_limits<double>::quiet_NaN();
    return out;
}

} // namespace ipl

#endif // IPL_INTERPRET_HPP
