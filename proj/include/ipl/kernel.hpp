#ifndef IPL_KERNEL_HPP
#define IPL_KERNEL_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "ipl/common.hpp"
#include "ipl/multi_index.hpp"
#include "ipl/parallel.hpp"
#include "ipl/rng.hpp"

namespace ipl {

/// Inhomogeneous polynomial kernel (1 + x.eta)^s.
inline double kernel_eval(const Eigen::Ref<const VectorXd>& x,
                          const Eigen::Ref<const VectorXd>& eta, int s) {
    if (s < 1) throw ConfigError("kernel_eval: degree must be >= 1");
    check_same_size(x.size(), eta.size(), "kernel_eval");
    check_finite(x, "kernel_eval: x");
    check_finite(eta, "kernel_eval: eta");
    return ipow(1.0 + x.dot(eta), s);
}

enum class CenterStrategy { FirstSamples, RandomUniform, RandomSubsample };

inline std::string to_string(CenterStrategy s) {
    switch (s) {
        case CenterStrategy::FirstSamples: return "first_samples";
        case CenterStrategy::RandomUniform: return "random_uniform";
        case CenterStrategy::RandomSubsample: return "random_subsample";
    }
    throw ConfigError("unknown center strategy");
}

inline CenterStrategy center_strategy_from_string(const std::string& s) {
    if (s == "first_samples") return CenterStrategy::FirstSamples;
    if (s == "random_uniform") return CenterStrategy::RandomUniform;
    if (s == "random_subsample") return CenterStrategy::RandomSubsample;
    throw ConfigError("unknown center strategy '" + s + "'");
}

/// The kernel centers eta_j, one per row. n is pinned to the dimension of
/// the degree-s polynomial space so that the centers can span it.
struct CenterSet {
    MatrixXd centers;
    CenterStrategy strategy = CenterStrategy::FirstSamples;
    std::uint64_t seed = 0;

    Eigen::Index n() const { return centers.rows(); }
    Eigen::Index dim() const { return centers.cols(); }
};

/// Picks n = C(s+D, s) centers from the embedded rows of X.
/// FirstSamples takes the first n rows in time order; RandomSubsample draws
/// n distinct rows (kept in time order); RandomUniform draws points uniformly
/// inside the per-feature data range.
inline CenterSet build_centers(const Eigen::Ref<const MatrixXd>& X, int s,
                               CenterStrategy strategy = CenterStrategy::FirstSamples,
                               std::uint64_t seed = 0) {
    if (s < 1) throw ConfigError("build_centers: degree must be >= 1");
    if (X.cols() < 1) throw ConfigError("build_centers: no input features");
    check_finite(X, "build_centers: data");

    const std::uint64_t needed = polynomial_space_dimension(static_cast<int>(X.cols()), s);
    if (needed > (std::uint64_t{1} << 31))
        throw NumericError("build_centers: required center count " + std::to_string(needed) +
                           " is too large");
    const Eigen::Index n = static_cast<Eigen::Index>(needed);

    CenterSet cs;
    cs.strategy = strategy;
    cs.seed = seed;
    cs.centers.resize(n, X.cols());

    switch (strategy) {
        case CenterStrategy::FirstSamples: {
            if (X.rows() < n)
                throw ConfigError("build_centers: need at least " + std::to_string(needed) +
                                  " rows for first_samples, got " + std::to_string(X.rows()));
            cs.centers = X.topRows(n);
            break;
        }
        case CenterStrategy::RandomSubsample: {
            if (X.rows() < n)
                throw ConfigError("build_centers: need at least " + std::to_string(needed) +
                                  " rows for random_subsample, got " + std::to_string(X.rows()));
            Rng rng(seed);
            std::vector<Eigen::Index> idx(static_cast<std::size_t>(X.rows()));
            std::iota(idx.begin(), idx.end(), Eigen::Index{0});
            // partial Fisher-Yates: the first n slots end up as a uniform
            // draw of n distinct rows
            for (Eigen::Index i = 0; i < n; ++i) {
                const auto j = i + static_cast<Eigen::Index>(
                                       rng.uniform_int(static_cast<std::uint64_t>(X.rows() - i)));
                std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
            }
            std::sort(idx.begin(), idx.begin() + n); // keep time order
            for (Eigen::Index i = 0; i < n; ++i)
                cs.centers.row(i) = X.row(idx[static_cast<std::size_t>(i)]);
            break;
        }
        case CenterStrategy::RandomUniform: {
            const VectorXd lo = X.colwise().minCoeff();
            const VectorXd hi = X.colwise().maxCoeff();
            Rng rng(seed);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index k = 0; k < X.cols(); ++k)
                    cs.centers(i, k) = rng.uniform(lo(k), hi(k));
            break;
        }
    }
    return cs;
}

/// Result of the empirical fundamental-system check.
struct FundamentalSystemCheck {
    bool is_fundamental = false;
    Eigen::Index rank = 0;
    Eigen::Index required = 0;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
};

/// Checks whether the kernel sections {K_s(eta_i, .)} are linearly
/// independent by computing the numerical rank of the center Gram matrix
/// G_ij = K_s(eta_i, eta_j). Singular values below 1e-10 * sigma_max count
/// as zero. O(n^3); intended as an explicit diagnostic, not a fit-time gate.
inline FundamentalSystemCheck validate_fundamental_system(const CenterSet& centers, int s) {
    if (s < 1) throw ConfigError("validate_fundamental_system: degree must be >= 1");
    check_finite(centers.centers, "validate_fundamental_system: centers");
    const Eigen::Index n = centers.n();

    MatrixXd G(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            G(i, j) = ipow(1.0 + centers.centers.row(i).dot(centers.centers.row(j)), s);

    Eigen::JacobiSVD<MatrixXd> svd(G);
    const VectorXd& sv = svd.singularValues();

    FundamentalSystemCheck out;
    out.required = n;
    out.sigma_max = sv.size() > 0 ? sv(0) : 0.0;
    out.sigma_min = sv.size() > 0 ? sv(sv.size() - 1) : 0.0;
    const double cutoff = 1e-10 * out.sigma_max;
    out.rank = (sv.array() > cutoff).count();
    out.is_fundamental = (out.rank == n);
    return out;
}

/// Kernel design matrix A_ij = K_s(x_i, eta_j); preserves the row (time)
/// order of X. Rows are filled in parallel; each entry depends only on its
/// own row and center, so the result is identical for any thread count.
inline MatrixXd kernel_matrix(const Eigen::Ref<const MatrixXd>& X, const CenterSet& centers,
                              int s, int threads = 1) {
    if (s < 1) throw ConfigError("kernel_matrix: degree must be >= 1");
    check_same_size(X.cols(), centers.dim(), "kernel_matrix");
    check_finite(X, "kernel_matrix: data");
    check_finite(centers.centers, "kernel_matrix: centers");

    MatrixXd A(X.rows(), centers.n());
    parallel_for(X.rows(), threads, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
        for (std::ptrdiff_t i = lo; i < hi; ++i)
            for (Eigen::Index j = 0; j < centers.n(); ++j)
                A(i, j) = ipow(1.0 + X.row(i).dot(centers.centers.row(j)), s);
    });
    return A;
}

} // namespace ipl

#endif // IPL_KERNEL_HPP
