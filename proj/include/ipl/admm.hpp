#ifndef IPL_ADMM_HPP
#define IPL_ADMM_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SVD>

#include "ipl/common.hpp"
#include "ipl/model.hpp"
#include "ipl/parallel.hpp"

namespace ipl {

/// Numerically stable logistic sigmoid.
inline double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

/// Pointwise loss phi(v, y). Squared accepts any finite target; hinge and
/// logistic expect labels in {-1, 1}.
inline double loss_value(Loss loss, double v, double y) {
    switch (loss) {
        case Loss::Squared: return (v - y) * (v - y);
        case Loss::Hinge: return std::max(0.0, 1.0 - y * v);
        case Loss::Logistic: {
            // log(1 + e^{-yv}) without overflow for large |yv|
            const double z = -y * v;
            return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        }
    }
    throw ConfigError("unknown loss");
}

/// dphi/dv; for hinge this is the one-sided derivative, -y below the margin
/// and 0 above it (the kink at yv = 1 reports 0).
inline double loss_d1(Loss loss, double v, double y) {
    switch (loss) {
        case Loss::Squared: return 2.0 * (v - y);
        case Loss::Hinge: return y * v < 1.0 ? -y : 0.0;
        case Loss::Logistic: return -y * sigmoid(-y * v);
    }
    throw ConfigError("unknown loss");
}

/// d2phi/dv2 where defined (hinge reports 0 away from the kink).
inline double loss_d2(Loss loss, double v, double y) {
    switch (loss) {
        case Loss::Squared: return 2.0;
        case Loss::Hinge: return 0.0;
        case Loss::Logistic: {
            const double s = sigmoid(-y * v);
            return s * (1.0 - s);
        }
    }
    throw ConfigError("unknown loss");
}

/// Mean loss (1/T) sum_i phi(scores_i, y_i).
inline double mean_loss(Loss loss, const Eigen::Ref<const VectorXd>& scores,
                        const Eigen::Ref<const VectorXd>& y) {
    check_same_size(scores.size(), y.size(), "mean_loss");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < scores.size(); ++i) acc += loss_value(loss, scores(i), y(i));
    return acc / static_cast<double>(scores.size());
}

inline void check_binary_labels(const Eigen::Ref<const VectorXd>& y, const char* what) {
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (y(i) != 1.0 && y(i) != -1.0)
            throw ConfigError(std::string(what) + ": label at row " + std::to_string(i + 1) +
                              " is " + format_double(y(i)) + ", expected -1 or 1");
}

struct AdmmConfig {
    // alpha/beta <= 0 request the automatic defaults resolved against the
    // problem: alpha = 1e-6 * trace(A'A)/n, beta = 2/T.
    double alpha = 0.0;
    double beta = 0.0;
    int max_iters = 5000;
    double tol_primal = 1e-6;
    double tol_dual = 1e-6;
    int newton_max_iters = 50;
    double newton_tol = 1e-12;
};

struct FitReport {
    int iterations = 0;
    double final_primal = 0.0;
    double final_dual = 0.0;
    double initial_objective = 0.0;
    std::vector<double> objective_trace; // mean loss after each iteration
    std::vector<double> primal_trace;
    std::vector<double> dual_trace;
    double alpha_used = 0.0;
    double beta_used = 0.0;
    double wall_seconds = 0.0;
    bool converged = false;
    std::vector<std::string> warnings;
};

/// One proximal u-step: u = (beta A'A + alpha I)^{-1} (alpha u_prev + A'(beta v - w)).
/// Standalone variant that factors the matrix on every call; the fit loop
/// caches the factorization instead.
inline VectorXd u_update(const Eigen::Ref<const VectorXd>& u_prev,
                         const Eigen::Ref<const VectorXd>& v, const Eigen::Ref<const VectorXd>& w,
                         const Eigen::Ref<const MatrixXd>& A, double alpha, double beta) {
    if (alpha <= 0 || beta <= 0) throw ConfigError("u_update: alpha and beta must be positive");
    check_same_size(A.cols(), u_prev.size(), "u_update: u");
    check_same_size(A.rows(), v.size(), "u_update: v");
    check_same_size(A.rows(), w.size(), "u_update: w");
    check_finite(A, "u_update: A");

    MatrixXd M = beta * (A.transpose() * A);
    M.diagonal().array() += alpha;
    Eigen::LLT<MatrixXd> llt(M);
    if (llt.info() != Eigen::Success)
        throw NumericError("u_update: Cholesky factorization failed (non-finite inputs?)");
    return llt.solve(alpha * u_prev + A.transpose() * (beta * v - w));
}

/// Per-coordinate v-step for the smooth losses: solve
/// (1/T) phi'(v_i, y_i) + beta (v_i - b_i) = 0 for each i. Squared loss has
/// the closed form; logistic runs Newton from v = b with a bisection
/// safeguard on [b - 1/(T beta), b + 1/(T beta)], which always brackets the
/// root because |phi'| < 1.
inline VectorXd v_update_newton(const Eigen::Ref<const VectorXd>& b,
                                const Eigen::Ref<const VectorXd>& y, Loss loss, Eigen::Index T,
                                double beta, const AdmmConfig& cfg, int threads = 1) {
    if (loss == Loss::Hinge)
        throw ConfigError("v_update_newton: hinge loss uses v_update_prox_hinge");
    if (T < 1 || beta <= 0) throw ConfigError("v_update_newton: T and beta must be positive");
    check_same_size(b.size(), y.size(), "v_update_newton");
    const double invT = 1.0 / static_cast<double>(T);

    VectorXd v(b.size());
    if (loss == Loss::Squared) {
        const double denom = 2.0 * invT + beta;
        for (Eigen::Index i = 0; i < b.size(); ++i)
            v(i) = (2.0 * invT * y(i) + beta * b(i)) / denom;
        return v;
    }

    check_binary_labels(y, "v_update_newton");
    parallel_for(b.size(), threads, [&](std::ptrdiff_t lo_i, std::ptrdiff_t hi_i) {
        for (std::ptrdiff_t i = lo_i; i < hi_i; ++i) {
            const double bi = b(i), yi = y(i);
            const double radius = 1.0 / (static_cast<double>(T) * beta);
            double lo = bi - radius, hi = bi + radius;
            auto g = [&](double x) { return invT * loss_d1(Loss::Logistic, x, yi) + beta * (x - bi); };
            double x = bi;
            bool done = false;
            for (int it = 0; it < cfg.newton_max_iters; ++it) {
                const double gx = g(x);
                if (gx > 0) hi = x; else lo = x;
                const double gpx = invT * loss_d2(Loss::Logistic, x, yi) + beta;
                const double step = -gx / gpx;
                double next = x + step;
                if (next <= lo || next >= hi) next = 0.5 * (lo + hi); // safeguard
                if (std::abs(next - x) <= cfg.newton_tol) {
                    x = next;
                    done = true;
                    break;
                }
                x = next;
            }
            if (!done) {
                // plain bisection; g is strictly increasing so this cannot fail
                while (hi - lo > cfg.newton_tol) {
                    const double mid = 0.5 * (lo + hi);
                    if (g(mid) > 0) hi = mid; else lo = mid;
                }
                x = 0.5 * (lo + hi);
            }
            v(i) = x;
        }
    });
    return v;
}

/// Exact minimizer of (1/T) max(0, 1 - y_i v) + (beta/2)(v - b_i)^2:
/// with mu = 1/(T beta) and a_i = y_i b_i, the prox is b_i in the zero-loss
/// region (a_i >= 1), b_i + mu y_i in the linear region (a_i <= 1 - mu),
/// and the kink y_i in between.
inline VectorXd v_update_prox_hinge(const Eigen::Ref<const VectorXd>& b,
                                    const Eigen::Ref<const VectorXd>& y, Eigen::Index T,
                                    double beta) {
    if (T < 1 || beta <= 0) throw ConfigError("v_update_prox_hinge: T and beta must be positive");
    check_same_size(b.size(), y.size(), "v_update_prox_hinge");
    check_binary_labels(y, "v_update_prox_hinge");
    const double mu = 1.0 / (static_cast<double>(T) * beta);
    VectorXd v(b.size());
    for (Eigen::Index i = 0; i < b.size(); ++i) {
        const double a = y(i) * b(i);
        if (a >= 1.0) v(i) = b(i);
        else if (a <= 1.0 - mu) v(i) = b(i) + mu * y(i);
        else v(i) = y(i);
    }
    return v;
}

/// Dual ascent step w <- w + beta (A u - v).
inline VectorXd w_update(const Eigen::Ref<const VectorXd>& w, const Eigen::Ref<const MatrixXd>& A,
                         const Eigen::Ref<const VectorXd>& u_next,
                         const Eigen::Ref<const VectorXd>& v_next, double beta) {
    check_same_size(A.cols(), u_next.size(), "w_update: u");
    check_same_size(A.rows(), w.size(), "w_update: w");
    check_same_size(A.rows(), v_next.size(), "w_update: v");
    return w + beta * (A * u_next - v_next);
}

/// Minimum-norm least-squares weights via SVD, truncating singular values
/// below 1e-10 * sigma_max. The analytic path for squared loss.
inline VectorXd fit_pinv(const Eigen::Ref<const MatrixXd>& A, const Eigen::Ref<const VectorXd>& y) {
    check_finite(A, "fit_pinv: A");
    check_finite(y, "fit_pinv: y");
    check_same_size(A.rows(), y.size(), "fit_pinv");
    Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    return svd.solve(y);
}

/// Splitting solver for min_u (1/T) sum_i phi((Au)_i, y_i): alternate the
/// proximal u-step, the per-coordinate v-step on the loss, and the dual
/// w-step, from u = v = w = 0, until both residual norms fall below
/// tol * sqrt(T) or max_iters is hit. The proximal alpha-term vanishes at
/// any fixed point, so it affects the path but not the answer.
inline std::pair<VectorXd, FitReport> fit_admm(const Eigen::Ref<const MatrixXd>& A,
                                               const Eigen::Ref<const VectorXd>& y, Loss loss,
                                               const AdmmConfig& cfg = {}, int threads = 1) {
    const auto t0 = std::chrono::steady_clock::now();
    check_finite(A, "fit_admm: A");
    check_finite(y, "fit_admm: y");
    check_same_size(A.rows(), y.size(), "fit_admm");
    if (cfg.max_iters < 1) throw ConfigError("fit_admm: max_iters must be >= 1");
    if (cfg.tol_primal <= 0 || cfg.tol_dual <= 0)
        throw ConfigError("fit_admm: tolerances must be positive");
    if (loss != Loss::Squared) check_binary_labels(y, "fit_admm");

    const Eigen::Index T = A.rows();
    const Eigen::Index n = A.cols();

    FitReport rep;
    if (T < n)
        rep.warnings.push_back("underdetermined fit: " + std::to_string(T) + " rows for " +
                               std::to_string(n) + " weights");

    MatrixXd AtA = A.transpose() * A;
    const double alpha = cfg.alpha > 0 ? cfg.alpha
                                       : 1e-6 * AtA.trace() / static_cast<double>(n);
    const double beta = cfg.beta > 0 ? cfg.beta : 2.0 / static_cast<double>(T);
    if (!(alpha > 0))
        throw NumericError("fit_admm: automatic alpha is not positive (zero design matrix?)");
    rep.alpha_used = alpha;
    rep.beta_used = beta;

    MatrixXd M = beta * AtA;
    M.diagonal().array() += alpha;
    Eigen::LLT<MatrixXd> llt(M);
    if (llt.info() != Eigen::Success)
        throw NumericError("fit_admm: Cholesky factorization of the u-step matrix failed");

    VectorXd u = VectorXd::Zero(n);
    VectorXd v = VectorXd::Zero(T);
    VectorXd w = VectorXd::Zero(T);
    rep.initial_objective = mean_loss(loss, A * u, y);

    const double sqrtT = std::sqrt(static_cast<double>(T));
    for (int k = 1; k <= cfg.max_iters; ++k) {
        u = llt.solve(alpha * u + A.transpose() * (beta * v - w));
        const VectorXd Au = A * u;
        const VectorXd b = Au + w / beta;
        VectorXd v_next;
        if (loss == Loss::Hinge) v_next = v_update_prox_hinge(b, y, T, beta);
        else v_next = v_update_newton(b, y, loss, T, beta, cfg, threads);
        w += beta * (Au - v_next);

        const double primal = (Au - v_next).norm();
        const double dual = beta * (v_next - v).norm();
        v = v_next;

        rep.iterations = k;
        rep.final_primal = primal;
        rep.final_dual = dual;
        rep.objective_trace.push_back(mean_loss(loss, Au, y));
        rep.primal_trace.push_back(primal);
        rep.dual_trace.push_back(dual);

        if (!std::isfinite(primal) || primal > 1e12) {
            std::string tail;
            const std::size_t from = rep.primal_trace.size() > 5 ? rep.primal_trace.size() - 5 : 0;
            for (std::size_t i = from; i < rep.primal_trace.size(); ++i)
                tail += (tail.empty() ? "" : ", ") + format_double(rep.primal_trace[i]);
            throw NumericError("fit_admm: diverged at iteration " + std::to_string(k) +
                               " (recent primal residuals: " + tail + ")");
        }
        if (primal <= cfg.tol_primal * sqrtT && dual <= cfg.tol_dual * sqrtT) {
            rep.converged = true;
            break;
        }
    }
    if (!rep.converged)
        rep.warnings.push_back("stopped at max_iters=" + std::to_string(cfg.max_iters) +
                               " with primal " + format_double(rep.final_primal) + ", dual " +
                               format_double(rep.final_dual));

    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(u), rep};
}

} // namespace ipl

#endif // IPL_ADMM_HPP
