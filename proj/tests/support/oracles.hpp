// Independent reference implementations the tests check the library
// against. Everything here is deliberately written the slow, obvious way
// and shares no code with the headers under test.

#ifndef IPL_TESTS_ORACLES_HPP
#define IPL_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/LU>

namespace oracles {

// Golden-section search for the minimum of a unimodal scalar function.
template <typename F>
double golden_section_minimize(F f, double lo, double hi, int iters = 300) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2.0;
}

// Coarse grid scan followed by golden-section refinement around the best
// cell; works for any continuous function with a minimum inside [lo, hi].
template <typename F>
double grid_minimize(F f, double lo, double hi, int grid = 4000) {
    double best_x = lo, best_f = f(lo);
    for (int i = 1; i <= grid; ++i) {
        const double x = lo + (hi - lo) * i / grid;
        const double fx = f(x);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
    }
    const double h = (hi - lo) / grid;
    return golden_section_minimize(f, std::max(lo, best_x - 2 * h),
                                   std::min(hi, best_x + 2 * h));
}

// Pearson correlation; applied to rank vectors it equals the rank
// correlation the library computes via the difference formula.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

// AUC by counting concordant positive/negative pairs, half credit for ties.
inline double pair_counting_auc(const Eigen::VectorXd& scores, const Eigen::VectorXd& labels) {
    double num = 0, den = 0;
    for (Eigen::Index i = 0; i < scores.size(); ++i)
        for (Eigen::Index j = 0; j < scores.size(); ++j) {
            if (labels(i) != 1.0 || labels(j) != -1.0) continue;
            den += 1.0;
            if (scores(i) > scores(j)) num += 1.0;
            else if (scores(i) == scores(j)) num += 0.5;
        }
    return num / den;
}

// Numerical matrix rank through a pivoted LU, independent of the SVD path
// the library uses.
inline Eigen::Index lu_rank(const Eigen::MatrixXd& m, double rel_threshold = 1e-10) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(rel_threshold);
    return lu.rank();
}

// Exact multinomial coefficient s! / ((s-|a|)! * prod a_k!) from factorials;
// valid for s <= 20 where 64-bit factorials do not overflow.
inline std::uint64_t factorial_multinomial(int s, const std::vector<int>& alpha) {
    auto fact = [](int k) {
        std::uint64_t f = 1;
        for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
        return f;
    };
    int total = 0;
    for (int a : alpha) total += a;
    std::uint64_t denom = fact(s - total);
    for (int a : alpha) denom *= fact(a);
    return fact(s) / denom;
}

// Count of exponent tuples with |alpha| <= degree via the Pascal-style
// recurrence N(d, s) = N(d-1, s) + N(d, s-1).
inline long long monomial_count(int dim, int degree) {
    if (dim == 0 || degree == 0) return 1;
    return monomial_count(dim - 1, degree) + monomial_count(dim, degree - 1);
}

} // namespace oracles

#endif // IPL_TESTS_ORACLES_HPP
