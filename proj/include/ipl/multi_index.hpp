#ifndef IPL_MULTI_INDEX_HPP
#define IPL_MULTI_INDEX_HPP

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "ipl/common.hpp"

namespace ipl {

/// Exponent vector of a monomial over the embedded variables.
struct MultiIndex {
    std::vector<int> exponents;

    int dim() const { return static_cast<int>(exponents.size()); }

    /// Total degree |alpha|.
    int degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }

    bool operator==(const MultiIndex&) const = default;
};

/// Graded lexicographic order: lower total degree first, then ascending
/// lexicographic comparison of the exponent tuples. The fixed ordering keeps
/// enumerations, reports, and tie-breaks reproducible.
inline bool grlex_less(const MultiIndex& a, const MultiIndex& b) {
    const int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    return a.exponents < b.exponents;
}

struct GrlexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const { return grlex_less(a, b); }
};

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r))
        throw NumericError(std::string(what) + ": integer overflow");
    return r;
}

/// C(n, k) exactly; every intermediate res*(n-k+i)/i is integral.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k, const char* what) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t res = 1;
    for (std::uint64_t i = 1; i <= k; ++i)
        res = checked_mul(res, n - k + i, what) / i;
    return res;
}

} // namespace detail

/// Number of multi-indices with |alpha| <= degree in `dim` variables:
/// C(degree + dim, degree). Throws on overflow rather than wrapping.
inline std::uint64_t polynomial_space_dimension(int dim, int degree) {
    if (dim < 1) throw ConfigError("polynomial_space_dimension: dim must be >= 1");
    if (degree < 0) throw ConfigError("polynomial_space_dimension: degree must be >= 0");
    return detail::binomial(static_cast<std::uint64_t>(dim) + static_cast<std::uint64_t>(degree),
                            static_cast<std::uint64_t>(degree), "polynomial_space_dimension");
}

/// All multi-indices with |alpha| <= degree, in graded lexicographic order.
inline std::vector<MultiIndex> enumerate_multi_indices(int dim, int degree) {
    if (dim < 1) throw ConfigError("enumerate_multi_indices: dim must be >= 1");
    if (degree < 0) throw ConfigError("enumerate_multi_indices: degree must be >= 0");
    const std::uint64_t count = polynomial_space_dimension(dim, degree);
    if (count > (std::uint64_t{1} << 31))
        throw NumericError("enumerate_multi_indices: " + std::to_string(count) +
                           " indices exceed the enumeration limit");

    std::vector<MultiIndex> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<int> cur(static_cast<std::size_t>(dim), 0);
    // Fill positions left to right with ascending exponents; within one total
    // degree this emits tuples in ascending lexicographic order.
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == dim - 1) {
            cur[static_cast<std::size_t>(pos)] = remaining;
            out.push_back(MultiIndex{cur});
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            cur[static_cast<std::size_t>(pos)] = e;
            self(self, pos + 1, remaining - e);
        }
        cur[static_cast<std::size_t>(pos)] = 0;
    };
    for (int total = 0; total <= degree; ++total) rec(rec, 0, total);
    return out;
}

/// Exact multinomial coefficient s! / ((s - |alpha|)! * prod_k alpha_k!),
/// the weight of the monomial x^alpha in the expansion of (1 + eta.x)^s.
/// Exact integer arithmetic is guaranteed for s <= 20; larger s is rejected.
inline std::uint64_t multinomial_coefficient_exact(int s, const MultiIndex& alpha) {
    if (s < 1) throw ConfigError("multinomial_coefficient: degree must be >= 1");
    if (s > 20)
        throw NumericError("multinomial_coefficient: degree " + std::to_string(s) +
                           " exceeds the exact-integer limit of 20");
    int total = 0;
    for (int e : alpha.exponents) {
        if (e < 0) throw ConfigError("multinomial_coefficient: negative exponent");
        total += e;
    }
    if (total > s)
        throw ConfigError("multinomial_coefficient: |alpha| = " + std::to_string(total) +
                          " exceeds degree " + std::to_string(s));
    std::uint64_t res = 1;
    std::uint64_t rem = static_cast<std::uint64_t>(s);
    for (int e : alpha.exponents) {
        res = detail::checked_mul(res, detail::binomial(rem, static_cast<std::uint64_t>(e), "multinomial_coefficient"),
                                  "multinomial_coefficient");
        rem -= static_cast<std::uint64_t>(e);
    }
    return res;
}

inline double multinomial_coefficient(int s, const MultiIndex& alpha) {
    return static_cast<double>(multinomial_coefficient_exact(s, alpha));
}

/// Human-readable monomial, e.g. "x2[t]*x3[t]", "y[t-1]^2", "const".
inline std::string term_name(const MultiIndex& alpha, const std::vector<std::string>& names) {
    if (alpha.exponents.size() != names.size())
        throw ConfigError("term_name: exponent/name length mismatch");
    std::string out;
    for (std::size_t k = 0; k < names.size(); ++k) {
        const int e = alpha.exponents[k];
        if (e == 0) continue;
        if (e < 0) throw ConfigError("term_name: negative exponent");
        if (!out.empty()) out += '*';
        out += names[k];
        if (e > 1) {
            out += '^';
            out += std::to_string(e);
        }
    }
    if (out.empty()) return "const";
    return out;
}

} // namespace ipl

#endif // IPL_MULTI_INDEX_HPP
