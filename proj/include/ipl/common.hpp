#ifndef IPL_COMMON_HPP
#define IPL_COMMON_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ipl {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Invalid input, configuration, or data. Maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical failure during solving or evaluation. Maps to CLI exit code 3.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// x^e for integer e >= 0 by repeated squaring. Deterministic across
/// platforms, unlike std::pow with a floating exponent.
inline double ipow(double x, int e) {
    if (e < 0) throw NumericError("ipow: negative exponent " + std::to_string(e));
    double r = 1.0;
    while (e > 0) {
        if (e & 1) r *= x;
        x *= x;
        e >>= 1;
    }
    return r;
}

inline void check_finite(const Eigen::Ref<const MatrixXd>& m, const char* what) {
    if (!m.allFinite())
        throw ConfigError(std::string(what) + ": contains NaN or infinite entries");
}

inline void check_same_size(Eigen::Index a, Eigen::Index b, const char* what) {
    if (a != b)
        throw ConfigError(std::string(what) + ": dimension mismatch (" +
                          std::to_string(a) + " vs " + std::to_string(b) + ")");
}

/// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, const std::string& context) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    // tolerate surrounding spaces, common in hand-edited CSVs
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
    double v = 0.0;
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw ConfigError(context + ": cannot parse '" + s + "' as a number");
    return v;
}

} // namespace ipl

#endif // IPL_COMMON_HPP
