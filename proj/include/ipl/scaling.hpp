#ifndef IPL_SCALING_HPP
#define IPL_SCALING_HPP

#include <Eigen/Dense>

#include "ipl/common.hpp"

namespace ipl {

/// Per-feature min-max scaling onto [0, 1], fitted on training data and
/// stored with the model so later inputs are mapped identically. Constant
/// features keep a unit denominator (they scale to 0, not NaN). Scaling is
/// never inverted; coefficients and importances live in scaled space.
struct MinMaxScaling {
    VectorXd min;
    VectorXd max;

    Eigen::Index dim() const { return min.size(); }

    static MinMaxScaling fit(const Eigen::Ref<const MatrixXd>& X) {
        if (X.rows() < 1) throw ConfigError("MinMaxScaling: no rows to fit on");
        check_finite(X, "MinMaxScaling: data");
        MinMaxScaling s;
        s.min = X.colwise().minCoeff();
        s.max = X.colwise().maxCoeff();
        return s;
    }

    VectorXd denom() const {
        VectorXd d = max - min;
        for (Eigen::Index k = 0; k < d.size(); ++k)
            if (d(k) <= 0.0) d(k) = 1.0;
        return d;
    }

    VectorXd apply(const VectorXd& x) const {
        check_same_size(x.size(), min.size(), "MinMaxScaling::apply");
        return (x - min).cwiseQuotient(denom());
    }

    MatrixXd apply(const MatrixXd& X) const {
        check_same_size(X.cols(), min.size(), "MinMaxScaling::apply");
        const VectorXd d = denom();
        return (X.rowwise() - min.transpose()).array().rowwise() / d.transpose().array();
    }
};

} // namespace ipl

#endif // IPL_SCALING_HPP
