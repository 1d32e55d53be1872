#pragma once

#include <Eigen/Dense>

namespace govmine::stats {

struct OlsFit {
    Eigen::VectorXd beta;
    Eigen::VectorXd se;  // classical standard errors
    double rss = 0;
    Eigen::Index n = 0;
    Eigen::Index p = 0;

    double df_resid() const { return static_cast<double>(n - p); }
};

/// Least squares by column-pivoted QR. Throws SingularDesignError when X is
/// rank deficient or has no residual degrees of freedom.
OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

}  // namespace govmine::stats
