#include "govmine/stats/ols.hpp"

#include "govmine/core/error.hpp"

namespace govmine::stats {

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.rows() != y.size()) throw PreconditionError("design and response sizes differ");
    const auto n = X.rows(), p = X.cols();
    if (n <= p) throw SingularDesignError("no residual degrees of freedom (n = " + std::to_string(n) +
                                          ", p = " + std::to_string(p) + ")");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < p) throw SingularDesignError("rank-deficient design (rank " + std::to_string(qr.rank()) + " < " +
                                                 std::to_string(p) + ")");
    OlsFit fit;
    fit.n = n;
    fit.p = p;
    fit.beta = qr.solve(y);
    fit.rss = (y - X * fit.beta).squaredNorm();
    const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd Rinv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    const double sigma = std::sqrt(fit.rss / fit.df_resid());
    fit.se.resize(p);
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index i = 0; i < p; ++i) fit.se[perm[i]] = sigma * Rinv.row(i).norm();
    return fit;
}

}  // namespace govmine::stats
