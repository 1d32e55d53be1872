#include "govmine/stats/adf.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "govmine/core/error.hpp"
#include "govmine/stats/ols.hpp"

namespace govmine::stats {

namespace {

// Dickey-Fuller critical values, regression with constant and trend.
// Rows: sample size; columns: lower-tail probability.
constexpr std::array<double, 6> kTableT{25, 50, 100, 250, 500, 100000};
constexpr std::array<double, 8> kTableP{0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99};
constexpr std::array<std::array<double, 6>, 8> kTable{{
    {-4.38, -4.15, -4.04, -3.99, -3.98, -3.96},
    {-3.95, -3.80, -3.73, -3.69, -3.68, -3.66},
    {-3.60, -3.50, -3.45, -3.43, -3.42, -3.41},
    {-3.24, -3.18, -3.15, -3.13, -3.13, -3.12},
    {-1.14, -1.19, -1.22, -1.23, -1.24, -1.25},
    {-0.80, -0.87, -0.90, -0.92, -0.93, -0.94},
    {-0.50, -0.58, -0.62, -0.64, -0.65, -0.66},
    {-0.15, -0.24, -0.28, -0.31, -0.32, -0.33},
}};

// Piecewise-linear interpolation with constant extrapolation; xs increasing.
template <std::size_t N>
double interpolate(const std::array<double, N>& xs, const std::array<double, N>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
    const auto lo = hi - 1;
    return ys[lo] + (ys[hi] - ys[lo]) * (x - xs[lo]) / (xs[hi] - xs[lo]);
}

}  // namespace

int default_adf_lags(std::size_t n) {
    if (n < 2) return 0;
    return static_cast<int>(std::trunc(std::cbrt(static_cast<double>(n - 1))));
}

double adf_p_value(double statistic, std::size_t n_diff) {
    std::array<double, 8> crit{};
    for (std::size_t j = 0; j < kTableP.size(); ++j) crit[j] = interpolate(kTableT, kTable[j], static_cast<double>(n_diff));
    return interpolate(crit, kTableP, statistic);
}

AdfResult adf_test(std::span<const double> x, std::optional<int> lags) {
    const int k = lags.value_or(default_adf_lags(x.size()));
    if (k < 0) throw PreconditionError("ADF lag order must be >= 0");
    const auto needed = static_cast<std::size_t>(3 * (k + 1) + 3);
    if (x.size() < needed)
        throw PreconditionError("ADF with " + std::to_string(k) + " lags needs at least " + std::to_string(needed) +
                                " observations, got " + std::to_string(x.size()));
    const std::size_t n = x.size() - 1;  // length of the differenced series
    std::vector<double> dy(n);
    for (std::size_t i = 0; i < n; ++i) dy[i] = x[i + 1] - x[i];
    const auto K = static_cast<std::size_t>(k);
    const std::size_t rows = n - K;
    Eigen::MatrixXd X(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(3 + K));
    Eigen::VectorXd y(static_cast<Eigen::Index>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + K;  // index into dy
        const auto ri = static_cast<Eigen::Index>(r);
        y[ri] = dy[t];
        X(ri, 0) = x[t];
        X(ri, 1) = 1.0;
        X(ri, 2) = static_cast<double>(t + 1);
        for (std::size_t j = 1; j <= K; ++j) X(ri, static_cast<Eigen::Index>(2 + j)) = dy[t - j];
    }
    const auto fit = ols(X, y);
    AdfResult r;
    r.lags = k;
    r.n_obs = rows;
    r.statistic = fit.beta[0] / fit.se[0];
    r.p_value = adf_p_value(r.statistic, n);
    return r;
}

}  // namespace govmine::stats
