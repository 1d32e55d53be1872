#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace govmine::stats {

struct AdfResult {
    double statistic = 0;
    double p_value = 0;
    int lags = 0;
    std::size_t n_obs = 0;  // regression observations
};

/// trunc((n - 1)^(1/3))
int default_adf_lags(std::size_t n);

/// Interpolated p-value from the Dickey-Fuller critical values for the
/// constant-plus-trend regression. `n_diff` is the length of the differenced
/// series. Clamped to [0.01, 0.99].
double adf_p_value(double statistic, std::size_t n_diff);

/// Regresses dy_t on (1, t, y_{t-1}, dy_{t-1}, ..., dy_{t-lags}); the
/// statistic is the t-ratio of the y_{t-1} coefficient. Throws
/// PreconditionError when the series is shorter than 3 * (lags + 1) + 3 and
/// SingularDesignError when the regression is singular.
AdfResult adf_test(std::span<const double> series, std::optional<int> lags = std::nullopt);

}  // namespace govmine::stats
