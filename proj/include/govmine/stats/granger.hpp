#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace govmine::stats {

struct GrangerPairResult {
    double wald = 0;    // (RSS_r - RSS_u) / RSS_u * (T - 2K - 1)
    double f_stat = 0;  // wald / K
    double f_p = 0;
    std::size_t n_obs = 0;  // T
    double rss_restricted = 0;
    double rss_unrestricted = 0;
};

/// Minimum series length for a lag-K test.
inline std::size_t min_granger_length(int K) { return static_cast<std::size_t>(5 * K + 2); }

/// Does x Granger-cause y? Restricted model: y_t on (1, y_{t-1..t-K});
/// unrestricted adds x_{t-1..t-K}. Throws PreconditionError on unequal or
/// short input and SingularDesignError on a collinear design.
GrangerPairResult granger_pair(std::span<const double> x, std::span<const double> y, int K = 2);

/// One panel unit: a project's aligned x and y series.
struct PanelUnit {
    std::string id;
    std::vector<double> x;
    std::vector<double> y;
};

struct GrangerResult {
    std::string x_var;
    std::string y_var;
    int lag = 0;
    std::vector<std::string> units_used;
    std::vector<double> wald;      // per used unit
    std::vector<std::size_t> n_obs;  // per used unit
    double w_bar = 0;
    double z_bar = 0;
    std::optional<double> z_tilde;
    double p_value = 1;
    std::vector<std::string> excluded_short;
    std::vector<std::string> excluded_degenerate;

    std::size_t n_projects_used() const { return units_used.size(); }
};

struct GrangerPanelOptions {
    int lag = 2;
    /// Use the small-sample Z-tilde for the p-value (Z-bar is always reported).
    bool small_sample = false;
};

/// Dumitrescu-Hurlin test: W_bar = mean Wald, Z_bar = sqrt(N / 2K) (W_bar - K),
/// two-sided normal p-value. Units shorter than 5K + 2 or with a singular
/// design are skipped and listed. Throws PreconditionError when fewer than
/// two units are usable.
GrangerResult granger_panel(std::span<const PanelUnit> units, const GrangerPanelOptions& options = {});

}  // namespace govmine::stats
