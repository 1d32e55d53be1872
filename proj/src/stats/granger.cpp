#include "govmine/stats/granger.hpp"

#include <cmath>
#include <numeric>

#include <spdlog/spdlog.h>

#include "govmine/core/error.hpp"
#include "govmine/stats/distributions.hpp"
#include "govmine/stats/ols.hpp"

namespace govmine::stats {

GrangerPairResult granger_pair(std::span<const double> x, std::span<const double> y, int K) {
    if (K < 1) throw PreconditionError("Granger lag must be >= 1");
    if (x.size() != y.size()) throw PreconditionError("Granger series lengths differ");
    if (x.size() < min_granger_length(K))
        throw PreconditionError("Granger lag " + std::to_string(K) + " needs at least " +
                                std::to_string(min_granger_length(K)) + " observations, got " +
                                std::to_string(x.size()));
    const auto k = static_cast<std::size_t>(K);
    const std::size_t T = x.size() - k;
    const auto Ti = static_cast<Eigen::Index>(T);
    Eigen::MatrixXd Xu(Ti, static_cast<Eigen::Index>(1 + 2 * k));
    Eigen::VectorXd yt(Ti);
    for (std::size_t r = 0; r < T; ++r) {
        const std::size_t t = r + k;
        const auto ri = static_cast<Eigen::Index>(r);
        yt[ri] = y[t];
        Xu(ri, 0) = 1.0;
        for (std::size_t j = 1; j <= k; ++j) {
            Xu(ri, static_cast<Eigen::Index>(j)) = y[t - j];
            Xu(ri, static_cast<Eigen::Index>(k + j)) = x[t - j];
        }
    }
    const auto restricted = ols(Xu.leftCols(static_cast<Eigen::Index>(1 + k)), yt);
    const auto unrestricted = ols(Xu, yt);
    if (!(unrestricted.rss > 0)) throw SingularDesignError("unrestricted Granger model fits exactly");
    GrangerPairResult r;
    r.n_obs = T;
    r.rss_restricted = restricted.rss;
    r.rss_unrestricted = unrestricted.rss;
    const double df = static_cast<double>(T) - 2.0 * K - 1.0;
    r.wald = (restricted.rss - unrestricted.rss) / unrestricted.rss * df;
    r.f_stat = r.wald / K;
    r.f_p = f_upper_tail(r.f_stat, K, df);
    return r;
}

GrangerResult granger_panel(std::span<const PanelUnit> units, const GrangerPanelOptions& options) {
    const int K = options.lag;
    GrangerResult res;
    res.lag = K;
    for (const auto& u : units) {
        if (u.x.size() != u.y.size()) throw PreconditionError("unit " + u.id + " has misaligned series");
        if (u.x.size() < min_granger_length(K)) {
            res.excluded_short.push_back(u.id);
            continue;
        }
        try {
            const auto r = granger_pair(u.x, u.y, K);
            res.units_used.push_back(u.id);
            res.wald.push_back(r.wald);
            res.n_obs.push_back(r.n_obs);
        } catch (const SingularDesignError& e) {
            spdlog::debug("granger: skipping unit {}: {}", u.id, e.what());
            res.excluded_degenerate.push_back(u.id);
        }
    }
    const std::size_t N = res.units_used.size();
    if (N < 2)
        throw PreconditionError("panel Granger test needs at least 2 usable units, got " + std::to_string(N));
    const double Nd = static_cast<double>(N);
    res.w_bar = std::accumulate(res.wald.begin(), res.wald.end(), 0.0) / Nd;
    res.z_bar = std::sqrt(Nd / (2.0 * K)) * (res.w_bar - K);
    double p_stat = res.z_bar;
    // Small-sample moments need T > 2K + 5 for every unit.
    const bool moments_defined = std::all_of(res.n_obs.begin(), res.n_obs.end(), [K](std::size_t T) {
        return static_cast<double>(T) > 2.0 * K + 5.0;
    });
    if (moments_defined) {
        double mean_e = 0, mean_v = 0;
        for (std::size_t T : res.n_obs) {
            const double t = static_cast<double>(T);
            mean_e += K * (t - 2 * K - 1) / (t - 2 * K - 3);
            mean_v += 2.0 * K * (t - 2 * K - 1) * (t - 2 * K - 1) * (t - K - 3) /
                      ((t - 2 * K - 3) * (t - 2 * K - 3) * (t - 2 * K - 5));
        }
        mean_e /= Nd;
        mean_v /= Nd;
        res.z_tilde = std::sqrt(Nd) * (res.w_bar - mean_e) / std::sqrt(mean_v);
    }
    if (options.small_sample) {
        if (!res.z_tilde) throw PreconditionError("series too short for the small-sample panel statistic");
        p_stat = *res.z_tilde;
    }
    res.p_value = normal_two_sided_p(p_stat);
    return res;
}

}  // namespace govmine::stats
