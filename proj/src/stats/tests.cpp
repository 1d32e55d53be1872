#include "govmine/stats/tests.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>

#include "govmine/core/error.hpp"

namespace govmine::stats {

std::vector<AdjustedTest> bh_adjust(std::span<const double> p, double alpha) {
    const std::size_t m = p.size();
    for (double v : p)
        if (!(v >= 0 && v <= 1)) throw PreconditionError("p-value outside [0, 1]");
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    std::vector<AdjustedTest> out(m);
    double running = 1.0;
    for (std::size_t r = m; r-- > 0;) {
        const std::size_t i = order[r];
        running = std::min(running, p[i] * static_cast<double>(m) / static_cast<double>(r + 1));
        out[i].raw_p = p[i];
        out[i].adjusted_p = std::min(1.0, running);
        out[i].significant = out[i].adjusted_p < alpha;
    }
    return out;
}

std::vector<double> mann_whitney_null_counts(std::size_t m, std::size_t n) {
    // Coefficients of the Gaussian binomial [m+n choose m]_q.
    const std::size_t top = m * n;
    std::vector<double> c(top + 1, 0.0);
    c[0] = 1.0;
    std::size_t deg = 0;
    for (std::size_t i = 1; i <= m; ++i) {
        // multiply by (1 - q^(n+i))
        const std::size_t s = n + i;
        for (std::size_t u = std::min(top, deg + s); u >= s; --u) c[u] -= c[u - s];
        deg += s;
        // divide by (1 - q^i)
        for (std::size_t u = i; u <= std::min(top, deg); ++u) c[u] += c[u - i];
        deg -= i;
    }
    return c;
}

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw PreconditionError("Mann-Whitney test needs two nonempty samples");
    const std::size_t m = a.size(), n = b.size(), N = m + n;
    std::vector<std::pair<double, int>> all;
    all.reserve(N);
    for (double v : a) all.emplace_back(v, 0);
    for (double v : b) all.emplace_back(v, 1);
    std::sort(all.begin(), all.end());
    double rank_sum_a = 0;
    double tie_term = 0;
    bool ties = false;
    for (std::size_t i = 0; i < N;) {
        std::size_t j = i;
        while (j < N && all[j].first == all[i].first) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        const double t = static_cast<double>(j - i);
        if (j - i > 1) ties = true;
        tie_term += t * t * t - t;
        for (std::size_t k = i; k < j; ++k)
            if (all[k].second == 0) rank_sum_a += avg;
        i = j;
    }
    const double md = static_cast<double>(m), nd = static_cast<double>(n), Nd = static_cast<double>(N);
    MannWhitneyResult r;
    r.U = rank_sum_a - md * (md + 1) / 2.0;
    if (m * n <= 400 && !ties) {
        r.exact = true;
        const auto counts = mann_whitney_null_counts(m, n);
        const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
        const auto u = static_cast<std::size_t>(std::llround(r.U));
        double lower = 0, upper = 0;
        for (std::size_t k = 0; k <= u; ++k) lower += counts[k];
        for (std::size_t k = u; k < counts.size(); ++k) upper += counts[k];
        r.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / total);
        return r;
    }
    const double mu = md * nd / 2.0;
    const double var = md * nd / 12.0 * ((Nd + 1) - tie_term / (Nd * (Nd - 1)));
    if (!(var > 0)) {
        r.p_value = 1.0;
        return r;
    }
    const double z = (std::abs(r.U - mu) - 0.5) / std::sqrt(var);
    r.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    return r;
}

}  // namespace govmine::stats
