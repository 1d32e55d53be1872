#include "govmine/stats/distributions.hpp"

#include <cmath>

#include <boost/math/distributions/fisher_f.hpp>

namespace govmine::stats {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_two_sided_p(double z) { return std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0))); }

double f_upper_tail(double f, double df1, double df2) {
    if (!(f > 0)) return 1.0;
    return boost::math::cdf(boost::math::complement(boost::math::fisher_f(df1, df2), f));
}

}  // namespace govmine::stats
