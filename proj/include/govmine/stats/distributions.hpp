#pragma once

namespace govmine::stats {

double normal_cdf(double z);
/// 2 * P(Z > |z|)
double normal_two_sided_p(double z);
/// Upper tail of the F distribution.
double f_upper_tail(double f, double df1, double df2);

}  // namespace govmine::stats
