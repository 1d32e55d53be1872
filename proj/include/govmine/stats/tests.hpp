#pragma once

#include <span>
#include <vector>

namespace govmine::stats {

struct AdjustedTest {
    double raw_p = 1;
    double adjusted_p = 1;
    bool significant = false;
};

/// Benjamini-Hochberg step-up adjustment; `significant` is adjusted_p < alpha.
/// Throws PreconditionError for p outside [0, 1].
std::vector<AdjustedTest> bh_adjust(std::span<const double> p_values, double alpha = 0.01);

struct MannWhitneyResult {
    double U = 0;  // for sample a: pairs with a > b, ties count one half
    double p_value = 1;
    bool exact = false;
};

/// Two-sided test. Exact null distribution when n_a * n_b <= 400 and there are
/// no ties; otherwise normal approximation with tie-corrected variance and
/// continuity correction. Throws PreconditionError on an empty sample.
MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

/// Number of rank arrangements of sizes (m, n) with each U value 0..m*n.
std::vector<double> mann_whitney_null_counts(std::size_t m, std::size_t n);

}  // namespace govmine::stats
