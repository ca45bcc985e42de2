#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fbmsde {

// Linear-interpolation (type 7) quantile of sorted data, p in [0,1].
double quantile_type7(std::span<const double> sorted, double p);

struct Summary {
    std::size_t count;
    double mean;
    double variance;  // unbiased, N - 1 divisor (0 for a single value)
    double sd;
    double q1;
    double median;
    double q3;
    double iqr;
};

// Throws std::invalid_argument on empty input.
Summary summarize(std::span<const double> values);

// P(K > lambda) for the Kolmogorov distribution (limit law of sqrt(N) D_N).
double kolmogorov_survival(double lambda);

struct KsResult {
    double statistic;  // D_N = sup |F_N - Phi|
    double p_value;    // asymptotic, kolmogorov_survival(sqrt(N) D_N)
};

// One-sample Kolmogorov-Smirnov test of the values against N(0,1).
KsResult ks_test_standard_normal(std::span<const double> values);

struct LinearFit {
    double slope;
    double intercept;
    double r2;
    double adj_r2;  // 1 - (1 - R^2)(N - 1)/(N - 2)
    std::size_t points;
};

// Ordinary least squares y = slope x + intercept; needs >= 3 points and
// non-constant x.
LinearFit ols_fit(std::span<const double> x, std::span<const double> y);

} // namespace fbmsde
