#include "fbmsde/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fbmsde {

double quantile_type7(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw std::invalid_argument("quantile of empty sample");
    }
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

Summary summarize(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("summarize: empty sample");
    }
    Summary s{};
    s.count = values.size();
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    s.mean = sum / static_cast<double>(s.count);
    double ss = 0.0;
    for (double v : values) {
        ss += (v - s.mean) * (v - s.mean);
    }
    s.variance = s.count > 1 ? ss / static_cast<double>(s.count - 1) : 0.0;
    s.sd = std::sqrt(s.variance);

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    s.q1 = quantile_type7(sorted, 0.25);
    s.median = quantile_type7(sorted, 0.5);
    s.q3 = quantile_type7(sorted, 0.75);
    s.iqr = s.q3 - s.q1;
    return s;
}

double kolmogorov_survival(double lambda) {
    if (!(lambda > 0.0)) {
        return 1.0;
    }
    if (lambda < 1.0) {
        // P(K <= x) = sqrt(2 pi)/x sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 x^2))
        const double f = -std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
        double cdf = 0.0;
        for (int k = 1; k < 50; ++k) {
            const double term = std::exp(f * (2.0 * k - 1.0) * (2.0 * k - 1.0));
            cdf += term;
            if (term < 1e-17 * cdf) {
                break;
            }
        }
        cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double q = 0.0;
    double sign = 1.0;
    for (int k = 1; k < 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        q += sign * term;
        if (term < 1e-17) {
            break;
        }
        sign = -sign;
    }
    return std::clamp(2.0 * q, 0.0, 1.0);
}

KsResult ks_test_standard_normal(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("ks test: empty sample");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-sorted[i] / std::numbers::sqrt2);
        const double i_d = static_cast<double>(i);
        d = std::max({d, (i_d + 1.0) / n - cdf, cdf - i_d / n});
    }
    return {d, kolmogorov_survival(std::sqrt(n) * d)};
}

LinearFit ols_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("ols_fit: x and y differ in length");
    }
    if (x.size() < 3) {
        throw std::invalid_argument("ols_fit: need at least 3 points");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("ols_fit: x is constant");
    }
    LinearFit fit{};
    fit.points = x.size();
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.slope * x[i] + fit.intercept);
        sse += r * r;
    }
    fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    fit.adj_r2 = 1.0 - (1.0 - fit.r2) * (n - 1.0) / (n - 2.0);
    return fit;
}

} // namespace fbmsde
