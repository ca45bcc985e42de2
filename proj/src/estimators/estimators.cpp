#include "fbmsde/estimators.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbmsde/asym_variances.hpp"

namespace fbmsde {

std::string EstimateFlags::to_string() const {
    std::string out;
    auto add = [&](EstimateFlag f, const char* name) {
        if (has(f)) {
            if (!out.empty()) {
                out += '|';
            }
            out += name;
        }
    };
    add(EstimateFlag::clamped, "clamped");
    add(EstimateFlag::boundary_inversion, "boundary_inversion");
    add(EstimateFlag::degenerate, "degenerate");
    add(EstimateFlag::unavailable, "unavailable");
    return out;
}

std::string_view to_string(HurstEstimator e) noexcept {
    return e == HurstEstimator::h1 ? "h1" : "h2";
}

double normal_critical_value(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::domain_error("confidence level must lie in (0,1)");
    }
    return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 * (1.0 + level));
}

namespace {

void require_positive_path(std::span<const double> values, std::size_t min_points,
                           const char* who) {
    if (values.size() < min_points) {
        throw std::invalid_argument(std::string(who) + ": need at least " +
                                    std::to_string(min_points) + " observations");
    }
    for (double x : values) {
        if (!(x != 0.0) || !std::isfinite(x)) {
            throw std::invalid_argument(std::string(who) +
                                        ": observations must be finite and non-zero");
        }
    }
}

double plug_in(double h) { return std::clamp(h, kPlugInLow, kPlugInHigh); }

} // namespace

double vnt(std::span<const double> values, double horizon, double hurst) {
    if (values.size() < 3) {
        throw std::invalid_argument("vnt: need at least 3 values");
    }
    if (!(hurst > 0.5 && hurst < 1.0) || !(horizon > 0.0)) {
        throw std::domain_error("vnt: need H in (1/2,1) and T > 0");
    }
    const double n = static_cast<double>(values.size() - 1);
    const double scale = std::pow(horizon, -hurst);
    double sum = 0.0;
    for (std::size_t k = 1; k + 1 < values.size(); ++k) {
        const double d = scale * (values[k + 1] - 2.0 * values[k] + values[k - 1]);
        sum += d * d;
    }
    return std::pow(n, 2.0 * hurst - 1.0) / (4.0 - std::pow(2.0, 2.0 * hurst)) * sum;
}

double phi(std::size_t n, double horizon, double x) {
    if (!(static_cast<double>(n) > horizon) || !(horizon > 0.0)) {
        throw std::domain_error("phi: requires n > T > 0");
    }
    if (!(x > 0.0 && x < 1.0)) {
        throw std::domain_error("phi: x must lie in (0,1)");
    }
    return std::pow(horizon / static_cast<double>(n), 2.0 * x) * (4.0 - std::pow(2.0, 2.0 * x));
}

PhiInversion phi_inverse(std::size_t n, double horizon, double y) {
    if (std::isnan(y)) {
        throw std::invalid_argument("phi_inverse: y is NaN");
    }
    double lo = kBracketDelta;
    double hi = 1.0 - kBracketDelta;
    if (y >= phi(n, horizon, lo)) {
        return {lo, true};
    }
    if (y <= phi(n, horizon, hi)) {
        return {hi, true};
    }
    // phi decreasing: phi(lo) > y > phi(hi) throughout.
    while (hi - lo > kInversionTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (phi(n, horizon, mid) > y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {0.5 * (lo + hi), false};
}

double normalized_square_sum(std::span<const double> values) {
    double sum = 0.0;
    for (std::size_t k = 1; k + 1 < values.size(); ++k) {
        const double r = (values[k + 1] - 2.0 * values[k] + values[k - 1]) / values[k];
        sum += r * r;
    }
    return sum;
}

HurstEstimate estimate_h1(std::span<const double> values, double horizon, double c,
                          double level) {
    require_positive_path(values, 3, "estimate_h1");
    if (c == 0.0 || !std::isfinite(c)) {
        throw std::invalid_argument("estimate_h1: c must be finite and non-zero");
    }
    const std::size_t n = values.size() - 1;
    const double nd = static_cast<double>(n);
    const double sum = normalized_square_sum(values);
    const double statistic = sum / (c * c) / nd;

    const PhiInversion inv = phi_inverse(n, horizon, statistic);
    HurstEstimate est{};
    est.estimator = HurstEstimator::h1;
    est.level = level;
    est.raw_value = inv.value;
    est.value = inv.value;
    if (inv.boundary) {
        est.flags.set(EstimateFlag::boundary_inversion);
    }
    if (sum == 0.0) {
        est.flags.set(EstimateFlag::degenerate);
    }
    const double sigma2 = shared_variance_cache().get(plug_in(est.value)).sigma2;
    est.std_error = std::sqrt(sigma2) / (2.0 * std::sqrt(nd) * std::log(nd / horizon));
    const double z = normal_critical_value(level);
    est.ci_low = est.value - z * est.std_error;
    est.ci_high = est.value + z * est.std_error;
    return est;
}

HurstEstimate estimate_h1(const SamplePath& path, double c, double level) {
    return estimate_h1(path.values, path.grid.horizon(), c, level);
}

HurstEstimate estimate_h2(std::span<const double> values, double level) {
    if (values.size() % 2 == 0) {
        throw std::invalid_argument(
            "estimate_h2: path length must be odd (2n + 1 points) to form the nested n-grid");
    }
    require_positive_path(values, 5, "estimate_h2");
    const std::size_t coarse_n = (values.size() - 1) / 2;

    std::vector<double> coarse(coarse_n + 1);
    for (std::size_t k = 0; k <= coarse_n; ++k) {
        coarse[k] = values[2 * k];
    }
    const double fine_sum = normalized_square_sum(values);
    const double coarse_sum = normalized_square_sum(coarse);

    HurstEstimate est{};
    est.estimator = HurstEstimator::h2;
    est.level = level;
    if (fine_sum == 0.0 && coarse_sum == 0.0) {
        est.raw_value = 1.0 - kBracketDelta;
        est.flags.set(EstimateFlag::degenerate);
        est.flags.set(EstimateFlag::boundary_inversion);
    } else if (coarse_sum == 0.0 || fine_sum == 0.0) {
        est.raw_value = coarse_sum == 0.0 ? -std::numeric_limits<double>::infinity()
                                          : std::numeric_limits<double>::infinity();
        est.flags.set(EstimateFlag::boundary_inversion);
    } else {
        est.raw_value = 0.5 - std::log(fine_sum / coarse_sum) / (2.0 * std::numbers::ln2);
    }
    est.value = std::clamp(est.raw_value, kBracketDelta, 1.0 - kBracketDelta);
    if (!(est.raw_value > 0.0 && est.raw_value < 1.0)) {
        est.flags.set(EstimateFlag::clamped);
    }

    const double sigma_star2 = shared_variance_cache().get(plug_in(est.value)).sigma_star2;
    est.std_error = std::sqrt(sigma_star2) /
                    (2.0 * std::numbers::ln2 * std::sqrt(static_cast<double>(coarse_n)));
    const double z = normal_critical_value(level);
    est.ci_low = est.value - z * est.std_error;
    est.ci_high = est.value + z * est.std_error;
    return est;
}

HurstEstimate estimate_h2(const SamplePath& path, double level) {
    return estimate_h2(path.values, level);
}

VolatilityEstimate estimate_c2(std::span<const double> values, double h3, double horizon,
                               double level) {
    require_positive_path(values, 4, "estimate_c2");
    if (!(h3 > 0.0 && h3 < 1.0)) {
        throw std::domain_error("estimate_c2: plug-in Hurst index must lie in (0,1)");
    }
    if (!(horizon > 0.0)) {
        throw std::domain_error("estimate_c2: T must be positive");
    }
    const double n = static_cast<double>(values.size() - 1);
    const double sum = normalized_square_sum(values);

    VolatilityEstimate est{};
    est.level = level;
    est.h_used = h3;
    est.c2 = std::pow(n, 2.0 * h3 - 1.0) /
             (std::pow(horizon, 2.0 * h3) * (4.0 - std::pow(2.0, 2.0 * h3))) * sum;
    if (sum == 0.0) {
        est.flags.set(EstimateFlag::degenerate);
    }
    const double sigma2 = shared_variance_cache().get(plug_in(h3)).sigma2;
    est.std_error = est.c2 * std::sqrt(sigma2) / std::sqrt(n);
    const double z = normal_critical_value(level);
    est.ci_low = std::max(0.0, est.c2 - z * est.std_error);
    est.ci_high = est.c2 + z * est.std_error;
    return est;
}

VolatilityEstimate estimate_c2(const SamplePath& path, double h3, double level) {
    return estimate_c2(path.values, h3, path.grid.horizon(), level);
}

} // namespace fbmsde
