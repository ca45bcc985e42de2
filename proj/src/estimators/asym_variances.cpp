#include "fbmsde/asym_variances.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

namespace fbmsde {

namespace {

// Below this lag the displayed formula is used directly; above it the
// fourth central difference of |l|^p is expanded in powers of 1/l:
//   |l|^p sum_{k even >= 4} binom(p,k) (2^{k+1} - 8) l^{-k},
// which avoids cancelling five terms of size l^p.
constexpr std::int64_t kSeriesLag = 5;

double fourth_difference_series(double l, double p) {
    // binom(p, k) built up incrementally; odd orders vanish by symmetry.
    double binom = 1.0;
    for (int j = 0; j < 4; ++j) {
        binom *= (p - j) / (j + 1);
    }
    const double inv_l2 = 1.0 / (l * l);
    double power = inv_l2 * inv_l2;  // l^{-k}
    double two_pow = 32.0;           // 2^{k+1}
    double sum = 0.0;
    for (int k = 4; k < 400; k += 2) {
        const double term = binom * (two_pow - 8.0) * power;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) {
            break;
        }
        binom *= (p - k) / (k + 1.0) * (p - k - 1.0) / (k + 2.0);
        power *= inv_l2;
        two_pow *= 4.0;
    }
    return std::pow(l, p) * sum;
}

} // namespace

double rho(std::int64_t l, double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0) || hurst == 0.5) {
        throw std::domain_error("rho: H must lie in (0,1) and differ from 1/2");
    }
    const double p = 2.0 * hurst;
    const double denominator = p * (1.0 - p) * (2.0 - p) * (3.0 - p);
    const std::int64_t a = l < 0 ? -l : l;
    if (a >= kSeriesLag) {
        return fourth_difference_series(static_cast<double>(a), p) / denominator;
    }
    // Short lags still cancel a few digits; long double absorbs that.
    const long double x = static_cast<long double>(a);
    const long double lp = p;
    auto pw = [lp](long double v) { return std::pow(std::fabs(v), lp); };
    const long double numerator =
        pw(x - 2) - 4 * pw(x - 1) + 6 * pw(x) - 4 * pw(x + 1) + pw(x + 2);
    return static_cast<double>(numerator / denominator);
}

AsymVariances asym_variances(double hurst, double rel_tol) {
    if (!(hurst > 0.5 && hurst < 1.0)) {
        throw std::domain_error("asym_variances: H must lie in (1/2,1), got " +
                                std::to_string(hurst));
    }
    if (!(rel_tol > 0.0)) {
        throw std::domain_error("asym_variances: rel_tol must be positive");
    }
    const double p = 2.0 * hurst;
    const double v = 4.0 - std::pow(2.0, p);
    const double c1 = std::pow(p * (p - 1.0) * (p - 2.0) * (p - 3.0) / v, 2);
    const double lag_one = (std::pow(2.0, p + 2.0) - 7.0 - std::pow(3.0, p)) / v;
    const double c2 = lag_one * lag_one;

    // sum_{l>=2} rho(l) rho(l-j), j = 0, 1, 2
    double square_sum = 0.0;
    double lag1_sum = 0.0;
    double lag2_sum = 0.0;
    double rho_prev2 = rho(0, hurst);
    double rho_prev1 = rho(1, hurst);
    double tail = 0.0;
    std::int64_t l = 2;
    for (;; ++l) {
        if (l - 1 > kMaxSeriesTerms) {
            throw std::runtime_error("asym_variances: series did not converge");
        }
        const double r = rho(l, hurst);
        square_sum += r * r;
        lag1_sum += r * rho_prev1;
        lag2_sum += r * rho_prev2;
        rho_prev2 = rho_prev1;
        rho_prev1 = r;

        if (l < 8) {
            continue;
        }
        // |rho(l')| l'^{4-p} is non-increasing for l' >= 3, so K bounds every
        // term from l - 2 on; integral comparison bounds the three tails.
        const double lag_ref = static_cast<double>(l - 2);
        const double k_ref = std::abs(rho(l - 2, hurst)) * std::pow(lag_ref, 4.0 - p);
        const double exponent = 2.0 * p - 7.0;
        tail = k_ref * k_ref * std::pow(static_cast<double>(l), exponent) / (7.0 - 2.0 * p);
        const double widest_tail = k_ref * k_ref * std::pow(lag_ref, exponent) / (7.0 - 2.0 * p);

        const double partial = 2.0 + c2 + c1 * square_sum;
        const bool term_small = c1 * r * r < rel_tol * partial;
        const bool tail_small = c1 * widest_tail < rel_tol * partial;
        if (term_small && tail_small) {
            break;
        }
    }

    AsymVariances out{};
    out.hurst = hurst;
    out.c1 = c1;
    out.c2coef = c2;
    out.sigma2 = 2.0 + c2 + c1 * square_sum;
    out.sigma1_sq = c2 / 2.0 + c1 * lag2_sum;
    // Signed root: 2 sqrt(c2) carries the sign of the lag-one correlation of
    // second differences, which is negative for H > 1/2.
    out.sigma2_sq = 2.0 * lag_one + c1 * lag1_sum;
    out.sigma12 = std::pow(2.0, -p) * (3.0 * out.sigma2 + out.sigma1_sq + 4.0 * out.sigma2_sq);
    out.sigma_star2 = 1.5 * out.sigma2 - 2.0 * out.sigma12;
    out.truncation_terms = l - 1;
    out.tail_bound = c1 * tail;
    return out;
}

AsymVariances AsymVarianceCache::get(double hurst, double rel_tol) {
    const auto key = std::make_pair(static_cast<std::int64_t>(std::llround(hurst * 1e6)), rel_tol);
    {
        std::shared_lock lock(mutex_);
        if (auto it = entries_.find(key); it != entries_.end()) {
            return it->second;
        }
    }
    AsymVariances value = asym_variances(static_cast<double>(key.first) * 1e-6, rel_tol);
    std::unique_lock lock(mutex_);
    return entries_.emplace(key, value).first->second;
}

std::size_t AsymVarianceCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

AsymVarianceCache& shared_variance_cache() {
    static AsymVarianceCache cache;
    return cache;
}

} // namespace fbmsde
