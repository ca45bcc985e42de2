#pragma once

#include <cstdint>
#include <map>
#include <shared_mutex>
#include <utility>

namespace fbmsde {

// Normalized covariance of second-order fBm increments at lag l,
//   rho(l) = (|l-2|^{2H} - 4|l-1|^{2H} + 6|l|^{2H} - 4|l+1|^{2H} + |l+2|^{2H})
//            / (2H (1-2H) (2-2H) (3-2H)).
// Even in l and ~ -|l|^{2H-4} for large |l|. Throws std::domain_error unless
// H in (0,1) \ {1/2}.
double rho(std::int64_t l, double hurst);

// Limiting (co)variances of the normalized quadratic variations V_{n,T},
// V_{2n,T} and of the derived Hurst estimators.
struct AsymVariances {
    double hurst;
    double sigma2;       // sigma^2(H) = 2 + c2 + c1 sum_{l>=2} rho(l)^2
    double sigma1_sq;    // c2/2 + c1 sum_{l>=2} rho(l) rho(l-2)
    double sigma2_sq;    // 2 s(H) + c1 sum_{l>=2} rho(l) rho(l-1), s(H) signed sqrt(c2)
    double sigma12;      // 2^{-2H} (3 sigma^2 + sigma1_sq + 4 sigma2_sq)
    double sigma_star2;  // 3/2 sigma^2 - 2 sigma12
    double c1;
    double c2coef;
    std::int64_t truncation_terms;  // terms summed per series (l = 2 .. terms + 1)
    double tail_bound;              // bound on the truncation error of sigma2
};

inline constexpr double kDefaultSeriesTolerance = 1e-12;
inline constexpr std::int64_t kMaxSeriesTerms = 10'000'000;

// Throws std::domain_error unless H in (1/2,1) and rel_tol > 0.
AsymVariances asym_variances(double hurst, double rel_tol = kDefaultSeriesTolerance);

// Thread-safe memo of asym_variances keyed by (H rounded to 1e-6, rel_tol).
// Values are computed at the rounded H, so results do not depend on which
// caller populated an entry.
class AsymVarianceCache {
public:
    AsymVariances get(double hurst, double rel_tol = kDefaultSeriesTolerance);
    std::size_t size() const;

private:
    mutable std::shared_mutex mutex_;
    std::map<std::pair<std::int64_t, double>, AsymVariances> entries_;
};

AsymVarianceCache& shared_variance_cache();

} // namespace fbmsde
