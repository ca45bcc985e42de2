#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "fbmsde/sde.hpp"

namespace fbmsde {

enum class EstimateFlag : std::uint8_t {
    clamped = 1u << 0,             // raw value outside (0,1), clamped to the bracket
    boundary_inversion = 1u << 1,  // statistic outside the attainable range of phi
    degenerate = 1u << 2,          // all second differences vanish
    unavailable = 1u << 3,         // estimator could not be formed on this input
};

class EstimateFlags {
public:
    constexpr EstimateFlags() = default;

    constexpr void set(EstimateFlag f) noexcept { bits_ |= static_cast<std::uint8_t>(f); }
    constexpr bool has(EstimateFlag f) const noexcept {
        return (bits_ & static_cast<std::uint8_t>(f)) != 0;
    }
    constexpr bool any() const noexcept { return bits_ != 0; }
    constexpr void merge(EstimateFlags other) noexcept { bits_ |= other.bits_; }

    // "clamped|boundary_inversion", empty when no flag is set.
    std::string to_string() const;

    friend constexpr bool operator==(EstimateFlags, EstimateFlags) = default;

private:
    std::uint8_t bits_ = 0;
};

enum class HurstEstimator { h1, h2 };
std::string_view to_string(HurstEstimator e) noexcept;

struct HurstEstimate {
    double value;      // in [delta, 1 - delta]
    double raw_value;  // before clamping
    double std_error;
    double ci_low;
    double ci_high;
    double level;
    HurstEstimator estimator;
    EstimateFlags flags;
};

struct VolatilityEstimate {
    double c2;  // estimate of c^2
    double std_error;
    double ci_low;
    double ci_high;
    double level;
    double h_used;  // plug-in Hurst index
    EstimateFlags flags;
};

// Bracket for phi inversion and Hurst clamping.
inline constexpr double kBracketDelta = 1e-6;
inline constexpr double kInversionTolerance = 1e-12;
// Range in which the plug-in H enters sigma^2(H) and sigma_*^2(H).
inline constexpr double kPlugInLow = 0.501;
inline constexpr double kPlugInHigh = 0.999;

// (n^{2H-1} / (4 - 2^{2H})) sum_{k=1}^{n-1} (T^{-H} Delta2_k)^2 over a path
// with n + 1 points.
double vnt(std::span<const double> values, double horizon, double hurst);

// phi_{n,T}(x) = (T/n)^{2x} (4 - 2^{2x}); strictly decreasing for n > T.
// Throws std::domain_error unless n > T and x in (0,1).
double phi(std::size_t n, double horizon, double x);

struct PhiInversion {
    double value;
    bool boundary;  // y outside (phi(1 - delta), phi(delta)); value is the nearer endpoint
};

// Bisection on [delta, 1 - delta] to an interval width of 1e-12.
PhiInversion phi_inverse(std::size_t n, double horizon, double y);

// sum_k (Delta2_k X / X_k)^2 over the interior points.
double normalized_square_sum(std::span<const double> values);

// Known-volatility estimator: phi^{-1}((1/n) sum (Delta2_k X / (c X_k))^2).
// std_error = sigma(H^) / (2 sqrt(n) ln(n/T)).
HurstEstimate estimate_h1(std::span<const double> values, double horizon, double c,
                          double level = 0.95);
HurstEstimate estimate_h1(const SamplePath& path, double c, double level = 0.95);

// Volatility-free estimator from the nested n- and 2n-grids. Input must have
// 2n + 1 points (odd length); std_error = sigma_*(H^) / (2 ln 2 sqrt(n)).
HurstEstimate estimate_h2(std::span<const double> values, double level = 0.95);
HurstEstimate estimate_h2(const SamplePath& path, double level = 0.95);

// Plug-in estimator of c^2 with Hurst index h3; std_error = c2 sigma(h3) / sqrt(n),
// confidence interval clipped below at 0.
VolatilityEstimate estimate_c2(std::span<const double> values, double h3, double horizon,
                               double level = 0.95);
VolatilityEstimate estimate_c2(const SamplePath& path, double h3, double level = 0.95);

// Two-sided standard normal quantile for a confidence level in (0,1).
double normal_critical_value(double level);

} // namespace fbmsde
