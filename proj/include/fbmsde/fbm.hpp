#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "fbmsde/grid.hpp"

namespace fbmsde {

enum class SynthesisMethod { spectral_circulant, cholesky };

std::string_view to_string(SynthesisMethod method) noexcept;
// Accepts "spectral-circulant" and "cholesky"; throws std::invalid_argument.
SynthesisMethod parse_synthesis_method(std::string_view name);

// One sample path of fractional Brownian motion on a uniform grid.
struct FbmPath {
    double hurst;
    GridSpec grid;
    std::vector<double> values;  // B^H(t_k), values[0] == 0
    std::uint64_t seed;
    SynthesisMethod method;       // method actually used (after any fallback)
};

// E[B^H_s B^H_t] = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2.
// Throws std::domain_error unless H in (0,1) and s, t >= 0.
double fbm_covariance(double s, double t, double hurst);

// Autocovariance of unit-spacing fractional Gaussian noise at integer lag.
double fgn_autocovariance(std::size_t lag, double hurst);

// Exact sampler for fBm on a fixed grid. Construction does all the
// seed-independent work (embedding eigenvalues or the Cholesky factor);
// sample() is const and safe to call concurrently.
class FbmSampler {
public:
    static constexpr double kEigenvalueTolerance = 1e-9;

    FbmSampler(GridSpec grid, double hurst,
               SynthesisMethod requested = SynthesisMethod::spectral_circulant);
    ~FbmSampler();
    FbmSampler(FbmSampler&&) noexcept;
    FbmSampler& operator=(FbmSampler&&) noexcept;

    FbmPath sample(std::uint64_t seed) const;

    const GridSpec& grid() const noexcept { return grid_; }
    double hurst() const noexcept { return hurst_; }
    SynthesisMethod method() const noexcept { return method_; }
    // Smallest embedding eigenvalue divided by the largest; NaN for Cholesky.
    double min_relative_eigenvalue() const noexcept { return min_relative_eigenvalue_; }

private:
    struct Circulant;
    struct Cholesky;

    GridSpec grid_;
    double hurst_;
    SynthesisMethod method_;
    double min_relative_eigenvalue_;
    std::unique_ptr<Circulant> circulant_;
    std::unique_ptr<Cholesky> cholesky_;
};

// Deterministic in (grid, H, seed, method). Falls back to Cholesky when the
// circulant embedding has an eigenvalue below -1e-9 * max eigenvalue.
FbmPath generate_fbm_path(const GridSpec& grid, double hurst, std::uint64_t seed,
                          SynthesisMethod method = SynthesisMethod::spectral_circulant);

// Every `factor`-th point of a path, on the coarsened grid.
FbmPath subsample(const FbmPath& path, std::size_t factor);

// values[k+1] - values[k]; throws std::invalid_argument for fewer than 2 points.
std::vector<double> first_increments(std::span<const double> values);
// values[k+1] - 2 values[k] + values[k-1]; throws for fewer than 3 points.
std::vector<double> second_order_increments(std::span<const double> values);

} // namespace fbmsde
