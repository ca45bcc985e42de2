#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "fbmsde/fbm.hpp"
#include "fbmsde/grid.hpp"

namespace fbmsde {

// dX = (a X^m + b X) dt + c X dB^H with X_0 = x0.
struct SdeParams {
    double a;
    double b;
    double c;
    int m;
    double x0;
    double hurst;

    // Throws std::invalid_argument unless a <= 0, c != 0, m >= 2, x0 > 0
    // and H in (1/2, 1).
    void validate() const;
};

enum class Model { black_scholes, verhulst, landau_ginzburg };

std::string_view to_string(Model model) noexcept;
Model parse_model(std::string_view name);

// black_scholes: a = 0 (m fixed to 2, unused); verhulst: a = -1, m = 2;
// landau_ginzburg: a = -1, m = 3. In all three b = lambda, c = sigma.
SdeParams preset(Model model, double lambda, double sigma, double x0, double hurst);

struct SamplePath {
    GridSpec grid;
    std::vector<double> values;  // X(t_k), values[0] == x0, all > 0
    SdeParams params;
    std::uint64_t driver_seed;
};

inline constexpr std::size_t kDefaultRefine = 4;
// Largest |b t + c B_t| (and |(m-1)(b t + c B_t)|) the solver accepts.
inline constexpr double kMaxExponent = 700.0;

// x0^{1-m} + (1-m) a \int_0^{t_k} exp((m-1)(b s + c B_s)) ds at the coarse
// points, trapezoid rule on the driver's (fine) grid.
std::vector<double> drift_factor(const SdeParams& params, const FbmPath& fine_driver,
                                 std::size_t refine);

// Closed-form solution along a driver sampled on the fine grid; the output
// grid is the driver grid coarsened by `refine`. With a == 0 the result is
// exactly x0 exp(b t + c B_t). Throws NumericError on exponent overflow.
SamplePath solve_polynomial_sde(const SdeParams& params, const FbmPath& fine_driver,
                                std::size_t refine = kDefaultRefine);

struct SimulatedPath {
    SamplePath path;
    FbmPath driver;  // driver on the output grid
};

// Generates the driver at n * refine, solves, and subsamples the driver.
SimulatedPath simulate_path(const SdeParams& params, const FbmSampler& fine_sampler,
                            std::uint64_t seed, std::size_t refine = kDefaultRefine);
SimulatedPath simulate_path(const SdeParams& params, const GridSpec& grid, std::uint64_t seed,
                            std::size_t refine = kDefaultRefine,
                            SynthesisMethod method = SynthesisMethod::spectral_circulant);

// max_k |X_k - x0 - sum_{j<k} (a X_j^m + b X_j) dt - c sum_{j<k} X_j (B_{j+1} - B_j)|
double residual_check(const SamplePath& path, const FbmPath& driver);

} // namespace fbmsde
