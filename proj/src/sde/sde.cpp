#include "fbmsde/sde.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fbmsde/errors.hpp"

namespace fbmsde {

void SdeParams::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("SdeParams: " + msg); };
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(x0) ||
        !std::isfinite(hurst)) {
        fail("coefficients must be finite");
    }
    if (a > 0.0) {
        fail("a must be <= 0");
    }
    if (c == 0.0) {
        fail("c must be non-zero");
    }
    if (m < 2) {
        fail("m must be >= 2");
    }
    if (!(x0 > 0.0)) {
        fail("x0 must be positive");
    }
    if (!(hurst > 0.5 && hurst < 1.0)) {
        fail("H must lie in (1/2, 1)");
    }
}

std::string_view to_string(Model model) noexcept {
    switch (model) {
    case Model::black_scholes:
        return "black_scholes";
    case Model::verhulst:
        return "verhulst";
    case Model::landau_ginzburg:
        return "landau_ginzburg";
    }
    return "unknown";
}

Model parse_model(std::string_view name) {
    if (name == "black_scholes") {
        return Model::black_scholes;
    }
    if (name == "verhulst") {
        return Model::verhulst;
    }
    if (name == "landau_ginzburg") {
        return Model::landau_ginzburg;
    }
    throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

SdeParams preset(Model model, double lambda, double sigma, double x0, double hurst) {
    SdeParams p{0.0, lambda, sigma, 2, x0, hurst};
    switch (model) {
    case Model::black_scholes:
        break;
    case Model::verhulst:
        p.a = -1.0;
        break;
    case Model::landau_ginzburg:
        p.a = -1.0;
        p.m = 3;
        break;
    }
    p.validate();
    return p;
}

namespace {

void check_driver(const SdeParams& params, const FbmPath& driver, std::size_t refine) {
    params.validate();
    if (driver.hurst != params.hurst) {
        throw std::invalid_argument("driver Hurst index does not match SdeParams::hurst");
    }
    if (refine == 0 || driver.grid.n() % refine != 0) {
        throw std::invalid_argument("driver grid n must be a positive multiple of refine");
    }
    if (driver.values.size() != driver.grid.points()) {
        throw std::invalid_argument("driver values do not match its grid");
    }
}

[[noreturn]] void overflow(double t, double exponent) {
    std::ostringstream msg;
    msg << "solver exponent overflow at t = " << t << " (exponent " << exponent << ", limit "
        << kMaxExponent << ")";
    throw NumericError(msg.str());
}

// b t_j + c B_j on the fine grid.
std::vector<double> exponents(const SdeParams& params, const FbmPath& driver) {
    std::vector<double> e(driver.values.size());
    for (std::size_t j = 0; j < e.size(); ++j) {
        const double t = driver.grid.time(j);
        e[j] = params.b * t + params.c * driver.values[j];
        if (!(std::abs(e[j]) <= kMaxExponent)) {
            overflow(t, e[j]);
        }
    }
    return e;
}

std::vector<double> drift_factor_from(const SdeParams& params, const FbmPath& driver,
                                      const std::vector<double>& e, std::size_t refine) {
    const std::size_t coarse_n = driver.grid.n() / refine;
    const double start = std::pow(params.x0, 1.0 - params.m);
    std::vector<double> out(coarse_n + 1, start);
    if (params.a == 0.0) {
        return out;
    }
    const double power = static_cast<double>(params.m - 1);
    const double weight = (1.0 - params.m) * params.a;
    const double half_step = 0.5 * driver.grid.step();

    double previous = 0.0;
    double integral = 0.0;
    for (std::size_t j = 0; j < e.size(); ++j) {
        const double exponent = power * e[j];
        if (exponent > kMaxExponent) {
            overflow(driver.grid.time(j), exponent);
        }
        const double current = std::exp(exponent);
        if (j > 0) {
            integral += half_step * (previous + current);
        }
        previous = current;
        if (j % refine == 0) {
            out[j / refine] = start + weight * integral;
        }
    }
    return out;
}

} // namespace

std::vector<double> drift_factor(const SdeParams& params, const FbmPath& fine_driver,
                                 std::size_t refine) {
    check_driver(params, fine_driver, refine);
    return drift_factor_from(params, fine_driver, exponents(params, fine_driver), refine);
}

SamplePath solve_polynomial_sde(const SdeParams& params, const FbmPath& fine_driver,
                                std::size_t refine) {
    check_driver(params, fine_driver, refine);
    const GridSpec grid = fine_driver.grid.coarsened(refine);
    const std::vector<double> e = exponents(params, fine_driver);

    std::vector<double> values(grid.points());
    if (params.a == 0.0) {
        for (std::size_t k = 0; k < values.size(); ++k) {
            values[k] = params.x0 * std::exp(e[k * refine]);
        }
    } else {
        const std::vector<double> factor = drift_factor_from(params, fine_driver, e, refine);
        const double root = 1.0 / (1.0 - params.m);
        for (std::size_t k = 0; k < values.size(); ++k) {
            values[k] = std::exp(e[k * refine]) * std::pow(factor[k], root);
        }
        values[0] = params.x0;
    }
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!(values[k] > 0.0) || !std::isfinite(values[k])) {
            throw NumericError("solver produced a non-positive or non-finite value at t = " +
                               std::to_string(grid.time(k)));
        }
    }
    return SamplePath{grid, std::move(values), params, fine_driver.seed};
}

SimulatedPath simulate_path(const SdeParams& params, const FbmSampler& fine_sampler,
                            std::uint64_t seed, std::size_t refine) {
    FbmPath fine = fine_sampler.sample(seed);
    SamplePath path = solve_polynomial_sde(params, fine, refine);
    return SimulatedPath{std::move(path), subsample(fine, refine)};
}

SimulatedPath simulate_path(const SdeParams& params, const GridSpec& grid, std::uint64_t seed,
                            std::size_t refine, SynthesisMethod method) {
    params.validate();
    const FbmSampler sampler(grid.refined(refine), params.hurst, method);
    return simulate_path(params, sampler, seed, refine);
}

double residual_check(const SamplePath& path, const FbmPath& driver) {
    if (!(path.grid == driver.grid) || path.values.size() != driver.values.size()) {
        throw std::invalid_argument("residual_check: path and driver grids differ");
    }
    const SdeParams& p = path.params;
    const double dt = path.grid.step();
    double drift = 0.0;
    double noise = 0.0;
    double worst = std::abs(path.values[0] - p.x0);
    for (std::size_t k = 1; k < path.values.size(); ++k) {
        const double x = path.values[k - 1];
        drift += (p.a * std::pow(x, p.m) + p.b * x) * dt;
        noise += x * (driver.values[k] - driver.values[k - 1]);
        worst = std::max(worst, std::abs(path.values[k] - p.x0 - drift - p.c * noise));
    }
    return worst;
}

} // namespace fbmsde
