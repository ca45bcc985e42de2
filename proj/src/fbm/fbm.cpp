#include "fbmsde/fbm.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>

#include "fbmsde/errors.hpp"
#include "fbmsde/rng.hpp"

namespace fbmsde {

namespace {

void check_hurst(double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw std::domain_error("Hurst index must lie in (0,1), got " + std::to_string(hurst));
    }
}

// FFTW's planner is not reentrant; execution with new arrays is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwDeleter {
    void operator()(void* p) const noexcept { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double, FftwDeleter>;
using ComplexBuffer = std::unique_ptr<fftw_complex, FftwDeleter>;

RealBuffer alloc_real(std::size_t n) { return RealBuffer(fftw_alloc_real(n)); }
ComplexBuffer alloc_complex(std::size_t n) { return ComplexBuffer(fftw_alloc_complex(n)); }

class FftwPlan {
public:
    explicit FftwPlan(fftw_plan plan) : plan_(plan) {
        if (plan_ == nullptr) {
            throw std::runtime_error("FFTW planner returned no plan");
        }
    }
    ~FftwPlan() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan_);
    }
    FftwPlan(const FftwPlan&) = delete;
    FftwPlan& operator=(const FftwPlan&) = delete;

    fftw_plan get() const noexcept { return plan_; }

private:
    fftw_plan plan_;
};

} // namespace

std::string_view to_string(SynthesisMethod method) noexcept {
    switch (method) {
    case SynthesisMethod::spectral_circulant:
        return "spectral-circulant";
    case SynthesisMethod::cholesky:
        return "cholesky";
    }
    return "unknown";
}

SynthesisMethod parse_synthesis_method(std::string_view name) {
    if (name == "spectral-circulant") {
        return SynthesisMethod::spectral_circulant;
    }
    if (name == "cholesky") {
        return SynthesisMethod::cholesky;
    }
    throw std::invalid_argument("unknown synthesis method '" + std::string(name) + "'");
}

double fbm_covariance(double s, double t, double hurst) {
    check_hurst(hurst);
    if (!(s >= 0.0) || !(t >= 0.0)) {
        throw std::domain_error("fbm_covariance: times must be non-negative");
    }
    const double two_h = 2.0 * hurst;
    return 0.5 * (std::pow(s, two_h) + std::pow(t, two_h) - std::pow(std::abs(t - s), two_h));
}

double fgn_autocovariance(std::size_t lag, double hurst) {
    const double k = static_cast<double>(lag);
    const double two_h = 2.0 * hurst;
    if (lag == 0) {
        return 1.0;
    }
    return 0.5 * (std::pow(k + 1.0, two_h) - 2.0 * std::pow(k, two_h) + std::pow(k - 1.0, two_h));
}

// Davies-Harte / Wood-Chan embedding of the n x n fGn Toeplitz covariance
// in a circulant of size 2n.
struct FbmSampler::Circulant {
    std::size_t size;              // embedding size M = 2n
    std::vector<double> weights;   // sqrt(lambda_k / M) or sqrt(lambda_k / 2M), k = 0..n
    std::unique_ptr<FftwPlan> plan;
};

struct FbmSampler::Cholesky {
    Eigen::MatrixXd lower;
};

FbmSampler::FbmSampler(GridSpec grid, double hurst, SynthesisMethod requested)
    : grid_(grid), hurst_(hurst), method_(requested),
      min_relative_eigenvalue_(std::numeric_limits<double>::quiet_NaN()) {
    check_hurst(hurst);
    const std::size_t n = grid_.n();

    if (requested == SynthesisMethod::spectral_circulant) {
        const std::size_t m = 2 * n;
        RealBuffer row = alloc_real(m);
        ComplexBuffer spectrum = alloc_complex(n + 1);
        for (std::size_t j = 0; j <= n; ++j) {
            row.get()[j] = fgn_autocovariance(j, hurst);
        }
        for (std::size_t j = 1; j < n; ++j) {
            row.get()[m - j] = row.get()[j];
        }

        std::unique_ptr<FftwPlan> forward;
        auto synthesis = std::make_unique<Circulant>();
        {
            RealBuffer out = alloc_real(m);
            std::lock_guard lock(fftw_planner_mutex());
            forward = std::make_unique<FftwPlan>(
                fftw_plan_dft_r2c_1d(static_cast<int>(m), row.get(), spectrum.get(), FFTW_ESTIMATE));
            synthesis->plan = std::make_unique<FftwPlan>(fftw_plan_dft_c2r_1d(
                static_cast<int>(m), spectrum.get(), out.get(), FFTW_ESTIMATE | FFTW_DESTROY_INPUT));
        }
        fftw_execute(forward->get());

        std::vector<double> lambda(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            lambda[k] = spectrum.get()[k][0];
        }
        const double max_lambda = *std::max_element(lambda.begin(), lambda.end());
        const double min_lambda = *std::min_element(lambda.begin(), lambda.end());
        min_relative_eigenvalue_ = min_lambda / max_lambda;

        if (min_lambda >= -kEigenvalueTolerance * max_lambda) {
            const double md = static_cast<double>(m);
            synthesis->size = m;
            synthesis->weights.resize(n + 1);
            for (std::size_t k = 0; k <= n; ++k) {
                const double l = std::max(lambda[k], 0.0);
                const bool real_mode = (k == 0 || k == n);
                synthesis->weights[k] = std::sqrt(l / (real_mode ? md : 2.0 * md));
            }
            circulant_ = std::move(synthesis);
            return;
        }
        method_ = SynthesisMethod::cholesky;
    }

    Eigen::MatrixXd cov(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<double> gamma(n);
    for (std::size_t j = 0; j < n; ++j) {
        gamma[j] = fgn_autocovariance(j, hurst);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                gamma[i > j ? i - j : j - i];
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw NumericError("fGn covariance is not numerically positive definite (n = " +
                           std::to_string(n) + ", H = " + std::to_string(hurst) + ")");
    }
    cholesky_ = std::make_unique<Cholesky>();
    cholesky_->lower = llt.matrixL();
}

FbmSampler::~FbmSampler() = default;
FbmSampler::FbmSampler(FbmSampler&&) noexcept = default;
FbmSampler& FbmSampler::operator=(FbmSampler&&) noexcept = default;

FbmPath FbmSampler::sample(std::uint64_t seed) const {
    const std::size_t n = grid_.n();
    std::mt19937_64 engine(mix64(seed));
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<double> noise(n);
    if (circulant_) {
        const std::size_t m = circulant_->size;
        const auto& w = circulant_->weights;
        ComplexBuffer spectrum = alloc_complex(n + 1);
        RealBuffer out = alloc_real(m);
        fftw_complex* z = spectrum.get();
        z[0][0] = w[0] * normal(engine);
        z[0][1] = 0.0;
        z[n][0] = w[n] * normal(engine);
        z[n][1] = 0.0;
        for (std::size_t k = 1; k < n; ++k) {
            z[k][0] = w[k] * normal(engine);
            z[k][1] = w[k] * normal(engine);
        }
        fftw_execute_dft_c2r(circulant_->plan->get(), z, out.get());
        std::copy_n(out.get(), n, noise.begin());
    } else {
        Eigen::VectorXd z(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            z[i] = normal(engine);
        }
        const Eigen::VectorXd x = cholesky_->lower.triangularView<Eigen::Lower>() * z;
        std::copy(x.data(), x.data() + n, noise.begin());
    }

    const double scale = std::pow(grid_.step(), hurst_);
    std::vector<double> values(n + 1);
    values[0] = 0.0;
    double level = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        level += scale * noise[k];
        values[k + 1] = level;
    }
    return FbmPath{hurst_, grid_, std::move(values), seed, method_};
}

FbmPath generate_fbm_path(const GridSpec& grid, double hurst, std::uint64_t seed,
                          SynthesisMethod method) {
    return FbmSampler(grid, hurst, method).sample(seed);
}

FbmPath subsample(const FbmPath& path, std::size_t factor) {
    const GridSpec coarse = path.grid.coarsened(factor);
    std::vector<double> values(coarse.points());
    for (std::size_t k = 0; k < values.size(); ++k) {
        values[k] = path.values[k * factor];
    }
    return FbmPath{path.hurst, coarse, std::move(values), path.seed, path.method};
}

} // namespace fbmsde
