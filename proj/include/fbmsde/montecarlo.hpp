#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fbmsde/estimators.hpp"
#include "fbmsde/fbm.hpp"
#include "fbmsde/sde.hpp"

namespace fbmsde {

enum class EstimatorKind { h1, h2, c2 };
inline constexpr EstimatorKind kAllEstimators[] = {EstimatorKind::h1, EstimatorKind::h2,
                                                   EstimatorKind::c2};

std::string_view to_string(EstimatorKind e) noexcept;
EstimatorKind parse_estimator(std::string_view name);

struct EstimatorSet {
    bool h1 = true;
    bool h2 = true;
    bool c2 = true;

    bool contains(EstimatorKind e) const noexcept;
    bool empty() const noexcept { return !h1 && !h2 && !c2; }
};

struct ExperimentConfig {
    Model model = Model::verhulst;
    std::vector<double> hurst_values{0.7};
    std::vector<double> c_values{0.7};
    double lambda = 0.5;
    double x0 = 3.0;
    double horizon = 1.0;
    std::vector<std::size_t> n_values{1024};
    std::size_t replicates = 500;
    std::uint64_t base_seed = 1;
    EstimatorSet estimators;
    double ci_level = 0.95;
    std::size_t refine = kDefaultRefine;
    HurstEstimator h3_source = HurstEstimator::h2;  // plug-in for c^2
    SynthesisMethod method = SynthesisMethod::spectral_circulant;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// One (H, c, n) combination. Cells are enumerated H-major, then c, then n;
// `index` is the position in that order and feeds the seed derivation.
struct Cell {
    double hurst;
    double c;
    std::size_t n;
    std::size_t index;
};

std::vector<Cell> enumerate_cells(const ExperimentConfig& config);

struct CellStats {
    double mean;
    double bias;      // mean - true value
    double variance;  // N - 1 divisor
    double sd;
    double q1;
    double median;
    double q3;
    double iqr;
    double mae;
    double ci_coverage;
    std::size_t flag_count;       // replicates excluded (estimator flags or solver failure)
    std::size_t replicates_used;
};

struct CellRecord {
    Cell cell;
    EstimatorKind estimator;
    double truth;                   // H for h1/h2, c^2 for c2
    CellStats stats;
    std::vector<double> estimates;  // by replicate index; NaN when excluded
};

struct VarianceFit {
    double k;
    double intercept;
    double adj_r2;
    std::size_t points;
};

struct NormalityResult {
    double statistic;
    double p_value;
};

struct NormalityRecord {
    Cell cell;
    EstimatorKind estimator;
    NormalityResult result;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<CellRecord> records;  // cell order, then h1, h2, c2
    std::optional<VarianceFit> regression;
    std::vector<NormalityRecord> normality;

    const CellRecord* find(EstimatorKind estimator, double hurst, double c, std::size_t n) const;
};

// Minimum replicates for the per-cell normality diagnostic.
inline constexpr std::size_t kMinNormalitySample = 100;

// Replicates run in parallel under OpenMP; aggregation is by replicate index,
// so the report is identical to run_experiment_serial's.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Reference implementation on one thread. `order`, when non-empty, is a
// permutation of [0, cells * replicates) giving the execution order.
ExperimentReport run_experiment_serial(const ExperimentConfig& config,
                                       std::span<const std::size_t> order = {});

// OLS of the c^2-estimator cell variance on c^4; needs >= 3 distinct c.
VarianceFit fit_variance_model(const ExperimentReport& report);

// Kolmogorov-Smirnov test of errors / scale against N(0,1). Needs at least
// kMinNormalitySample values, scale > 0 and non-constant input.
NormalityResult normality_diagnostic(std::span<const double> errors, double scale);

// iqr(2n) / iqr(n) for every (H, c) group with consecutive doublings of n.
std::vector<double> iqr_shrinkage(const ExperimentReport& report, EstimatorKind estimator);

// Factor r such that r * (estimate - truth) / scale is asymptotically N(0,1),
// and that scale.
struct ErrorStandardization {
    double rate;
    double scale;
};
ErrorStandardization error_standardization(EstimatorKind estimator, double hurst, double c,
                                           std::size_t n, double horizon);

} // namespace fbmsde
