#include "fbmsde/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "fbmsde/asym_variances.hpp"
#include "fbmsde/rng.hpp"
#include "fbmsde/stats.hpp"

namespace fbmsde {

std::string_view to_string(EstimatorKind e) noexcept {
    switch (e) {
    case EstimatorKind::h1:
        return "h1";
    case EstimatorKind::h2:
        return "h2";
    case EstimatorKind::c2:
        return "c2";
    }
    return "unknown";
}

EstimatorKind parse_estimator(std::string_view name) {
    for (EstimatorKind e : kAllEstimators) {
        if (name == to_string(e)) {
            return e;
        }
    }
    throw std::invalid_argument("unknown estimator '" + std::string(name) + "'");
}

bool EstimatorSet::contains(EstimatorKind e) const noexcept {
    switch (e) {
    case EstimatorKind::h1:
        return h1;
    case EstimatorKind::h2:
        return h2;
    case EstimatorKind::c2:
        return c2;
    }
    return false;
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& field, const std::string& msg) {
        throw std::invalid_argument("field '" + field + "': " + msg);
    };
    if (replicates < 1) {
        fail("replicates", "must be >= 1");
    }
    if (hurst_values.empty()) {
        fail("H_values", "must not be empty");
    }
    for (double h : hurst_values) {
        if (!(h > 0.5 && h < 1.0)) {
            fail("H_values", "every H must lie in (0.5, 1), got " + std::to_string(h));
        }
    }
    if (c_values.empty()) {
        fail("c_values", "must not be empty");
    }
    for (double c : c_values) {
        if (c == 0.0 || !std::isfinite(c)) {
            fail("c_values", "every c must be finite and non-zero");
        }
    }
    if (!(x0 > 0.0) || !std::isfinite(x0)) {
        fail("x0", "must be positive");
    }
    if (!std::isfinite(lambda)) {
        fail("lambda", "must be finite");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        fail("T", "must be positive");
    }
    if (n_values.empty()) {
        fail("n_values", "must not be empty");
    }
    const bool needs_nested = estimators.h2 || (estimators.c2 && h3_source == HurstEstimator::h2);
    for (std::size_t n : n_values) {
        if (n < 4 || !(static_cast<double>(n) > horizon)) {
            fail("n_values", "every n must be >= 4 and exceed T, got " + std::to_string(n));
        }
        if (needs_nested && n % 2 != 0) {
            fail("n_values", "h2 needs even n (2n + 1 observations), got " + std::to_string(n));
        }
    }
    if (estimators.empty()) {
        fail("estimators", "must name at least one of h1, h2, c2");
    }
    if (!(ci_level > 0.0 && ci_level < 1.0)) {
        fail("ci_level", "must lie in (0, 1)");
    }
    if (refine < 1) {
        fail("refine", "must be >= 1");
    }
}

std::vector<Cell> enumerate_cells(const ExperimentConfig& config) {
    std::vector<Cell> cells;
    for (double h : config.hurst_values) {
        for (double c : config.c_values) {
            for (std::size_t n : config.n_values) {
                cells.push_back(Cell{h, c, n, cells.size()});
            }
        }
    }
    return cells;
}

const CellRecord* ExperimentReport::find(EstimatorKind estimator, double hurst, double c,
                                         std::size_t n) const {
    for (const CellRecord& r : records) {
        if (r.estimator == estimator && r.cell.hurst == hurst && r.cell.c == c && r.cell.n == n) {
            return &r;
        }
    }
    return nullptr;
}

namespace {

struct Outcome {
    double value = std::numeric_limits<double>::quiet_NaN();
    bool covers = false;
    bool flagged = true;
};

using ReplicateOutcome = std::array<Outcome, 3>;

std::size_t slot(EstimatorKind e) { return static_cast<std::size_t>(e); }

// Seed-independent state shared by all replicates of one cell.
struct CellPlan {
    Cell cell;
    SdeParams params;
    const FbmSampler* sampler;
};

class Experiment {
public:
    explicit Experiment(const ExperimentConfig& config) : config_(config) {
        config_.validate();
        cells_ = enumerate_cells(config_);
        std::map<std::pair<double, std::size_t>, std::size_t> sampler_index;
        for (const Cell& cell : cells_) {
            auto key = std::make_pair(cell.hurst, cell.n);
            if (!sampler_index.contains(key)) {
                sampler_index[key] = samplers_.size();
                samplers_.emplace_back(GridSpec(cell.n, config_.horizon).refined(config_.refine),
                                       cell.hurst, config_.method);
            }
        }
        for (const Cell& cell : cells_) {
            plans_.push_back(CellPlan{
                cell, preset(config_.model, config_.lambda, cell.c, config_.x0, cell.hurst),
                &samplers_[sampler_index.at({cell.hurst, cell.n})]});
        }
        outcomes_.resize(cells_.size() * config_.replicates);
    }

    std::size_t jobs() const { return outcomes_.size(); }

    void run_job(std::size_t job) {
        const std::size_t r = job % config_.replicates;
        outcomes_[job] = run_replicate(plans_[job / config_.replicates], r);
    }

    ExperimentReport aggregate() const;

private:
    ReplicateOutcome run_replicate(const CellPlan& plan, std::size_t r) const;

    ExperimentConfig config_;
    std::vector<Cell> cells_;
    std::vector<FbmSampler> samplers_;
    std::vector<CellPlan> plans_;
    std::vector<ReplicateOutcome> outcomes_;
};

ReplicateOutcome Experiment::run_replicate(const CellPlan& plan, std::size_t r) const {
    ReplicateOutcome out{};
    const EstimatorSet& wanted = config_.estimators;
    const double h = plan.cell.hurst;
    const double c = plan.cell.c;
    try {
        const std::uint64_t seed = replicate_seed(config_.base_seed, plan.cell.index, r);
        const FbmPath fine = plan.sampler->sample(seed);
        const SamplePath path = solve_polynomial_sde(plan.params, fine, config_.refine);

        auto record_hurst = [&](EstimatorKind kind, const HurstEstimate& e) {
            out[slot(kind)] = Outcome{e.value, e.ci_low <= h && h <= e.ci_high, e.flags.any()};
        };
        std::optional<HurstEstimate> h1;
        std::optional<HurstEstimate> h2;
        const bool plug_in_h1 = wanted.c2 && config_.h3_source == HurstEstimator::h1;
        if (wanted.h1 || plug_in_h1) {
            h1 = estimate_h1(path, c, config_.ci_level);
            record_hurst(EstimatorKind::h1, *h1);
        }
        if (wanted.h2 || (wanted.c2 && !plug_in_h1)) {
            try {
                h2 = estimate_h2(path, config_.ci_level);
                record_hurst(EstimatorKind::h2, *h2);
            } catch (const std::invalid_argument&) {
            }
        }
        if (wanted.c2) {
            const std::optional<HurstEstimate>& h3 = plug_in_h1 ? h1 : h2;
            if (h3) {
                const VolatilityEstimate v = estimate_c2(path, h3->value, config_.ci_level);
                const double truth = c * c;
                out[slot(EstimatorKind::c2)] =
                    Outcome{v.c2, v.ci_low <= truth && truth <= v.ci_high,
                            v.flags.any() || h3->flags.any()};
            }
        }
    } catch (const std::exception&) {
        // Solver or estimator failure: every estimator of this replicate
        // stays flagged and is counted, never propagated.
        return ReplicateOutcome{};
    }
    return out;
}

double truth_of(EstimatorKind e, const Cell& cell) {
    return e == EstimatorKind::c2 ? cell.c * cell.c : cell.hurst;
}

ExperimentReport Experiment::aggregate() const {
    ExperimentReport report;
    report.config = config_;
    const std::size_t reps = config_.replicates;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    for (const Cell& cell : cells_) {
        for (EstimatorKind e : kAllEstimators) {
            if (!config_.estimators.contains(e)) {
                continue;
            }
            CellRecord rec{cell, e, truth_of(e, cell), {}, std::vector<double>(reps, nan)};
            std::vector<double> used;
            std::size_t covered = 0;
            double abs_err = 0.0;
            for (std::size_t r = 0; r < reps; ++r) {
                const Outcome& o = outcomes_[cell.index * reps + r][slot(e)];
                if (o.flagged || !std::isfinite(o.value)) {
                    ++rec.stats.flag_count;
                    continue;
                }
                rec.estimates[r] = o.value;
                used.push_back(o.value);
                covered += o.covers ? 1 : 0;
                abs_err += std::abs(o.value - rec.truth);
            }
            rec.stats.replicates_used = used.size();
            if (used.empty()) {
                rec.stats.mean = rec.stats.bias = rec.stats.variance = rec.stats.sd = nan;
                rec.stats.q1 = rec.stats.median = rec.stats.q3 = rec.stats.iqr = nan;
                rec.stats.mae = rec.stats.ci_coverage = nan;
            } else {
                const Summary s = summarize(used);
                const double count = static_cast<double>(used.size());
                rec.stats.mean = s.mean;
                rec.stats.bias = s.mean - rec.truth;
                rec.stats.variance = s.variance;
                rec.stats.sd = s.sd;
                rec.stats.q1 = s.q1;
                rec.stats.median = s.median;
                rec.stats.q3 = s.q3;
                rec.stats.iqr = s.iqr;
                rec.stats.mae = abs_err / count;
                rec.stats.ci_coverage = static_cast<double>(covered) / count;
            }

            if (used.size() >= kMinNormalitySample) {
                const ErrorStandardization z =
                    error_standardization(e, cell.hurst, cell.c, cell.n, config_.horizon);
                std::vector<double> errors;
                errors.reserve(used.size());
                for (double v : used) {
                    errors.push_back(z.rate * (v - rec.truth));
                }
                try {
                    report.normality.push_back(
                        NormalityRecord{cell, e, normality_diagnostic(errors, z.scale)});
                } catch (const std::invalid_argument&) {
                }
            }
            report.records.push_back(std::move(rec));
        }
    }

    if (config_.estimators.c2) {
        try {
            report.regression = fit_variance_model(report);
        } catch (const std::invalid_argument&) {
        }
    }
    return report;
}

} // namespace

ErrorStandardization error_standardization(EstimatorKind estimator, double hurst, double c,
                                           std::size_t n, double horizon) {
    const AsymVariances v = shared_variance_cache().get(hurst);
    const double nd = static_cast<double>(n);
    switch (estimator) {
    case EstimatorKind::h1:
        return {2.0 * std::sqrt(nd) * std::log(nd / horizon), std::sqrt(v.sigma2)};
    case EstimatorKind::h2:
        return {2.0 * std::numbers::ln2 * std::sqrt(nd / 2.0), std::sqrt(v.sigma_star2)};
    case EstimatorKind::c2:
        return {std::sqrt(nd), c * c * std::sqrt(v.sigma2)};
    }
    throw std::invalid_argument("unknown estimator");
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    Experiment experiment(config);
    const auto jobs = static_cast<std::int64_t>(experiment.jobs());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t j = 0; j < jobs; ++j) {
        experiment.run_job(static_cast<std::size_t>(j));
    }
    return experiment.aggregate();
}

ExperimentReport run_experiment_serial(const ExperimentConfig& config,
                                       std::span<const std::size_t> order) {
    Experiment experiment(config);
    if (order.empty()) {
        for (std::size_t j = 0; j < experiment.jobs(); ++j) {
            experiment.run_job(j);
        }
        return experiment.aggregate();
    }
    if (order.size() != experiment.jobs()) {
        throw std::invalid_argument("run_experiment_serial: order is not a permutation of the jobs");
    }
    std::vector<bool> seen(order.size(), false);
    for (std::size_t j : order) {
        if (j >= seen.size() || seen[j]) {
            throw std::invalid_argument(
                "run_experiment_serial: order is not a permutation of the jobs");
        }
        seen[j] = true;
    }
    for (std::size_t j : order) {
        experiment.run_job(j);
    }
    return experiment.aggregate();
}

VarianceFit fit_variance_model(const ExperimentReport& report) {
    std::vector<double> x;
    std::vector<double> y;
    std::set<double> distinct;
    for (const CellRecord& r : report.records) {
        if (r.estimator != EstimatorKind::c2 || r.stats.replicates_used < 2 ||
            !std::isfinite(r.stats.variance)) {
            continue;
        }
        x.push_back(std::pow(r.cell.c, 4));
        y.push_back(r.stats.variance);
        distinct.insert(std::abs(r.cell.c));
    }
    if (distinct.size() < 3) {
        throw std::invalid_argument("fit_variance_model: need c^2 variances for >= 3 distinct c");
    }
    const LinearFit fit = ols_fit(x, y);
    return VarianceFit{fit.slope, fit.intercept, fit.adj_r2, fit.points};
}

NormalityResult normality_diagnostic(std::span<const double> errors, double scale) {
    if (errors.size() < kMinNormalitySample) {
        throw std::invalid_argument("normality_diagnostic: need at least " +
                                    std::to_string(kMinNormalitySample) + " values");
    }
    if (!(scale > 0.0)) {
        throw std::invalid_argument("normality_diagnostic: scale must be positive");
    }
    const auto [lo, hi] = std::minmax_element(errors.begin(), errors.end());
    if (*lo == *hi) {
        throw std::invalid_argument("normality_diagnostic: constant input");
    }
    std::vector<double> z(errors.begin(), errors.end());
    for (double& v : z) {
        v /= scale;
    }
    const KsResult ks = ks_test_standard_normal(z);
    return NormalityResult{ks.statistic, ks.p_value};
}

std::vector<double> iqr_shrinkage(const ExperimentReport& report, EstimatorKind estimator) {
    std::map<std::pair<double, double>, std::map<std::size_t, double>> groups;
    for (const CellRecord& r : report.records) {
        if (r.estimator == estimator) {
            groups[{r.cell.hurst, r.cell.c}][r.cell.n] = r.stats.iqr;
        }
    }
    std::vector<double> ratios;
    for (const auto& [key, by_n] : groups) {
        for (auto it = by_n.begin(); it != by_n.end(); ++it) {
            auto next = std::next(it);
            if (next != by_n.end() && next->first == 2 * it->first) {
                ratios.push_back(next->second / it->second);
            }
        }
    }
    if (ratios.empty()) {
        throw std::invalid_argument("iqr_shrinkage: no cells at consecutive doublings of n for " +
                                    std::string(to_string(estimator)));
    }
    return ratios;
}

} // namespace fbmsde
