#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbmsde/asym_variances.hpp"
#include "fbmsde/estimators.hpp"
#include "fbmsde/fbm.hpp"
#include "fbmsde/grid.hpp"
#include "fbmsde/montecarlo.hpp"
#include "fbmsde/sde.hpp"

namespace fbmsde {

class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// 17 significant digits, enough to round-trip any double.
std::string format_double(double x);

void write_fbm_csv(std::ostream& os, const FbmPath& path);   // k,t,value
void write_path_csv(std::ostream& os, const SamplePath& path);  // k,t,X

struct PathTable {
    GridSpec grid;
    std::vector<double> values;
    std::string value_column;
};

// Reads either path layout. Rows must be k = 0..n in order on a uniform grid
// starting at t = 0. Throws CsvError naming the offending line.
PathTable read_path_csv(std::istream& is);

struct EstimateRow {
    std::string estimator;
    double value;
    double std_error;
    double ci_low;
    double ci_high;
    EstimateFlags flags;
};
void write_estimates_csv(std::ostream& os, const std::vector<EstimateRow>& rows);

void write_variances_csv(std::ostream& os, const std::vector<AsymVariances>& rows);

void write_report_csv(std::ostream& os, const ExperimentReport& report, EstimatorKind estimator);
void write_regression_csv(std::ostream& os, const ExperimentReport& report);
void write_normality_csv(std::ostream& os, const ExperimentReport& report);

struct BoxplotStats {
    double q1;
    double median;
    double q3;
    double whisker_low;   // most extreme value within 1.5 IQR of the box
    double whisker_high;
    std::size_t outliers;
};
BoxplotStats boxplot_stats(const CellRecord& record);

// Quantiles of the estimator errors (estimate - truth) per cell.
void write_boxplot_csv(std::ostream& os, const ExperimentReport& report, EstimatorKind estimator);
// Per-replicate estimates; empty field for excluded replicates.
void write_samples_csv(std::ostream& os, const ExperimentReport& report, EstimatorKind estimator);

} // namespace fbmsde
