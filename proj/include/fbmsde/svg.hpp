#pragma once

#include <iosfwd>

#include "fbmsde/montecarlo.hpp"

namespace fbmsde {

// Boxplots of estimate - truth, one box per cell, whiskers at 1.5 IQR.
void write_boxplot_svg(std::ostream& os, const ExperimentReport& report, EstimatorKind estimator);

// Var(c^2 estimate) against c^4 with the fitted line when available.
void write_variance_scatter_svg(std::ostream& os, const ExperimentReport& report);

} // namespace fbmsde
