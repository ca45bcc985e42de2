#include "fbmsde/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "fbmsde/csv_io.hpp"

namespace fbmsde {

namespace {

constexpr double kWidth = 900.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 70.0;

// Short fixed-precision numbers for labels; the CSVs carry the exact values.
std::string label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

struct Axis {
    double lo;
    double hi;

    double y(double v) const {
        const double span = hi > lo ? hi - lo : 1.0;
        return kTop + (hi - v) / span * (kHeight - kTop - kBottom);
    }
};

void header(std::ostream& os, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">"
       << title << "</text>\n";
}

void y_axis(std::ostream& os, const Axis& axis) {
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
       << kHeight - kBottom << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = axis.lo + (axis.hi - axis.lo) * i / 4.0;
        os << "<text x=\"" << kLeft - 6 << "\" y=\"" << axis.y(v) + 4
           << "\" text-anchor=\"end\">" << label(v) << "</text>\n";
    }
}

} // namespace

void write_boxplot_svg(std::ostream& os, const ExperimentReport& report, EstimatorKind estimator) {
    std::vector<const CellRecord*> cells;
    std::vector<BoxplotStats> boxes;
    for (const CellRecord& rec : report.records) {
        if (rec.estimator == estimator && rec.stats.replicates_used > 0) {
            cells.push_back(&rec);
            boxes.push_back(boxplot_stats(rec));
        }
    }
    header(os, "errors of " + std::string(to_string(estimator)) + " (" +
                   std::string(to_string(report.config.model)) + ")");
    if (boxes.empty()) {
        os << "</svg>\n";
        return;
    }
    Axis axis{boxes.front().whisker_low, boxes.front().whisker_high};
    for (const BoxplotStats& b : boxes) {
        axis.lo = std::min({axis.lo, b.whisker_low, 0.0});
        axis.hi = std::max({axis.hi, b.whisker_high, 0.0});
    }
    y_axis(os, axis);
    os << "<line x1=\"" << kLeft << "\" y1=\"" << axis.y(0.0) << "\" x2=\"" << kWidth - kRight
       << "\" y2=\"" << axis.y(0.0) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";

    const double slot = (kWidth - kLeft - kRight) / static_cast<double>(boxes.size());
    const double half = std::min(20.0, slot * 0.3);
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const BoxplotStats& b = boxes[i];
        const double x = kLeft + slot * (static_cast<double>(i) + 0.5);
        os << "<line x1=\"" << x << "\" y1=\"" << axis.y(b.whisker_low) << "\" x2=\"" << x
           << "\" y2=\"" << axis.y(b.whisker_high) << "\" stroke=\"black\"/>\n";
        os << "<rect x=\"" << x - half << "\" y=\"" << axis.y(b.q3) << "\" width=\"" << 2 * half
           << "\" height=\"" << std::max(axis.y(b.q1) - axis.y(b.q3), 0.5)
           << "\" fill=\"#cde\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << x - half << "\" y1=\"" << axis.y(b.median) << "\" x2=\""
           << x + half << "\" y2=\"" << axis.y(b.median) << "\" stroke=\"black\" "
           << "stroke-width=\"2\"/>\n";
        const Cell& c = cells[i]->cell;
        os << "<text x=\"" << x << "\" y=\"" << kHeight - kBottom + 16
           << "\" text-anchor=\"middle\">H=" << label(c.hurst) << "</text>\n"
           << "<text x=\"" << x << "\" y=\"" << kHeight - kBottom + 30
           << "\" text-anchor=\"middle\">c=" << label(c.c) << "</text>\n"
           << "<text x=\"" << x << "\" y=\"" << kHeight - kBottom + 44
           << "\" text-anchor=\"middle\">n=" << c.n << "</text>\n";
    }
    os << "</svg>\n";
}

void write_variance_scatter_svg(std::ostream& os, const ExperimentReport& report) {
    std::vector<std::pair<double, double>> points;
    for (const CellRecord& rec : report.records) {
        if (rec.estimator == EstimatorKind::c2 && std::isfinite(rec.stats.variance)) {
            points.emplace_back(std::pow(rec.cell.c, 4), rec.stats.variance);
        }
    }
    header(os, "variance of c^2 estimate against c^4");
    if (points.empty()) {
        os << "</svg>\n";
        return;
    }
    double xmax = 0.0;
    Axis axis{0.0, 0.0};
    for (auto [x, y] : points) {
        xmax = std::max(xmax, x);
        axis.hi = std::max(axis.hi, y);
    }
    if (report.regression) {
        axis.lo = std::min(axis.lo, report.regression->intercept);
        axis.hi = std::max(axis.hi, report.regression->intercept + report.regression->k * xmax);
    }
    if (xmax <= 0.0) {
        xmax = 1.0;
    }
    auto px = [&](double x) { return kLeft + x / xmax * (kWidth - kLeft - kRight - 10.0); };
    y_axis(os, axis);
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\""
       << kWidth - kRight << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = xmax * i / 4.0;
        os << "<text x=\"" << px(v) << "\" y=\"" << kHeight - kBottom + 16
           << "\" text-anchor=\"middle\">" << label(v) << "</text>\n";
    }
    if (report.regression) {
        const VarianceFit& f = *report.regression;
        os << "<line x1=\"" << px(0.0) << "\" y1=\"" << axis.y(f.intercept) << "\" x2=\""
           << px(xmax) << "\" y2=\"" << axis.y(f.intercept + f.k * xmax)
           << "\" stroke=\"#c33\"/>\n"
           << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 14 << "\">k=" << label(f.k)
           << ", adj R2=" << label(f.adj_r2) << "</text>\n";
    }
    for (auto [x, y] : points) {
        os << "<circle cx=\"" << px(x) << "\" cy=\"" << axis.y(y)
           << "\" r=\"4\" fill=\"#36c\"/>\n";
    }
    os << "</svg>\n";
}

} // namespace fbmsde
