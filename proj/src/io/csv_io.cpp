#include "fbmsde/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>

#include "fbmsde/stats.hpp"

namespace fbmsde {

std::string format_double(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

template <class Values>
void write_grid_values(std::ostream& os, const GridSpec& grid, const Values& values,
                       const char* column) {
    os << "k,t," << column << '\n';
    for (std::size_t k = 0; k < values.size(); ++k) {
        os << k << ',' << format_double(grid.time(k)) << ',' << format_double(values[k]) << '\n';
    }
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) {
            return out;
        }
        start = comma + 1;
    }
}

double parse_double(const std::string& field, std::size_t line_no, const char* column) {
    double x = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc{} || ptr != last || !std::isfinite(x)) {
        throw CsvError("line " + std::to_string(line_no) + ": column '" + column +
                       "' is not a finite number: '" + field + "'");
    }
    return x;
}

std::string model_name(const ExperimentReport& report) {
    return std::string(to_string(report.config.model));
}

void cell_prefix(std::ostream& os, const ExperimentReport& report, const CellRecord& rec) {
    os << model_name(report) << ',' << format_double(rec.cell.hurst) << ','
       << format_double(rec.cell.c) << ',' << rec.cell.n << ',' << to_string(rec.estimator);
}

} // namespace

void write_fbm_csv(std::ostream& os, const FbmPath& path) {
    write_grid_values(os, path.grid, path.values, "value");
}

void write_path_csv(std::ostream& os, const SamplePath& path) {
    write_grid_values(os, path.grid, path.values, "X");
}

PathTable read_path_csv(std::istream& is) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(is, line)) {
        throw CsvError("line 1: empty input, expected header 'k,t,X' or 'k,t,value'");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    const std::vector<std::string> header = split(line);
    if (header.size() != 3 || header[0] != "k" || header[1] != "t" ||
        (header[2] != "X" && header[2] != "value")) {
        throw CsvError("line 1: expected header 'k,t,X' or 'k,t,value', got '" + line + "'");
    }

    std::vector<double> times;
    std::vector<double> values;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> fields = split(line);
        if (fields.size() != 3) {
            throw CsvError("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                           std::to_string(fields.size()));
        }
        std::size_t k = 0;
        auto [ptr, ec] =
            std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), k);
        if (ec != std::errc{} || ptr != fields[0].data() + fields[0].size() ||
            k != values.size()) {
            throw CsvError("line " + std::to_string(line_no) + ": column 'k' should be " +
                           std::to_string(values.size()) + ", got '" + fields[0] + "'");
        }
        times.push_back(parse_double(fields[1], line_no, "t"));
        values.push_back(parse_double(fields[2], line_no, header[2].c_str()));
    }
    if (values.size() < 3) {
        throw CsvError("line " + std::to_string(line_no) + ": need at least 3 data rows, got " +
                       std::to_string(values.size()));
    }
    const std::size_t n = values.size() - 1;
    if (times.front() != 0.0 || !(times.back() > 0.0)) {
        throw CsvError("column 't': grid must start at 0 and end at a positive horizon");
    }
    const GridSpec grid(n, times.back());
    const double slack = 1e-9 * grid.horizon();
    for (std::size_t k = 0; k <= n; ++k) {
        if (std::abs(times[k] - grid.time(k)) > slack) {
            throw CsvError("line " + std::to_string(k + 2) + ": column 't' is off the uniform grid");
        }
    }
    return PathTable{grid, std::move(values), header[2]};
}

void write_estimates_csv(std::ostream& os, const std::vector<EstimateRow>& rows) {
    os << "estimator,value,std_error,ci_low,ci_high,flags\n";
    for (const EstimateRow& r : rows) {
        os << r.estimator << ',' << format_double(r.value) << ',' << format_double(r.std_error)
           << ',' << format_double(r.ci_low) << ',' << format_double(r.ci_high) << ','
           << r.flags.to_string() << '\n';
    }
}

void write_variances_csv(std::ostream& os, const std::vector<AsymVariances>& rows) {
    os << "H,sigma2,sigma1_sq,sigma2_sq,sigma12,sigma_star2,truncation_terms\n";
    for (const AsymVariances& v : rows) {
        os << format_double(v.hurst) << ',' << format_double(v.sigma2) << ','
           << format_double(v.sigma1_sq) << ',' << format_double(v.sigma2_sq) << ','
           << format_double(v.sigma12) << ',' << format_double(v.sigma_star2) << ','
           << v.truncation_terms << '\n';
    }
}

void write_report_csv(std::ostream& os, const ExperimentReport& report, EstimatorKind estimator) {
    os << "model,H,c,n,estimator,mean,bias,variance,sd,q1,median,q3,iqr,mae,coverage,flags,"
          "replicates\n";
    for (const CellRecord& rec : report.records) {
        if (rec.estimator != estimator) {
            continue;
        }
        const CellStats& s = rec.stats;
        cell_prefix(os, report, rec);
        for (double x : {s.mean, s.bias, s.variance, s.sd, s.q1, s.median, s.q3, s.iqr, s.mae,
                         s.ci_coverage}) {
            os << ',' << format_double(x);
        }
        os << ',' << s.flag_count << ',' << s.replicates_used << '\n';
    }
}

void write_regression_csv(std::ostream& os, const ExperimentReport& report) {
    os << "k,intercept,adj_r2,points\n";
    if (report.regression) {
        const VarianceFit& f = *report.regression;
        os << format_double(f.k) << ',' << format_double(f.intercept) << ','
           << format_double(f.adj_r2) << ',' << f.points << '\n';
    }
}

void write_normality_csv(std::ostream& os, const ExperimentReport& report) {
    os << "model,H,c,n,estimator,statistic,p_value\n";
    for (const NormalityRecord& r : report.normality) {
        os << model_name(report) << ',' << format_double(r.cell.hurst) << ','
           << format_double(r.cell.c) << ',' << r.cell.n << ',' << to_string(r.estimator) << ','
           << format_double(r.result.statistic) << ',' << format_double(r.result.p_value) << '\n';
    }
}

BoxplotStats boxplot_stats(const CellRecord& record) {
    std::vector<double> errors;
    for (double v : record.estimates) {
        if (std::isfinite(v)) {
            errors.push_back(v - record.truth);
        }
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (errors.empty()) {
        return BoxplotStats{nan, nan, nan, nan, nan, 0};
    }
    std::sort(errors.begin(), errors.end());
    BoxplotStats b{};
    b.q1 = quantile_type7(errors, 0.25);
    b.median = quantile_type7(errors, 0.5);
    b.q3 = quantile_type7(errors, 0.75);
    const double reach = 1.5 * (b.q3 - b.q1);
    const double lo_fence = b.q1 - reach;
    const double hi_fence = b.q3 + reach;
    b.whisker_low = *std::find_if(errors.begin(), errors.end(),
                                  [&](double e) { return e >= lo_fence; });
    b.whisker_high = *std::find_if(errors.rbegin(), errors.rend(),
                                   [&](double e) { return e <= hi_fence; });
    b.outliers = static_cast<std::size_t>(std::count_if(
        errors.begin(), errors.end(), [&](double e) { return e < lo_fence || e > hi_fence; }));
    return b;
}

void write_boxplot_csv(std::ostream& os, const ExperimentReport& report, EstimatorKind estimator) {
    os << "model,H,c,n,estimator,q1,median,q3,whisker_low,whisker_high,outliers\n";
    for (const CellRecord& rec : report.records) {
        if (rec.estimator != estimator) {
            continue;
        }
        const BoxplotStats b = boxplot_stats(rec);
        cell_prefix(os, report, rec);
        for (double x : {b.q1, b.median, b.q3, b.whisker_low, b.whisker_high}) {
            os << ',' << format_double(x);
        }
        os << ',' << b.outliers << '\n';
    }
}

void write_samples_csv(std::ostream& os, const ExperimentReport& report, EstimatorKind estimator) {
    os << "model,H,c,n,estimator,replicate,estimate\n";
    for (const CellRecord& rec : report.records) {
        if (rec.estimator != estimator) {
            continue;
        }
        for (std::size_t r = 0; r < rec.estimates.size(); ++r) {
            cell_prefix(os, report, rec);
            os << ',' << r << ',';
            if (std::isfinite(rec.estimates[r])) {
                os << format_double(rec.estimates[r]);
            }
            os << '\n';
        }
    }
}

} // namespace fbmsde
