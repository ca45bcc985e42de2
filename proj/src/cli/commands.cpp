#include "fbmsde/cli/commands.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "fbmsde/asym_variances.hpp"
#include "fbmsde/cli/config.hpp"
#include "fbmsde/csv_io.hpp"
#include "fbmsde/errors.hpp"
#include "fbmsde/estimators.hpp"
#include "fbmsde/montecarlo.hpp"
#include "fbmsde/svg.hpp"

namespace fbmsde::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    std::string out_dir = ".";
    std::string format = "csv";
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
    std::vector<double> hurst;  // variances only
};

// Output files are rendered in memory first so that a failure part way
// through never leaves a partial set on disk.
using Outputs = std::map<std::string, std::string>;

void write_outputs(const Outputs& files, const fs::path& dir, std::ostream& out) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw ConfigError("--out: cannot create directory '" + dir.string() + "': " +
                          ec.message());
    }
    for (const auto& [name, body] : files) {
        const fs::path path = dir / name;
        std::ofstream f(path, std::ios::binary);
        f << body;
        if (!f) {
            throw ConfigError("--out: cannot write '" + path.string() + "'");
        }
        out << "wrote " << path.string() << '\n';
    }
}

template <class Writer>
std::string render(Writer&& writer) {
    std::ostringstream os;
    writer(os);
    return os.str();
}

Outputs cmd_simulate(const Options& opt, const SimulateConfig& cfg) {
    const std::uint64_t seed = opt.seed.value_or(cfg.seed);
    const SimulatedPath sim =
        simulate_path(cfg.params(), GridSpec(cfg.n, cfg.horizon), seed, cfg.refine, cfg.method);
    return Outputs{
        {"path.csv", render([&](std::ostream& os) { write_path_csv(os, sim.path); })},
        {"driver.csv", render([&](std::ostream& os) { write_fbm_csv(os, sim.driver); })},
    };
}

EstimateRow hurst_row(const HurstEstimate& e, const char* name) {
    return EstimateRow{name, e.value, e.std_error, e.ci_low, e.ci_high, e.flags};
}

EstimateRow unavailable_row(const char* name) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    EstimateFlags flags;
    flags.set(EstimateFlag::unavailable);
    return EstimateRow{name, nan, nan, nan, nan, flags};
}

Outputs cmd_estimate(const EstimateConfig& cfg) {
    std::ifstream in(cfg.input, std::ios::binary);
    if (!in) {
        throw ConfigError("config field 'input': cannot open '" + cfg.input.string() + "'");
    }
    const PathTable table = [&] {
        try {
            return read_path_csv(in);
        } catch (const CsvError& e) {
            throw ConfigError(cfg.input.string() + ": " + e.what());
        }
    }();
    const std::span<const double> values(table.values);
    const double horizon = table.grid.horizon();

    std::optional<HurstEstimate> h1;
    std::optional<HurstEstimate> h2;
    if (cfg.c) {
        h1 = estimate_h1(values, horizon, *cfg.c, cfg.ci_level);
    }
    // h2 needs an odd number of observations (a grid and its nested half).
    if (values.size() % 2 == 1) {
        h2 = estimate_h2(values, cfg.ci_level);
    }

    std::vector<EstimateRow> rows;
    if (cfg.estimators.h1) {
        rows.push_back(hurst_row(*h1, "h1"));
    }
    if (cfg.estimators.h2) {
        rows.push_back(h2 ? hurst_row(*h2, "h2") : unavailable_row("h2"));
    }
    if (cfg.estimators.c2) {
        const std::optional<HurstEstimate>& preferred = cfg.h3_source == HurstEstimator::h2 ? h2 : h1;
        const std::optional<HurstEstimate>& h3 = preferred ? preferred : h1;
        if (h3) {
            const VolatilityEstimate v = estimate_c2(values, h3->value, horizon, cfg.ci_level);
            EstimateFlags flags = v.flags;
            flags.merge(h3->flags);
            rows.push_back(EstimateRow{"c2", v.c2, v.std_error, v.ci_low, v.ci_high, flags});
        } else {
            rows.push_back(unavailable_row("c2"));
        }
    }
    return Outputs{
        {"estimates.csv", render([&](std::ostream& os) { write_estimates_csv(os, rows); })}};
}

Outputs cmd_experiment(const Options& opt, ExperimentConfig cfg, std::ostream& err) {
    if (opt.seed) {
        cfg.base_seed = *opt.seed;
    }
    const ExperimentReport report = run_experiment(cfg);

    Outputs files;
    for (EstimatorKind e : kAllEstimators) {
        if (!cfg.estimators.contains(e)) {
            continue;
        }
        const std::string name(to_string(e));
        files["report_" + name + ".csv"] =
            render([&](std::ostream& os) { write_report_csv(os, report, e); });
        files["boxplot_" + name + ".csv"] =
            render([&](std::ostream& os) { write_boxplot_csv(os, report, e); });
        files["samples_" + name + ".csv"] =
            render([&](std::ostream& os) { write_samples_csv(os, report, e); });
        if (opt.format == "csv+svg") {
            files["boxplot_" + name + ".svg"] =
                render([&](std::ostream& os) { write_boxplot_svg(os, report, e); });
        }
    }
    files["normality.csv"] = render([&](std::ostream& os) { write_normality_csv(os, report); });
    if (cfg.estimators.c2) {
        files["regression.csv"] =
            render([&](std::ostream& os) { write_regression_csv(os, report); });
        if (opt.format == "csv+svg") {
            files["variance_scatter.svg"] =
                render([&](std::ostream& os) { write_variance_scatter_svg(os, report); });
        }
    }

    for (const CellRecord& rec : report.records) {
        if (rec.stats.flag_count > 0) {
            err << "note: " << to_string(rec.estimator) << " H=" << rec.cell.hurst
                << " c=" << rec.cell.c << " n=" << rec.cell.n << ": " << rec.stats.flag_count
                << " of " << cfg.replicates << " replicates flagged\n";
        }
    }
    return files;
}

Outputs cmd_variances(const VariancesConfig& cfg) {
    std::vector<AsymVariances> rows;
    for (double h : cfg.hurst_values) {
        rows.push_back(asym_variances(h, cfg.rel_tol));
    }
    return Outputs{
        {"variances.csv", render([&](std::ostream& os) { write_variances_csv(os, rows); })}};
}

nlohmann::json load(const Options& opt) {
    if (opt.config.empty()) {
        throw ConfigError("--config is required");
    }
    return load_config(opt.config);
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulate fBm-driven SDEs with polynomial drift and estimate H and c^2",
                 "fbmsde"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* config = sub->add_option("--config", opt.config, "JSON config (schema_version 1)");
        if (config_required) {
            config->required();
        }
        sub->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--threads", opt.threads, "Worker threads (default: all cores)")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* simulate = app.add_subcommand("simulate", "Simulate one SDE sample path");
    add_common(simulate, true);
    simulate->add_option("--seed", opt.seed, "Override the config seed");

    CLI::App* estimate = app.add_subcommand("estimate", "Estimate H and c^2 from a path CSV");
    add_common(estimate, true);

    CLI::App* experiment = app.add_subcommand("experiment", "Run a Monte Carlo sweep");
    add_common(experiment, true);
    experiment->add_option("--seed", opt.seed, "Override the config base_seed");
    experiment->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"csv", "csv+svg"}))
        ->capture_default_str();

    CLI::App* variances = app.add_subcommand("variances", "Tabulate the asymptotic variances");
    add_common(variances, false);
    variances->add_option("--hurst", opt.hurst, "H values (instead of a config file)")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (opt.threads) {
            omp_set_num_threads(*opt.threads);
        }
        Outputs files;
        // Each branch validates its whole config before computing anything.
        if (simulate->parsed()) {
            files = cmd_simulate(opt, parse_simulate_config(load(opt)));
        } else if (estimate->parsed()) {
            files = cmd_estimate(
                parse_estimate_config(load(opt), fs::path(opt.config).parent_path()));
        } else if (experiment->parsed()) {
            files = cmd_experiment(opt, parse_experiment_config(load(opt)), err);
        } else {
            VariancesConfig cfg;
            if (!opt.config.empty()) {
                if (!opt.hurst.empty()) {
                    throw ConfigError("--hurst and --config are mutually exclusive");
                }
                cfg = parse_variances_config(load(opt));
            } else {
                nlohmann::json doc{{"schema_version", kSchemaVersion}, {"H_values", opt.hurst}};
                cfg = parse_variances_config(doc);
            }
            files = cmd_variances(cfg);
        }
        write_outputs(files, opt.out_dir, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitOk;
}

} // namespace fbmsde::cli
