#include "fbmsde/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fbmsde::cli {

using nlohmann::json;

namespace {

const std::map<std::string, std::vector<std::string>>& key_table() {
    static const std::map<std::string, std::vector<std::string>> table{
        {"simulate",
         {"schema_version", "model", "H", "c", "lambda", "b", "x0", "T", "n", "seed", "refine",
          "method"}},
        {"estimate", {"schema_version", "input", "estimators", "c", "ci_level", "h3_source"}},
        {"experiment",
         {"schema_version", "model", "H_values", "c_values", "lambda", "b", "x0", "T",
          "n_values", "replicates", "base_seed", "estimators", "ci_level", "refine", "h3_source",
          "method"}},
        {"variances", {"schema_version", "H_values", "rel_tol"}},
    };
    return table;
}

[[noreturn]] void field_error(const std::string& field, const std::string& msg) {
    throw ConfigError("config field '" + field + "': " + msg);
}

// Typed access to one config object; every lookup names its field on error.
class Reader {
public:
    Reader(const json& doc, const std::string& subcommand) : doc_(doc) {
        if (!doc_.is_object()) {
            throw ConfigError("config: top level must be a JSON object");
        }
        if (!doc_.contains("schema_version")) {
            field_error("schema_version", "missing (expected " + std::to_string(kSchemaVersion) +
                                              ")");
        }
        const json& v = doc_.at("schema_version");
        if (!v.is_number_integer() || v.get<long long>() != kSchemaVersion) {
            field_error("schema_version", "unsupported value " + v.dump() + " (expected " +
                                              std::to_string(kSchemaVersion) + ")");
        }
        const std::vector<std::string>& keys = key_table().at(subcommand);
        for (const auto& [key, value] : doc_.items()) {
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
                field_error(key, "unknown for subcommand '" + subcommand + "'");
            }
        }
    }

    bool has(const std::string& key) const { return doc_.contains(key); }

    double number(const std::string& key, double fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const json& v = doc_.at(key);
        if (!v.is_number() || !std::isfinite(v.get<double>())) {
            field_error(key, "expected a finite number, got " + v.dump());
        }
        return v.get<double>();
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const json& v = doc_.at(key);
        if (!v.is_number_unsigned()) {
            field_error(key, "expected a non-negative integer, got " + v.dump());
        }
        return v.get<std::uint64_t>();
    }

    std::string text(const std::string& key, const std::string& fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const json& v = doc_.at(key);
        if (!v.is_string()) {
            field_error(key, "expected a string, got " + v.dump());
        }
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const json& v = doc_.at(key);
        if (!v.is_array()) {
            field_error(key, "expected an array of numbers, got " + v.dump());
        }
        std::vector<double> out;
        for (const json& x : v) {
            if (!x.is_number() || !std::isfinite(x.get<double>())) {
                field_error(key, "expected an array of numbers, got element " + x.dump());
            }
            out.push_back(x.get<double>());
        }
        return out;
    }

    std::vector<std::size_t> sizes(const std::string& key, std::vector<std::size_t> fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const json& v = doc_.at(key);
        if (!v.is_array()) {
            field_error(key, "expected an array of integers, got " + v.dump());
        }
        std::vector<std::size_t> out;
        for (const json& x : v) {
            if (!x.is_number_unsigned()) {
                field_error(key, "expected an array of non-negative integers, got element " +
                                     x.dump());
            }
            out.push_back(x.get<std::size_t>());
        }
        return out;
    }

    template <class T, class Parse>
    T choice(const std::string& key, T fallback, Parse parse) const {
        if (!has(key)) {
            return fallback;
        }
        const std::string name = text(key, "");
        try {
            return parse(name);
        } catch (const std::invalid_argument& e) {
            field_error(key, e.what());
        }
    }

    // "b" is accepted as an alias of "lambda" (the linear drift coefficient).
    double lambda(double fallback) const {
        if (has("lambda") && has("b")) {
            field_error("b", "give either 'lambda' or its alias 'b', not both");
        }
        return has("b") ? number("b", fallback) : number("lambda", fallback);
    }

    EstimatorSet estimators() const {
        if (!has("estimators")) {
            return EstimatorSet{};
        }
        const json& v = doc_.at("estimators");
        if (!v.is_array() || v.empty()) {
            field_error("estimators", "expected a non-empty array drawn from h1, h2, c2");
        }
        EstimatorSet set{false, false, false};
        for (const json& x : v) {
            if (!x.is_string()) {
                field_error("estimators", "expected strings, got element " + x.dump());
            }
            EstimatorKind e{};
            try {
                e = parse_estimator(x.get<std::string>());
            } catch (const std::invalid_argument& err) {
                field_error("estimators", err.what());
            }
            switch (e) {
            case EstimatorKind::h1:
                set.h1 = true;
                break;
            case EstimatorKind::h2:
                set.h2 = true;
                break;
            case EstimatorKind::c2:
                set.c2 = true;
                break;
            }
        }
        return set;
    }

private:
    const json& doc_;
};

HurstEstimator parse_h3_source(const std::string& name) {
    if (name == "h1") {
        return HurstEstimator::h1;
    }
    if (name == "h2") {
        return HurstEstimator::h2;
    }
    throw std::invalid_argument("expected 'h1' or 'h2', got '" + name + "'");
}

void require_ci_level(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        field_error("ci_level", "must lie in (0, 1)");
    }
}

std::string line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

} // namespace

SdeParams SimulateConfig::params() const { return preset(model, lambda, c, x0, hurst); }

json parse_config_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // e.byte is one past the offending character.
        throw ConfigError("config syntax error at " +
                          line_column(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
    }
}

json load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

SimulateConfig parse_simulate_config(const json& doc) {
    const Reader r(doc, "simulate");
    SimulateConfig cfg;
    cfg.model = r.choice("model", cfg.model, parse_model);
    cfg.hurst = r.number("H", cfg.hurst);
    cfg.c = r.number("c", cfg.c);
    cfg.lambda = r.lambda(cfg.lambda);
    cfg.x0 = r.number("x0", cfg.x0);
    cfg.horizon = r.number("T", cfg.horizon);
    cfg.n = r.unsigned_integer("n", cfg.n);
    cfg.seed = r.unsigned_integer("seed", cfg.seed);
    cfg.refine = r.unsigned_integer("refine", cfg.refine);
    cfg.method = r.choice("method", cfg.method, parse_synthesis_method);

    if (!(cfg.hurst > 0.5 && cfg.hurst < 1.0)) {
        field_error("H", "must lie in (0.5, 1)");
    }
    if (cfg.c == 0.0) {
        field_error("c", "must be non-zero");
    }
    if (!(cfg.x0 > 0.0)) {
        field_error("x0", "must be positive");
    }
    if (!(cfg.horizon > 0.0)) {
        field_error("T", "must be positive");
    }
    if (cfg.n < 2) {
        field_error("n", "must be >= 2");
    }
    if (cfg.refine < 1) {
        field_error("refine", "must be >= 1");
    }
    return cfg;
}

EstimateConfig parse_estimate_config(const json& doc, const std::filesystem::path& base_dir) {
    const Reader r(doc, "estimate");
    EstimateConfig cfg;
    if (!r.has("input")) {
        field_error("input", "missing (path of a k,t,X or k,t,value CSV)");
    }
    cfg.input = r.text("input", "");
    if (cfg.input.is_relative() && !base_dir.empty()) {
        cfg.input = base_dir / cfg.input;
    }
    cfg.estimators = r.estimators();
    if (r.has("c")) {
        cfg.c = r.number("c", 0.0);
        if (*cfg.c == 0.0) {
            field_error("c", "must be non-zero");
        }
    }
    cfg.ci_level = r.number("ci_level", cfg.ci_level);
    require_ci_level(cfg.ci_level);
    cfg.h3_source = r.choice("h3_source", cfg.h3_source, parse_h3_source);
    if (cfg.estimators.h1 && !cfg.c) {
        field_error("c", "required when h1 is requested (h1 assumes the volatility is known)");
    }
    if (cfg.estimators.c2 && cfg.h3_source == HurstEstimator::h1 && !cfg.c) {
        field_error("c", "required when c2 uses h1 as its plug-in");
    }
    return cfg;
}

ExperimentConfig parse_experiment_config(const json& doc) {
    const Reader r(doc, "experiment");
    ExperimentConfig cfg;
    cfg.model = r.choice("model", cfg.model, parse_model);
    cfg.hurst_values = r.numbers("H_values", cfg.hurst_values);
    cfg.c_values = r.numbers("c_values", cfg.c_values);
    cfg.lambda = r.lambda(cfg.lambda);
    cfg.x0 = r.number("x0", cfg.x0);
    cfg.horizon = r.number("T", cfg.horizon);
    cfg.n_values = r.sizes("n_values", cfg.n_values);
    cfg.replicates = r.unsigned_integer("replicates", cfg.replicates);
    cfg.base_seed = r.unsigned_integer("base_seed", cfg.base_seed);
    cfg.estimators = r.estimators();
    cfg.ci_level = r.number("ci_level", cfg.ci_level);
    cfg.refine = r.unsigned_integer("refine", cfg.refine);
    cfg.h3_source = r.choice("h3_source", cfg.h3_source, parse_h3_source);
    cfg.method = r.choice("method", cfg.method, parse_synthesis_method);
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config ") + e.what());
    }
    return cfg;
}

VariancesConfig parse_variances_config(const json& doc) {
    const Reader r(doc, "variances");
    VariancesConfig cfg;
    cfg.hurst_values = r.numbers("H_values", {});
    cfg.rel_tol = r.number("rel_tol", cfg.rel_tol);
    if (cfg.hurst_values.empty()) {
        field_error("H_values", "must list at least one H");
    }
    for (double h : cfg.hurst_values) {
        if (!(h > 0.5 && h < 1.0)) {
            field_error("H_values", "every H must lie in (0.5, 1), got " + json(h).dump());
        }
    }
    if (!(cfg.rel_tol > 0.0 && cfg.rel_tol < 1.0)) {
        field_error("rel_tol", "must lie in (0, 1)");
    }
    return cfg;
}

std::vector<std::string> accepted_keys(const std::string& subcommand) {
    const auto it = key_table().find(subcommand);
    if (it == key_table().end()) {
        throw std::invalid_argument("unknown subcommand '" + subcommand + "'");
    }
    return it->second;
}

} // namespace fbmsde::cli
