#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fbmsde/fbm.hpp"
#include "fbmsde/montecarlo.hpp"
#include "fbmsde/sde.hpp"

namespace fbmsde::cli {

inline constexpr int kSchemaVersion = 1;

// Anything wrong with the config document or CLI flags. The message names
// the field, or the line and column for syntax errors.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SimulateConfig {
    Model model = Model::verhulst;
    double hurst = 0.7;
    double c = 0.7;
    double lambda = 0.5;
    double x0 = 3.0;
    double horizon = 1.0;
    std::size_t n = 1024;
    std::uint64_t seed = 1;
    std::size_t refine = kDefaultRefine;
    SynthesisMethod method = SynthesisMethod::spectral_circulant;

    SdeParams params() const;
};

struct EstimateConfig {
    std::filesystem::path input;
    EstimatorSet estimators;
    std::optional<double> c;
    double ci_level = 0.95;
    HurstEstimator h3_source = HurstEstimator::h2;
};

struct VariancesConfig {
    std::vector<double> hurst_values;
    double rel_tol = 1e-12;
};

// Parses the file and checks schema_version; syntax errors carry line/column.
nlohmann::json load_config(const std::filesystem::path& path);
nlohmann::json parse_config_text(const std::string& text);

// Field-level validation mirroring schema/config.schema.json. Unknown keys
// are rejected. Relative input paths resolve against base_dir.
SimulateConfig parse_simulate_config(const nlohmann::json& doc);
EstimateConfig parse_estimate_config(const nlohmann::json& doc,
                                     const std::filesystem::path& base_dir = {});
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
VariancesConfig parse_variances_config(const nlohmann::json& doc);

// Keys each subcommand accepts, for checking against the published schema.
std::vector<std::string> accepted_keys(const std::string& subcommand);

} // namespace fbmsde::cli
