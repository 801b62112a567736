#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tvgp/algorithms.hpp"

namespace tvgp {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One configured policy. block_length <= 0 means "pick via the
/// cross-validated block-size rule for the configured kernel".
struct PolicySpec {
    std::string name;
    PolicyKind kind;
    int block_length = 0;
    double assumed_eps = 0.0;
    bool assumed_eps_set = false;
};

struct ExperimentConfig {
    std::string mode = "synthetic";

    int grid_dim = 2;
    int grid_resolution = 30;
    double grid_extent = 1.0;

    std::string kernel = "se";  // se | matern | empirical
    double lengthscale = 0.2;
    double nu = 2.5;

    double eps_true = 0.01;
    double sigma2 = 0.01;
    int horizon = 200;
    int trials = 50;
    std::uint64_t seed = 1;
    int threads = 0;  // 0 = hardware concurrency
    std::string out = "results.csv";

    double beta_c1 = 0.8;
    double beta_c2 = 4.0;

    std::vector<PolicySpec> policies;

    // real / fit-eps modes
    std::string data_path;
    int train_rows = 0;
    double real_assumed_eps = -1.0;  // < 0 means fit from the training split
    std::vector<int> sensor_subset;
};

/// Parse a flat `key = value` file ('#' comments, lists comma-separated).
/// Throws ConfigError on unknown keys or malformed values.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

/// Parse one policy token: gpucb | rgpucb[:N] | tvgpucb[:eps] | random.
PolicySpec parse_policy(const std::string& token);

/// The 50 traffic-sensor IDs used as the default real-data subset.
const std::vector<int>& traffic_sensor_preset();

}  // namespace tvgp
