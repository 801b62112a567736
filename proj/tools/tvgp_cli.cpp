#include <cstdint>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "tvgp/experiment.hpp"
#include "tvgp/gp.hpp"
#include "tvgp/rng.hpp"
#include "tvgp/theory.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitCheckFailed = 3;

struct CommonFlags {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    int trials = 0;
    int threads = -1;
    bool paper_scale = false;
};

tvgp::ExperimentConfig load_config(const CommonFlags& flags) {
    tvgp::ExperimentConfig cfg;
    if (!flags.config_path.empty()) cfg = tvgp::parse_config_file(flags.config_path);
    if (flags.seed_set) cfg.seed = flags.seed;
    if (!flags.out.empty()) cfg.out = flags.out;
    if (flags.trials > 0) cfg.trials = flags.trials;
    if (flags.threads >= 0) cfg.threads = flags.threads;
    if (flags.paper_scale) {
        cfg.grid_resolution = 50;
        cfg.trials = 200;
    }
    return cfg;
}

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "key = value config file");
    cmd->add_option("--seed", flags.seed, "master seed")->each([&](const std::string&) {
        flags.seed_set = true;
    });
    cmd->add_option("--out", flags.out, "output CSV path");
    cmd->add_option("--trials", flags.trials, "number of trials");
    cmd->add_option("--threads", flags.threads, "worker threads (0 = hardware)");
    cmd->add_flag("--paper-scale", flags.paper_scale, "50x50 grid, 200 trials");
}

int cmd_synthetic(const CommonFlags& flags) {
    auto cfg = load_config(flags);
    if (cfg.policies.empty())
        cfg.policies = {tvgp::parse_policy("tvgpucb"), tvgp::parse_policy("rgpucb"),
                        tvgp::parse_policy("gpucb")};
    const auto table = tvgp::run_synthetic(cfg);
    tvgp::emit_csv(table, cfg.out);
    std::cout << "wrote " << cfg.out << " (" << table.rows.size() << " rows)\n";
    return kExitOk;
}

int cmd_real(const CommonFlags& flags, const std::string& data_override) {
    auto cfg = load_config(flags);
    if (!data_override.empty()) cfg.data_path = data_override;
    if (cfg.data_path.empty()) throw tvgp::ConfigError("real: no data file configured");
    if (cfg.policies.empty())
        cfg.policies = {tvgp::parse_policy("tvgpucb"), tvgp::parse_policy("rgpucb"),
                        tvgp::parse_policy("gpucb"), tvgp::parse_policy("random")};
    const auto dataset = tvgp::ingest_sensor_csv(cfg.data_path);
    const auto table = tvgp::run_real(cfg, dataset);
    tvgp::emit_csv(table, cfg.out);
    std::cout << "wrote " << cfg.out << " (" << table.rows.size() << " rows)\n";
    return kExitOk;
}

int cmd_fit_eps(const CommonFlags& flags, const std::string& data_override, double sigma) {
    auto cfg = load_config(flags);
    if (!data_override.empty()) cfg.data_path = data_override;
    if (cfg.data_path.empty()) throw tvgp::ConfigError("fit-eps: no data file configured");
    auto dataset = tvgp::ingest_sensor_csv(cfg.data_path);
    if (!cfg.sensor_subset.empty()) dataset = tvgp::select_sensors(dataset, cfg.sensor_subset);
    if (cfg.train_rows > 1 && cfg.train_rows < dataset.readings.rows())
        dataset = tvgp::slice_rows(dataset, 0, cfg.train_rows);
    const double eps = tvgp::fit_eps_from_panel(dataset, sigma);
    std::cout << "eps = " << eps << "\n";
    return kExitOk;
}

int cmd_bounds(const CommonFlags& flags, int instances) {
    auto cfg = load_config(flags);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const tvgp::KernelSpec kernel = tvgp::SquaredExponential{0.2};

    int frob_fail = 0, mismatch_fail = 0;
    for (int i = 0; i < instances; ++i) {
        const int n = 2 + static_cast<int>(unit(rng) * 28);
        const double eps = unit(rng) * 0.2;
        std::vector<tvgp::Point> points;
        for (int j = 0; j < n; ++j) {
            tvgp::Point p(2);
            p << unit(rng), unit(rng);
            points.push_back(p);
        }
        if (!tvgp::frobenius_bound_check(points, eps, kernel).pass) {
            ++frob_fail;
            std::cerr << "frobenius counterexample: instance " << i << " n=" << n
                      << " eps=" << eps << "\n";
        }

        const int hist = 2 + static_cast<int>(unit(rng) * 18);
        const double eps2 = unit(rng) * 0.1;
        std::vector<tvgp::Point> history, queries;
        std::vector<double> values;
        std::normal_distribution<double> normal;
        for (int j = 0; j < hist; ++j) {
            tvgp::Point p(2);
            p << unit(rng), unit(rng);
            history.push_back(p);
            values.push_back(normal(rng));
        }
        for (int j = 0; j < 10; ++j) {
            tvgp::Point p(2);
            p << unit(rng), unit(rng);
            queries.push_back(p);
        }
        if (!tvgp::mismatch_bounds_check(history, values, eps2, 0.01, queries, kernel).pass) {
            ++mismatch_fail;
            std::cerr << "mismatch counterexample: instance " << i << " n=" << hist
                      << " eps=" << eps2 << "\n";
        }
    }
    std::cout << "frobenius_bound_check: " << (instances - frob_fail) << "/" << instances
              << (frob_fail == 0 ? " PASS" : " FAIL") << "\n";
    std::cout << "mismatch_bounds_check: " << (instances - mismatch_fail) << "/" << instances
              << (mismatch_fail == 0 ? " PASS" : " FAIL") << "\n";
    return frob_fail + mismatch_fail == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_mi_check(const CommonFlags& flags, int instances) {
    auto cfg = load_config(flags);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const tvgp::KernelSpec kernel = tvgp::SquaredExponential{0.2};

    int failures = 0;
    for (int i = 0; i < instances; ++i) {
        std::vector<tvgp::Point> candidates;
        for (int j = 0; j < 3; ++j) {
            tvgp::Point p(1);
            p << unit(rng);
            candidates.push_back(p);
        }
        const int horizon = 8;
        const int block = 4;
        const double eps = unit(rng) * 0.1;
        std::vector<tvgp::Point> sequence;
        for (int t = 0; t < horizon; ++t)
            sequence.push_back(candidates[static_cast<std::size_t>(unit(rng) * 3) % 3]);
        const auto res =
            tvgp::mi_split_bound_check(sequence, candidates, eps, block, 0.01, kernel);
        if (!res.pass) {
            ++failures;
            std::cerr << "mi-split counterexample: instance " << i << " eps=" << eps
                      << " lhs=" << res.lhs << " bound=" << res.bound << "\n";
        }
    }
    std::cout << "mi_split_bound_check: " << (instances - failures) << "/" << instances
              << (failures == 0 ? " PASS" : " FAIL") << "\n";
    return failures == 0 ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-varying GP bandit experiments"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string data_path;
    double fit_sigma = 0.1;
    int instances = 200;

    auto* synthetic = app.add_subcommand("synthetic", "synthetic grid experiment");
    add_common(synthetic, flags);
    auto* real = app.add_subcommand("real", "sensor-panel experiment");
    add_common(real, flags);
    real->add_option("--data", data_path, "sensor CSV file");
    auto* fit = app.add_subcommand("fit-eps", "fit the forgetting rate from a sensor CSV");
    add_common(fit, flags);
    fit->add_option("--data", data_path, "sensor CSV file");
    fit->add_option("--sigma", fit_sigma, "noise std in standardized units");
    auto* bounds = app.add_subcommand("bounds", "randomized inequality checks");
    add_common(bounds, flags);
    bounds->add_option("--instances", instances, "instances per check");
    auto* mi = app.add_subcommand("mi-check", "mutual-information split bound check");
    add_common(mi, flags);
    mi->add_option("--instances", instances, "instances");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synthetic->parsed()) return cmd_synthetic(flags);
        if (real->parsed()) return cmd_real(flags, data_path);
        if (fit->parsed()) return cmd_fit_eps(flags, data_path, fit_sigma);
        if (bounds->parsed()) return cmd_bounds(flags, instances);
        if (mi->parsed()) return cmd_mi_check(flags, instances);
    } catch (const tvgp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const tvgp::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
