#include "tvgp/experiment.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include "tvgp/environment.hpp"
#include "tvgp/gp.hpp"
#include "tvgp/hyperlearn.hpp"
#include "tvgp/rng.hpp"

namespace tvgp {

namespace {

struct TrialResult {
    bool ok = false;
    // cumulative regret per step, per policy
    std::vector<std::vector<double>> cumulative;
};

DomainGrid grid_from_config(const ExperimentConfig& config) {
    return make_grid(config.grid_dim, config.grid_resolution, config.grid_extent);
}

void run_trials(int trials, int threads, const std::function<void(int)>& body) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, trials));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < trials; i = next.fetch_add(1)) body(i);
    };
    std::vector<std::thread> pool;
    for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

ResultTable aggregate(const std::vector<TrialResult>& results,
                      const std::vector<PolicySpec>& policies, int horizon) {
    std::vector<const TrialResult*> ok;
    for (const auto& r : results)
        if (r.ok) ok.push_back(&r);
    const int n = static_cast<int>(ok.size());

    ResultTable table;
    for (std::size_t p = 0; p < policies.size(); ++p) {
        for (int t = 1; t <= horizon; ++t) {
            double mean = 0.0;
            for (const auto* r : ok) mean += r->cumulative[p][t - 1] / t;
            mean /= n;
            double var = 0.0;
            for (const auto* r : ok) {
                const double d = r->cumulative[p][t - 1] / t - mean;
                var += d * d;
            }
            const double sd = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
            table.rows.push_back({policies[p].name, t, mean, sd, n});
        }
    }
    return table;
}

void check_abort_rate(const std::vector<TrialResult>& results) {
    int failed = 0;
    for (const auto& r : results)
        if (!r.ok) ++failed;
    if (failed * 10 > static_cast<int>(results.size()))
        throw NumericalError("more than 10% of trials aborted");
}

}  // namespace

KernelSpec kernel_from_config(const ExperimentConfig& config) {
    if (config.kernel == "se") return SquaredExponential{config.lengthscale};
    if (config.kernel == "matern") return Matern{config.lengthscale, config.nu};
    throw ConfigError("kernel_from_config: synthetic modes need se or matern");
}

AlgorithmConfig resolve_policy(const PolicySpec& spec, const ExperimentConfig& config) {
    AlgorithmConfig algo;
    algo.kind = spec.kind;
    algo.beta_schedule = PracticalBeta{config.beta_c1, config.beta_c2};
    algo.assumed_noise_variance = config.sigma2;
    if (spec.kind == PolicyKind::TvGpUcb)
        algo.assumed_eps = spec.assumed_eps_set ? spec.assumed_eps : config.eps_true;
    if (spec.kind == PolicyKind::RGpUcb) {
        if (spec.block_length > 0) {
            algo.block_length = spec.block_length;
        } else if (config.kernel == "matern") {
            algo.block_length =
                block_size_matern(config.nu, config.grid_dim, config.eps_true, config.horizon);
        } else {
            algo.block_length = block_size_se(config.eps_true, config.horizon);
        }
    }
    return algo;
}

ResultTable run_synthetic(const ExperimentConfig& config) {
    if (config.policies.empty()) throw ConfigError("run_synthetic: no algorithms configured");
    const KernelSpec kernel = kernel_from_config(config);
    const DomainGrid grid = grid_from_config(config);
    const auto factor = EnvState::grid_factor(kernel, grid);

    std::vector<AlgorithmConfig> algos;
    for (const auto& spec : config.policies) algos.push_back(resolve_policy(spec, config));

    std::vector<TrialResult> results(config.trials);
    std::mutex log_mutex;
    run_trials(config.trials, config.threads, [&](int trial) {
        TrialResult& out = results[trial];
        const auto env_seed = derive_seed(config.seed, trial, "env");
        try {
            for (std::size_t p = 0; p < algos.size(); ++p) {
                EnvState env(grid, kernel, config.eps_true, config.sigma2, env_seed, factor);
                const auto algo_seed =
                    derive_seed(config.seed, trial, "alg-" + config.policies[p].name);
                const RegretTrace trace =
                    run_policy(env, kernel, algos[p], config.horizon, algo_seed);
                std::vector<double> cum(config.horizon);
                double acc = 0.0;
                for (int t = 0; t < config.horizon; ++t) {
                    acc += trace.instantaneous[t];
                    cum[t] = acc;
                }
                out.cumulative.push_back(std::move(cum));
            }
            out.ok = true;
        } catch (const NumericalError& e) {
            std::scoped_lock lock(log_mutex);
            std::cerr << "trial " << trial << " aborted (seed " << env_seed << "): " << e.what()
                      << "\n";
        }
    });
    check_abort_rate(results);
    return aggregate(results, config.policies, config.horizon);
}

double fit_eps_from_panel(const SensorDataset& training, double sigma, int panel_rows) {
    std::vector<Eigen::Index> complete;
    for (Eigen::Index i = 0; i < training.readings.rows(); ++i)
        if (!training.readings.row(i).hasNaN()) complete.push_back(i);
    if (complete.size() < 2)
        throw std::runtime_error("fit_eps_from_panel: need >= 2 complete training rows");

    const KernelSpec kernel = empirical_covariance(training);
    const Matrix cov = sample_covariance(training);
    const double scale = std::sqrt(cov.diagonal().maxCoeff());
    double mean = 0.0;
    for (const auto i : complete) mean += training.readings.row(i).mean();
    mean /= static_cast<double>(complete.size());

    std::vector<TrainingSet> panels;
    TrainingSet current;
    int rows_in_panel = 0;
    for (const auto i : complete) {
        for (Eigen::Index j = 0; j < training.readings.cols(); ++j) {
            current.values.push_back((training.readings(i, j) - mean) / scale);
            current.stamps.push_back(static_cast<double>(i));
            current.locations.push_back(index_point(static_cast<int>(j)));
        }
        if (++rows_in_panel == panel_rows) {
            panels.push_back(std::move(current));
            current = {};
            rows_in_panel = 0;
        }
    }
    if (!current.values.empty()) panels.push_back(std::move(current));
    return fit_eps(panels, kernel, sigma, GridSearch{100});
}

ResultTable run_real(const ExperimentConfig& config, const SensorDataset& dataset) {
    if (config.policies.empty()) throw ConfigError("run_real: no algorithms configured");
    SensorDataset working = dataset;
    if (!config.sensor_subset.empty()) working = select_sensors(working, config.sensor_subset);
    const int total_rows = static_cast<int>(working.readings.rows());
    if (config.train_rows < 2 || config.train_rows >= total_rows)
        throw ConfigError("run_real: train_rows must leave both splits non-empty");
    const SensorDataset training = slice_rows(working, 0, config.train_rows);
    const SensorDataset test = slice_rows(working, config.train_rows, total_rows);
    if (test.readings.rows() < config.horizon)
        throw ConfigError("run_real: test split shorter than T");

    const KernelSpec kernel = empirical_covariance(training);
    const Matrix cov = sample_covariance(training);
    const double scale = std::sqrt(cov.diagonal().maxCoeff());
    const double center = [&] {
        double m = 0.0;
        int n = 0;
        for (Eigen::Index i = 0; i < training.readings.rows(); ++i)
            if (!training.readings.row(i).hasNaN()) {
                m += training.readings.row(i).mean();
                ++n;
            }
        return n > 0 ? m / n : 0.0;
    }();

    const double sigma_std = std::sqrt(config.sigma2) / scale;  // standardized units
    double fitted_eps = config.real_assumed_eps;
    if (fitted_eps < 0.0)
        fitted_eps = fit_eps_from_panel(training, std::max(sigma_std, 1e-3));

    const int arms = static_cast<int>(test.readings.cols());
    const DomainGrid domain = make_index_domain(arms);

    std::vector<AlgorithmConfig> algos;
    for (const auto& spec : config.policies) {
        AlgorithmConfig algo;
        algo.kind = spec.kind;
        algo.beta_schedule = PracticalBeta{config.beta_c1, config.beta_c2};
        algo.assumed_noise_variance = std::max(sigma_std * sigma_std, 1e-8);
        if (spec.kind == PolicyKind::TvGpUcb)
            algo.assumed_eps = spec.assumed_eps_set ? spec.assumed_eps : fitted_eps;
        if (spec.kind == PolicyKind::RGpUcb)
            algo.block_length = spec.block_length > 0 ? spec.block_length : 15;
        algos.push_back(algo);
    }

    std::vector<TrialResult> results(config.trials);
    run_trials(config.trials, config.threads, [&](int trial) {
        TrialResult& out = results[trial];
        std::mt19937_64 noise_rng(derive_seed(config.seed, trial, "real-noise"));
        std::normal_distribution<double> normal;
        // Pre-draw the per-step noise so every policy sees the same stream.
        std::vector<double> noise(config.horizon);
        for (auto& z : noise) z = normal(noise_rng);

        for (std::size_t p = 0; p < algos.size(); ++p) {
            SequentialPosterior posterior(
                kernel, domain.points,
                algos[p].kind == PolicyKind::TvGpUcb ? algos[p].assumed_eps : 0.0,
                algos[p].assumed_noise_variance);
            std::mt19937_64 algo_rng(
                derive_seed(config.seed, trial, "real-alg-" + config.policies[p].name));
            std::uniform_int_distribution<int> uniform_arm(0, arms - 1);
            Vector means(arms), stds(arms);
            std::vector<double> cum(config.horizon);
            double acc = 0.0;
            for (int t = 1; t <= config.horizon; ++t) {
                const auto row = test.readings.row(t - 1);
                int arm;
                if (algos[p].kind == PolicyKind::Random) {
                    arm = uniform_arm(algo_rng);
                } else {
                    if (algos[p].kind == PolicyKind::RGpUcb &&
                        (algos[p].block_length == 1 || t % algos[p].block_length == 1))
                        posterior.reset();
                    posterior.predict(means, stds);
                    arm = ucb_select(means, stds, beta(algos[p].beta_schedule, t));
                }
                const double reading = std::isnan(row(arm)) ? center : row(arm);
                const double y_std =
                    (reading - center) / scale + sigma_std * noise[t - 1];
                if (algos[p].kind != PolicyKind::Random) posterior.add_observation(arm, y_std);
                double best = -std::numeric_limits<double>::infinity();
                for (int j = 0; j < arms; ++j)
                    if (!std::isnan(row(j))) best = std::max(best, row(j));
                acc += best - reading;
                cum[t - 1] = acc;
            }
            out.cumulative.push_back(std::move(cum));
        }
        out.ok = true;
    });
    check_abort_rate(results);
    return aggregate(results, config.policies, config.horizon);
}

double real_oracle_regret(const SensorDataset& test_rows) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < test_rows.readings.rows(); ++i) {
        const auto row = test_rows.readings.row(i);
        Eigen::Index arm = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < row.size(); ++j)
            if (!std::isnan(row(j)) && row(j) > best) {
                best = row(j);
                arm = j;
            }
        total += best - row(arm);
    }
    return total;
}

std::uint64_t hash_env_path(const ExperimentConfig& config, std::uint64_t trial, int horizon) {
    const KernelSpec kernel = kernel_from_config(config);
    const DomainGrid grid = grid_from_config(config);
    EnvState env(grid, kernel, config.eps_true, config.sigma2,
                 derive_seed(config.seed, trial, "env"));
    std::uint64_t h = 1469598103934665603ULL;
    for (int t = 0; t < horizon; ++t) {
        const Vector& snap = env.snapshot();
        const auto* bytes = reinterpret_cast<const unsigned char*>(snap.data());
        for (std::size_t i = 0; i < sizeof(double) * snap.size(); ++i) {
            h ^= bytes[i];
            h *= 1099511628211ULL;
        }
        env.evolve();
    }
    return h;
}

}  // namespace tvgp
