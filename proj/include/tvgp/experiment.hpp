#pragma once

#include "tvgp/config.hpp"
#include "tvgp/csv.hpp"
#include "tvgp/sensor_data.hpp"

namespace tvgp {

/// Kernel named by the config (synthetic modes: se | matern).
KernelSpec kernel_from_config(const ExperimentConfig& config);

/// Resolve a policy spec against the experiment parameters: unset TV eps
/// defaults to eps_true, unset R block to the cross-validated rule.
AlgorithmConfig resolve_policy(const PolicySpec& spec, const ExperimentConfig& config);

/// Synthetic bandit experiment. Every configured policy sees the same
/// environment path within a trial (same derived env seed). Trials run in
/// parallel; the merge is by trial index, so the result is independent of
/// the thread count. A trial that hits a numerical failure is dropped with
/// a note to stderr; more than 10% dropped trials raises NumericalError.
ResultTable run_synthetic(const ExperimentConfig& config);

/// Real-data run: rows [0, train_rows) fit the empirical kernel (and eps,
/// unless assumed_eps is set), remaining rows drive the bandit. Regret at
/// each step is max(row) - row[chosen]; observations carry N(0, sigma2)
/// noise from a per-trial stream.
ResultTable run_real(const ExperimentConfig& config, const SensorDataset& dataset);

/// Cumulative regret of the argmax-of-current-row policy on the test rows
/// (identically 0 by construction; exposed for harness checks).
double real_oracle_regret(const SensorDataset& test_rows);

/// Fit eps from the training split of a sensor panel. Rows are chunked
/// into independent panels of at most `panel_rows` consecutive steps to
/// keep each Gram factorization small.
double fit_eps_from_panel(const SensorDataset& training, double sigma, int panel_rows = 12);

/// FNV-style hash of the environment path (all snapshots over `horizon`
/// steps); used to verify that trials are reproducible and that policies
/// share identical paths.
std::uint64_t hash_env_path(const ExperimentConfig& config, std::uint64_t trial, int horizon);

}  // namespace tvgp
