#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "tvgp/environment.hpp"
#include "tvgp/gp.hpp"

namespace tvgp {

/// beta_t = c1 * log(c2 * t), clamped at 0 when the log goes negative.
struct PracticalBeta {
    double c1 = 0.8;
    double c2 = 4.0;
};

/// Theorem-form beta_T for TV-GP-UCB.
struct TheoreticalTvBeta {
    double delta;
    double d;
    double r;
    double a;
    double b;
};

/// Theorem-form beta_T for R-GP-UCB.
struct TheoreticalRBeta {
    double delta;
    double d;
    double r;
    double a;
    double b;
};

using BetaSchedule = std::variant<PracticalBeta, TheoreticalTvBeta, TheoreticalRBeta>;

double beta(const BetaSchedule& schedule, int t);

enum class PolicyKind { GpUcb, RGpUcb, TvGpUcb, Random };

struct AlgorithmConfig {
    PolicyKind kind = PolicyKind::TvGpUcb;
    int block_length = 1;        // R-GP-UCB only
    double assumed_eps = 0.0;    // TV-GP-UCB only
    BetaSchedule beta_schedule = PracticalBeta{};
    double assumed_noise_variance = 0.01;
};

struct RegretTrace {
    std::vector<int> arms;
    std::vector<double> observations;
    std::vector<double> instantaneous;
    double cumulative = 0.0;
    std::uint64_t seed = 0;
};

/// argmax of mean + sqrt(beta) * std; ties broken by lowest index.
int ucb_select(const Vector& means, const Vector& stds, double beta_value);

/// Run one policy against the environment for `horizon` steps. The
/// environment is consumed (evolved in place). `algo_seed` feeds the
/// policy's own RNG stream (used by Random only). R-GP-UCB runs a fresh
/// GP-UCB instance per block, so its beta clock restarts at each reset.
RegretTrace run_policy(EnvState& env, const KernelSpec& kernel, const AlgorithmConfig& config,
                       int horizon, std::uint64_t algo_seed = 0);

/// Cross-validated block-size rules: ceil(min(T, 12 eps^-1/4)) for SE and
/// ceil(min(T, 24 eps^-1/(4-c))) for Matern with c = d(d+1)/(2 nu + d(d+1)).
/// eps = 0 returns T.
int block_size_se(double eps, int horizon);
int block_size_matern(double nu, int dim, double eps, int horizon);

}  // namespace tvgp
