#include "tvgp/algorithms.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace tvgp {

namespace {

constexpr double kPiSq = std::numbers::pi * std::numbers::pi;

double theoretical_tv(const TheoreticalTvBeta& s, double t) {
    const double first = 2.0 * std::log(kPiSq * t * t / (2.0 * s.delta));
    const double inner = std::log(s.d * s.a * kPiSq * t * t / (2.0 * s.delta));
    const double second =
        2.0 * s.d * std::log(s.r * s.d * s.b * t * t * std::sqrt(inner));
    return first + second;
}

double theoretical_r(const TheoreticalRBeta& s, double t) {
    const double first = 2.0 * std::log(2.0 * kPiSq * t * t / (3.0 * s.delta));
    const double inner = std::log(2.0 * s.d * s.a * kPiSq * t * t / (3.0 * s.delta));
    const double second =
        2.0 * s.d * std::log(s.r * s.d * s.b * t * t * std::sqrt(inner));
    return first + second;
}

}  // namespace

double beta(const BetaSchedule& schedule, int t) {
    if (t < 1) throw std::invalid_argument("beta: t must be >= 1");
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PracticalBeta>) {
                return std::max(0.0, s.c1 * std::log(s.c2 * t));
            } else if constexpr (std::is_same_v<T, TheoreticalTvBeta>) {
                return theoretical_tv(s, t);
            } else {
                return theoretical_r(s, t);
            }
        },
        schedule);
}

int ucb_select(const Vector& means, const Vector& stds, double beta_value) {
    if (means.size() == 0 || means.size() != stds.size())
        throw std::invalid_argument("ucb_select: empty or mismatched arm set");
    const double root_beta = std::sqrt(beta_value);
    int best = 0;
    double best_score = means(0) + root_beta * stds(0);
    for (Eigen::Index i = 1; i < means.size(); ++i) {
        const double score = means(i) + root_beta * stds(i);
        if (score > best_score) {
            best = static_cast<int>(i);
            best_score = score;
        }
    }
    return best;
}

RegretTrace run_policy(EnvState& env, const KernelSpec& kernel, const AlgorithmConfig& config,
                       int horizon, std::uint64_t algo_seed) {
    const int num_arms = env.num_arms();
    const double posterior_eps =
        config.kind == PolicyKind::TvGpUcb ? config.assumed_eps : 0.0;
    SequentialPosterior posterior(kernel, env.grid().points, posterior_eps,
                                  config.assumed_noise_variance);
    std::mt19937_64 rng(algo_seed);
    std::uniform_int_distribution<int> uniform_arm(0, num_arms - 1);

    RegretTrace trace;
    trace.seed = algo_seed;
    trace.arms.reserve(horizon);
    trace.observations.reserve(horizon);
    trace.instantaneous.reserve(horizon);

    Vector means(num_arms), stds(num_arms);
    int block_step = 0;  // R-GP-UCB restarts its own step counter at each reset
    for (int t = 1; t <= horizon; ++t) {
        int arm;
        if (config.kind == PolicyKind::Random) {
            arm = uniform_arm(rng);
        } else {
            if (config.kind == PolicyKind::RGpUcb &&
                (config.block_length == 1 || t % config.block_length == 1)) {
                posterior.reset();
                block_step = 0;
            }
            ++block_step;
            const int clock = config.kind == PolicyKind::RGpUcb ? block_step : t;
            posterior.predict(means, stds);
            arm = ucb_select(means, stds, beta(config.beta_schedule, clock));
        }
        const double y = env.observe(arm);
        const double regret = env.instantaneous_regret(arm);
        if (config.kind != PolicyKind::Random) posterior.add_observation(arm, y);
        trace.arms.push_back(arm);
        trace.observations.push_back(y);
        trace.instantaneous.push_back(regret);
        trace.cumulative += regret;
        env.evolve();
    }
    return trace;
}

int block_size_se(double eps, int horizon) {
    if (eps == 0.0) return horizon;
    if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("block_size_se: eps in [0,1]");
    const double n = 12.0 * std::pow(eps, -0.25);
    return static_cast<int>(std::ceil(std::min(static_cast<double>(horizon), n)));
}

int block_size_matern(double nu, int dim, double eps, int horizon) {
    if (eps == 0.0) return horizon;
    if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("block_size_matern: eps in [0,1]");
    const double c = dim * (dim + 1.0) / (2.0 * nu + dim * (dim + 1.0));
    const double n = 24.0 * std::pow(eps, -1.0 / (4.0 - c));
    return static_cast<int>(std::ceil(std::min(static_cast<double>(horizon), n)));
}

}  // namespace tvgp
