#include "tvgp/theory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tvgp/gp.hpp"
#include "tvgp/rng.hpp"

namespace tvgp {

namespace {

constexpr double kPiSq = std::numbers::pi * std::numbers::pi;

/// Exact gamma_N over size-N multisets of the candidates, by recursive
/// enumeration of non-decreasing index tuples.
double exact_gamma(const std::vector<Point>& candidates, int block, double noise_variance,
                   const KernelSpec& kernel) {
    if (block > 8) throw std::invalid_argument("exact_gamma: N too large for enumeration");
    const Matrix gram = kernel_matrix(kernel, candidates);
    std::vector<int> pick(block);
    double best = 0.0;
    auto recurse = [&](auto&& self, int depth, int start) -> void {
        if (depth == block) {
            Matrix sub(block, block);
            for (int i = 0; i < block; ++i)
                for (int j = 0; j < block; ++j) sub(i, j) = gram(pick[i], pick[j]);
            best = std::max(best, mutual_information(sub, noise_variance));
            return;
        }
        for (int i = start; i < static_cast<int>(candidates.size()); ++i) {
            pick[depth] = i;
            self(self, depth + 1, i);
        }
    };
    recurse(recurse, 0, 0);
    return best;
}

}  // namespace

double capacity_constant(double noise_variance) {
    return 8.0 / std::log1p(1.0 / noise_variance);
}

double regret_bound_tv(const BoundInputs& in) {
    return std::sqrt(capacity_constant(in.noise_variance) * in.horizon * in.beta * in.gamma) + 2.0;
}

double regret_bound_tv_weakened(const BoundInputs& in) {
    const double blocks = static_cast<double>(in.horizon) / in.block + 1.0;
    const double n3 = std::pow(static_cast<double>(in.block), 3.0);
    return std::sqrt(capacity_constant(in.noise_variance) * in.horizon * in.beta * blocks *
                     (in.gamma + n3 * in.eps)) +
           2.0;
}

double regret_bound_r(const BoundInputs& in) {
    const double s2 = 1.0 / in.noise_variance;
    const double s4 = s2 * s2;
    const double blocks = static_cast<double>(in.horizon) / in.block + 1.0;
    const double n3 = std::pow(static_cast<double>(in.block), 3.0);
    const double t = static_cast<double>(in.horizon);
    const double psi =
        std::sqrt(in.beta * (3.0 * s2 + s4) * n3 * in.eps) +
        (s2 + s4) * n3 * in.eps * (2.0 + in.b0) *
            std::sqrt(std::log(2.0 * (1.0 + in.a0) * kPiSq * t * t / (3.0 * in.delta)));
    return std::sqrt(capacity_constant(in.noise_variance) * t * in.beta * blocks * in.gamma) +
           2.0 + t * psi;
}

CorollaryRates corollary_rates(KernelFamily family, double nu, int dim, int horizon, double eps) {
    const double t = static_cast<double>(horizon);
    double c = 0.0;
    double alpha_tv, alpha_r;
    if (family == KernelFamily::SquaredExponential) {
        alpha_tv = 1.0 / 6.0;
        alpha_r = 1.0 / 8.0;
    } else {
        c = dim * (dim + 1.0) / (2.0 * nu + dim * (dim + 1.0));
        alpha_tv = 0.5 * (1.0 - c) / (3.0 - c);
        alpha_r = 0.5 * (1.0 - c) / (4.0 - c);
    }
    const double base = std::sqrt(std::pow(t, 1.0 + c));
    return {std::max(base, t * std::pow(eps, alpha_tv)),
            std::max(base, t * std::pow(eps, alpha_r))};
}

CheckResult frobenius_bound_check(const std::vector<Point>& points, double eps,
                                  const KernelSpec& kernel) {
    const int n = static_cast<int>(points.size());
    const Matrix k = kernel_matrix(kernel, points);
    const Matrix a = k.cwiseProduct(decay_matrix(n, eps)) - k;
    const double lhs = a.norm();
    const double bound = static_cast<double>(n) * n * eps;
    return {lhs <= bound + 1e-12, lhs, bound};
}

CheckResult mi_split_bound_check(const std::vector<Point>& sequence,
                                 const std::vector<Point>& candidates, double eps, int block,
                                 double noise_variance, const KernelSpec& kernel) {
    const int t = static_cast<int>(sequence.size());
    const Matrix gram =
        kernel_matrix(kernel, sequence).cwiseProduct(decay_matrix(t, eps));
    const double lhs = mutual_information(gram, noise_variance);
    const double gamma = exact_gamma(candidates, block, noise_variance, kernel);
    const double n3 = std::pow(static_cast<double>(block), 3.0);
    const double bound = (static_cast<double>(t) / block + 1.0) * (gamma + n3 * eps);
    return {lhs <= bound + 1e-12, lhs, bound};
}

MismatchCheckResult mismatch_bounds_check(const std::vector<Point>& history_points,
                                          const std::vector<double>& history_values, double eps,
                                          double noise_variance,
                                          const std::vector<Point>& queries,
                                          const KernelSpec& kernel) {
    if (history_points.size() != history_values.size())
        throw std::invalid_argument("mismatch_bounds_check: mismatched history lengths");
    const int n = static_cast<int>(history_points.size());
    ObservationHistory history{{}, noise_variance};
    double realized_sup = 0.0;
    for (int i = 0; i < n; ++i) {
        history.records.push_back({i + 1, history_points[i], history_values[i]});
        realized_sup = std::max(realized_sup, std::abs(history_values[i]));
    }
    double mean_gap = 0.0, std_gap = 0.0;
    for (const auto& q : queries) {
        const auto tv = tv_posterior(history, kernel, eps, q);
        const auto ti = ti_posterior(history, kernel, q);
        mean_gap = std::max(mean_gap, std::abs(tv.mean - ti.mean));
        std_gap = std::max(std_gap, std::abs(std::sqrt(tv.variance) - std::sqrt(ti.variance)));
    }
    const double s2 = 1.0 / noise_variance;
    const double s4 = s2 * s2;
    const double n3 = std::pow(static_cast<double>(n), 3.0);
    const double mean_bound = (s2 + s4) * n3 * eps * realized_sup;
    const double std_bound = std::sqrt((3.0 * s2 + s4) * n3 * eps);
    const bool pass = mean_gap <= mean_bound + 1e-12 && std_gap <= std_bound + 1e-12;
    return {pass, mean_gap, mean_bound, std_gap, std_bound};
}

std::vector<double> genie_baseline(const DomainGrid& grid, const KernelSpec& kernel,
                                   const std::vector<double>& eps_values, int horizon, int trials,
                                   std::uint64_t master_seed) {
    const auto factor = EnvState::grid_factor(kernel, grid);
    std::vector<double> means;
    means.reserve(eps_values.size());
    for (std::size_t e = 0; e < eps_values.size(); ++e) {
        double total = 0.0;
        long steps = 0;
        for (int trial = 0; trial < trials; ++trial) {
            const auto seed =
                derive_seed(master_seed, static_cast<std::uint64_t>(trial) * 1000 + e, "genie");
            EnvState env(grid, kernel, eps_values[e], 0.0, seed, factor);
            Vector previous = env.snapshot();
            env.evolve();
            for (int t = 2; t <= horizon; ++t) {
                Eigen::Index arm = 0;
                previous.maxCoeff(&arm);
                total += env.instantaneous_regret(static_cast<int>(arm));
                ++steps;
                previous = env.snapshot();
                env.evolve();
            }
        }
        means.push_back(total / static_cast<double>(steps));
    }
    return means;
}

}  // namespace tvgp
