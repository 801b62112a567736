#pragma once

#include <vector>

#include "tvgp/kernel.hpp"

namespace tvgp {

/// Time-stamped observations for forgetting-rate estimation. Stamps are
/// real-valued and need not be distinct (several sensors per step).
struct TrainingSet {
    std::vector<double> values;
    std::vector<double> stamps;
    std::vector<Point> locations;
};

/// log p(y | kernel, sigma, eps) under the time-varying model: the Gram is
/// K o D with D_ij = (1-eps)^(|t_i - t_j|/2), plus sigma^2 on the diagonal.
double marginal_log_likelihood(const TrainingSet& data, const KernelSpec& kernel, double sigma,
                               double eps);

/// Multi-day total: days are treated as independent, so the log-likelihood
/// is the sum of per-day terms.
double marginal_log_likelihood(const std::vector<TrainingSet>& days, const KernelSpec& kernel,
                               double sigma, double eps);

/// d/d eps of the marginal log-likelihood:
/// (1/2) tr((alpha alpha^T - M^-1)(K o D')) with M = K o D + sigma^2 I,
/// alpha = M^-1 y and D'_ij = -v (1-eps)^(v-1), v = |t_i - t_j|/2.
double mll_grad_eps(const TrainingSet& data, const KernelSpec& kernel, double sigma, double eps);

double mll_grad_eps(const std::vector<TrainingSet>& days, const KernelSpec& kernel, double sigma,
                    double eps);

struct GridSearch {
    int resolution = 200;
};

struct AscentSearch {
    double step = 0.05;
    int max_iters = 200;
    double tol = 1e-6;
};

/// Fit eps in [0,1] by maximizing the marginal likelihood. Grid search
/// scans [0,1]; ascent runs projected gradient steps clamped to
/// [1e-6, 1-1e-6]. Throws std::invalid_argument on degenerate data
/// (fewer than 2 observations or fewer than 2 distinct stamps).
double fit_eps(const std::vector<TrainingSet>& days, const KernelSpec& kernel, double sigma,
               const GridSearch& search);
double fit_eps(const std::vector<TrainingSet>& days, const KernelSpec& kernel, double sigma,
               const AscentSearch& search);

}  // namespace tvgp
