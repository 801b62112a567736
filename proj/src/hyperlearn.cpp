#include "tvgp/hyperlearn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "tvgp/gp.hpp"

namespace tvgp {

namespace {

void check_sizes(const TrainingSet& data) {
    if (data.values.size() != data.stamps.size() || data.values.size() != data.locations.size())
        throw std::invalid_argument("TrainingSet: mismatched field lengths");
}

Matrix decayed_gram(const TrainingSet& data, const KernelSpec& kernel, double eps) {
    const int n = static_cast<int>(data.values.size());
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = eval_kernel(kernel, data.locations[i], data.locations[j]) *
                             decay_pow(eps, std::abs(data.stamps[i] - data.stamps[j]));
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

void check_fit_inputs(const std::vector<TrainingSet>& days) {
    std::size_t total = 0;
    std::set<double> stamps;
    for (const auto& day : days) {
        check_sizes(day);
        total += day.values.size();
        stamps.insert(day.stamps.begin(), day.stamps.end());
    }
    if (total < 2 || stamps.size() < 2)
        throw std::invalid_argument(
            "fit_eps: need at least 2 observations with 2 distinct time stamps");
}

}  // namespace

double marginal_log_likelihood(const TrainingSet& data, const KernelSpec& kernel, double sigma,
                               double eps) {
    check_sizes(data);
    if (sigma <= 0.0) throw std::invalid_argument("marginal_log_likelihood: sigma must be > 0");
    const int n = static_cast<int>(data.values.size());
    if (n == 0) return 0.0;
    Matrix m = decayed_gram(data, kernel, eps);
    m.diagonal().array() += sigma * sigma;
    const Matrix lower = cholesky_with_jitter(m);
    Vector y = Eigen::Map<const Vector>(data.values.data(), n);
    const Vector u = lower.triangularView<Eigen::Lower>().solve(y);
    return -0.5 * u.squaredNorm() - 0.5 * log_det_from_cholesky(lower) -
           0.5 * n * std::log(2.0 * std::numbers::pi);
}

double marginal_log_likelihood(const std::vector<TrainingSet>& days, const KernelSpec& kernel,
                               double sigma, double eps) {
    double total = 0.0;
    for (const auto& day : days) total += marginal_log_likelihood(day, kernel, sigma, eps);
    return total;
}

double mll_grad_eps(const TrainingSet& data, const KernelSpec& kernel, double sigma, double eps) {
    check_sizes(data);
    const int n = static_cast<int>(data.values.size());
    if (n == 0) return 0.0;
    Matrix m = decayed_gram(data, kernel, eps);
    m.diagonal().array() += sigma * sigma;
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) {
        m.diagonal().array() += 1e-10;
        llt.compute(m);
        if (llt.info() != Eigen::Success)
            throw NumericalError("mll_grad_eps: Cholesky failed");
    }
    Vector y = Eigen::Map<const Vector>(data.values.data(), n);
    const Vector alpha = llt.solve(y);
    const Matrix inv = llt.solve(Matrix::Identity(n, n));

    // K o D', with D'_ij = -v (1-eps)^(v-1), v = |t_i - t_j|/2.
    Matrix kdp(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = 0.5 * std::abs(data.stamps[i] - data.stamps[j]);
            double dprime = 0.0;
            if (v != 0.0) dprime = -v * std::pow(1.0 - eps, v - 1.0);
            const double entry =
                eval_kernel(kernel, data.locations[i], data.locations[j]) * dprime;
            kdp(i, j) = entry;
            kdp(j, i) = entry;
        }
    const Matrix diff = alpha * alpha.transpose() - inv;
    return 0.5 * (diff.cwiseProduct(kdp)).sum();
}

double mll_grad_eps(const std::vector<TrainingSet>& days, const KernelSpec& kernel, double sigma,
                    double eps) {
    double total = 0.0;
    for (const auto& day : days) total += mll_grad_eps(day, kernel, sigma, eps);
    return total;
}

double fit_eps(const std::vector<TrainingSet>& days, const KernelSpec& kernel, double sigma,
               const GridSearch& search) {
    check_fit_inputs(days);
    if (search.resolution < 2) throw std::invalid_argument("fit_eps: grid resolution >= 2");
    double best_eps = 0.0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= search.resolution; ++i) {
        const double eps = static_cast<double>(i) / search.resolution;
        const double value = marginal_log_likelihood(days, kernel, sigma, eps);
        if (value > best_value) {
            best_value = value;
            best_eps = eps;
        }
    }
    return best_eps;
}

double fit_eps(const std::vector<TrainingSet>& days, const KernelSpec& kernel, double sigma,
               const AscentSearch& search) {
    check_fit_inputs(days);
    const double lo = 1e-6, hi = 1.0 - 1e-6;
    double eps = 0.1;
    double step = search.step;
    double value = marginal_log_likelihood(days, kernel, sigma, eps);
    for (int it = 0; it < search.max_iters; ++it) {
        const double grad = mll_grad_eps(days, kernel, sigma, eps);
        double next = std::clamp(eps + step * grad, lo, hi);
        double next_value = marginal_log_likelihood(days, kernel, sigma, next);
        // Backtrack until the ascent step actually improves.
        int shrink = 0;
        while (next_value < value && shrink++ < 30) {
            step *= 0.5;
            next = std::clamp(eps + step * grad, lo, hi);
            next_value = marginal_log_likelihood(days, kernel, sigma, next);
        }
        if (std::abs(next - eps) < search.tol) return next;
        eps = next;
        value = next_value;
    }
    return eps;
}

}  // namespace tvgp
