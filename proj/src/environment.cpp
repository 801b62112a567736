#include "tvgp/environment.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "tvgp/gp.hpp"

namespace tvgp {

DomainGrid make_grid(int dim, int resolution, double extent) {
    if (dim < 1 || resolution < 1) throw std::invalid_argument("make_grid: bad dimensions");
    std::vector<Point> points;
    points.reserve(static_cast<std::size_t>(std::pow(resolution, dim)));
    const int total = static_cast<int>(std::llround(std::pow(resolution, dim)));
    for (int idx = 0; idx < total; ++idx) {
        Point p(dim);
        int rem = idx;
        for (int d = 0; d < dim; ++d) {
            const int i = rem % resolution;
            rem /= resolution;
            p(d) = resolution == 1 ? 0.0 : extent * i / (resolution - 1);
        }
        points.push_back(std::move(p));
    }
    return {dim, std::move(points)};
}

DomainGrid make_index_domain(int n) {
    if (n < 1) throw std::invalid_argument("make_index_domain: n must be >= 1");
    std::vector<Point> points;
    points.reserve(n);
    for (int i = 0; i < n; ++i) points.push_back(index_point(i));
    return {1, std::move(points)};
}

std::shared_ptr<const Matrix> EnvState::grid_factor(const KernelSpec& kernel,
                                                    const DomainGrid& grid) {
    Matrix k = kernel_matrix(kernel, grid.points);
    k.diagonal().array() += 1e-8;
    Eigen::LLT<Matrix> llt(k);
    if (llt.info() != Eigen::Success)
        throw NumericalError("EnvState: grid kernel matrix is not PSD after jitter");
    return std::make_shared<const Matrix>(llt.matrixL());
}

EnvState::EnvState(DomainGrid grid, const KernelSpec& kernel, double eps_true,
                   double noise_variance, std::uint64_t seed,
                   std::shared_ptr<const Matrix> factor)
    : grid_(std::move(grid)),
      eps_true_(eps_true),
      noise_variance_(noise_variance),
      factor_(factor ? std::move(factor) : grid_factor(kernel, grid_)),
      rng_(seed) {
    values_ = fresh_draw();
}

Vector EnvState::fresh_draw() {
    Vector z(factor_->rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal_(rng_);
    return factor_->triangularView<Eigen::Lower>() * z;
}

void EnvState::evolve() {
    // Exact at the endpoints: sqrt(1) = 1 and sqrt(0) * g = 0.
    values_ = std::sqrt(1.0 - eps_true_) * values_ + std::sqrt(eps_true_) * fresh_draw();
    ++time_;
}

double EnvState::observe(int arm) {
    if (arm < 0 || arm >= num_arms()) throw std::out_of_range("EnvState::observe: bad arm");
    const double z = normal_(rng_);
    return values_(arm) + std::sqrt(noise_variance_) * z;
}

double EnvState::instantaneous_regret(int arm) const {
    if (arm < 0 || arm >= num_arms())
        throw std::out_of_range("EnvState::instantaneous_regret: bad arm");
    return values_.maxCoeff() - values_(arm);
}

}  // namespace tvgp
