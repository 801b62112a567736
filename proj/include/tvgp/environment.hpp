#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "tvgp/kernel.hpp"

namespace tvgp {

/// Equally spaced grid over [0, extent]^dim. resolution points per axis.
struct DomainGrid {
    int dim;
    std::vector<Point> points;
};

DomainGrid make_grid(int dim, int resolution, double extent = 1.0);

/// Index domain {0, ..., n-1} for an Empirical kernel.
DomainGrid make_index_domain(int n);

/// Hidden time-varying reward function on a finite domain, evolved by
/// f_{t+1} = sqrt(1-eps) f_t + sqrt(eps) g_{t+1} with g ~ GP(0, k).
class EnvState {
public:
    /// Draws f_1 from the prior. The grid Cholesky factor is computed once
    /// (jitter 1e-8) unless a precomputed shared factor is supplied.
    EnvState(DomainGrid grid, const KernelSpec& kernel, double eps_true, double noise_variance,
             std::uint64_t seed, std::shared_ptr<const Matrix> factor = nullptr);

    void evolve();

    /// Noisy sample of the current snapshot at one arm. Consumes exactly
    /// one normal draw per call regardless of the arm.
    double observe(int arm);

    double instantaneous_regret(int arm) const;

    int time() const { return time_; }
    const Vector& snapshot() const { return values_; }
    const DomainGrid& grid() const { return grid_; }
    int num_arms() const { return static_cast<int>(grid_.points.size()); }
    double noise_variance() const { return noise_variance_; }

    /// Shared factor for constructing many trials on the same grid/kernel.
    static std::shared_ptr<const Matrix> grid_factor(const KernelSpec& kernel,
                                                     const DomainGrid& grid);

private:
    Vector fresh_draw();

    DomainGrid grid_;
    double eps_true_;
    double noise_variance_;
    std::shared_ptr<const Matrix> factor_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_;
    Vector values_;
    int time_ = 1;
};

}  // namespace tvgp
