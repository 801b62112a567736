#pragma once

#include <stdexcept>
#include <vector>

#include "tvgp/kernel.hpp"

namespace tvgp {

/// Thrown when a Gram matrix cannot be factorized after the jitter ladder.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Observation {
    int time;  // 1-based step index
    Point location;
    double value;
};

struct ObservationHistory {
    std::vector<Observation> records;
    double noise_variance;
};

struct PosteriorSummary {
    double mean;
    double variance;
};

/// Cholesky of A + jitter*I, trying jitter in {0, 1e-10, 1e-8, 1e-6}.
/// Returns the lower factor; throws NumericalError if all attempts fail.
Matrix cholesky_with_jitter(const Matrix& a);

/// log det(A) from a lower Cholesky factor of A.
double log_det_from_cholesky(const Matrix& lower);

/// Time-invariant posterior at `query` given all observations.
PosteriorSummary ti_posterior(const ObservationHistory& history, const KernelSpec& kernel,
                              const Point& query);

/// Time-varying posterior at `query` for time t_last + lag, using the
/// Hadamard-decayed Gram and cross-covariance. lag = 1 is the bandit-loop
/// convention (predict one step past the final observation).
PosteriorSummary tv_posterior(const ObservationHistory& history, const KernelSpec& kernel,
                              double eps, const Point& query, int lag = 1);

/// Brute-force check of tv_posterior: builds the full joint Gaussian over
/// (y_1..y_t, f_{t+lag}(query)) from Cov[f_t(x) f_{t+j}(x')] = (1-eps)^(j/2) k(x,x')
/// and conditions via an LU solve. O(t^3), intended for small t.
PosteriorSummary joint_conditioning_oracle(const ObservationHistory& history,
                                           const KernelSpec& kernel, double eps,
                                           const Point& query, int lag = 1);

/// (1/2) log det(I + gram / noise_variance), via Cholesky. 0x0 -> 0.
double mutual_information(const Matrix& gram, double noise_variance);

/// Telescoped form: (1/2) sum_t log(1 + sigma^-2 var_{t-1}(x_t)), where
/// var_{t-1} is the time-varying posterior variance given the preceding
/// selections at times 1..t-1.
double mutual_information_telescoped(const KernelSpec& kernel, const std::vector<Point>& points,
                                     double eps, double noise_variance);

/// Greedy lower bound on gamma_T (gamma-tilde when eps > 0): at each step
/// pick the domain point of maximal posterior variance (ties -> lowest
/// index) and accumulate the telescoped information gain.
double greedy_gamma(const std::vector<Point>& domain, int horizon, const KernelSpec& kernel,
                    double eps, double noise_variance);

/// Grows a lower-triangular Cholesky factor one row/column at a time.
class IncrementalCholesky {
public:
    int size() const { return n_; }
    const Matrix& lower() const { return lower_; }

    /// Extend with cross-covariances `col` (length size()) and diagonal
    /// entry `diag`. A floor of 1e-10 is applied to the pivot before
    /// declaring failure.
    void extend(const Vector& col, double diag);

    /// Forward-solve L z = rhs over the current size.
    Vector solve_lower(const Vector& rhs) const;

    void reset();

private:
    int n_ = 0;
    Matrix lower_;  // capacity grows geometrically; top-left n_ x n_ is valid
};

/// Sequential bandit posterior over a fixed finite arm set. Maintains the
/// decayed Gram factor incrementally, so each step costs O(t * arms) for
/// the mean/variance of every arm. eps = 0 reproduces the time-invariant
/// update exactly; reset() gives the R-GP-UCB block behavior.
class SequentialPosterior {
public:
    SequentialPosterior(const KernelSpec& kernel, const std::vector<Point>& arms, double eps,
                        double noise_variance);

    int count() const { return count_; }

    /// Posterior mean and std at every arm for the next time step.
    void predict(Vector& means, Vector& stds) const;

    /// Record the observation taken at the current step at arm `arm`.
    void add_observation(int arm, double value);

    void reset();

    const Matrix& arm_gram() const { return arm_gram_; }

private:
    const std::vector<Point>* arms_;
    Matrix arm_gram_;
    double eps_;
    double noise_variance_;
    double decay_step_;  // (1-eps)^(1/2)

    int count_ = 0;
    IncrementalCholesky chol_;
    std::vector<int> selected_;
    std::vector<int> times_;
    Vector whitened_y_;   // L^-1 y
    Matrix whitened_x_;   // L^-1 C with C the decayed obs-to-arm cross matrix
};

}  // namespace tvgp
