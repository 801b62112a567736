#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

namespace tvgp {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Squared exponential kernel, k(x,x') = exp(-||x-x'||^2 / (2 l^2)).
struct SquaredExponential {
    double lengthscale;
};

/// Matern kernel with lengthscale l and smoothness nu. Closed forms are
/// used at nu in {1/2, 3/2, 5/2}; the Bessel form otherwise.
struct Matern {
    double lengthscale;
    double nu;
};

/// Covariance matrix over a finite indexed domain. Points are 1-d index
/// values (0, 1, ..., n-1). Construct via make_empirical so the matrix is
/// symmetrized and rescaled.
struct Empirical {
    Matrix covariance;
};

using KernelSpec = std::variant<SquaredExponential, Matern, Empirical>;

/// Symmetrize (A + A^T)/2 and rescale so the max diagonal entry equals
/// signal_variance. Throws std::invalid_argument if the result is not PSD
/// within 1e-8 or has a non-positive diagonal entry.
Empirical make_empirical(const Matrix& raw, double signal_variance = 1.0);

/// k(x, x'). For Empirical, both points are treated as domain indices.
double eval_kernel(const KernelSpec& spec, const Point& x, const Point& y);

/// Gram matrix [k(x_i, x_j)] over a non-empty point sequence.
Matrix kernel_matrix(const KernelSpec& spec, const std::vector<Point>& points);

/// (1-eps)^(m/2), computed via expm1/log1p to avoid error accumulation.
double decay_pow(double eps, double half_exponent_numerator);

/// D_t with D[i][j] = (1-eps)^(|i-j|/2), size t x t.
Matrix decay_matrix(int t, double eps);

/// d_t with d[i] = (1-eps)^((t+1-i)/2), i = 1..t (0-based entry i-1).
Vector decay_vector(int t, double eps);

/// Helper for building a 1-d index point into an Empirical domain.
Point index_point(int i);

}  // namespace tvgp
