#include "tvgp/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace tvgp {

namespace {

double se_eval(const SquaredExponential& k, double r) {
    return std::exp(-0.5 * r * r / (k.lengthscale * k.lengthscale));
}

double matern_eval(const Matern& k, double r) {
    if (k.lengthscale <= 0.0 || k.nu <= 0.0)
        throw std::invalid_argument("Matern: lengthscale and nu must be positive");
    if (r == 0.0) return 1.0;  // removable singularity of the Bessel form
    const double s = std::sqrt(2.0 * k.nu) * r / k.lengthscale;
    if (k.nu == 0.5) {
        return std::exp(-s);
    } else if (k.nu == 1.5) {
        return (1.0 + s) * std::exp(-s);
    } else if (k.nu == 2.5) {
        return (1.0 + s + s * s / 3.0) * std::exp(-s);
    }
    const double c = std::pow(2.0, 1.0 - k.nu) / std::tgamma(k.nu);
    return c * std::pow(s, k.nu) * std::cyl_bessel_k(k.nu, s);
}

int as_index(const Point& x, Eigen::Index n) {
    if (x.size() != 1)
        throw std::out_of_range("Empirical kernel expects 1-d index points");
    const int i = static_cast<int>(std::llround(x(0)));
    if (i < 0 || i >= n)
        throw std::out_of_range("Empirical kernel index out of range");
    return i;
}

}  // namespace

Empirical make_empirical(const Matrix& raw, double signal_variance) {
    if (raw.rows() != raw.cols() || raw.rows() == 0)
        throw std::invalid_argument("make_empirical: matrix must be square and non-empty");
    Matrix sym = 0.5 * (raw + raw.transpose());
    const double max_diag = sym.diagonal().maxCoeff();
    if (max_diag <= 0.0)
        throw std::invalid_argument("make_empirical: max diagonal entry must be positive");
    sym *= signal_variance / max_diag;
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8)
        throw std::invalid_argument("make_empirical: matrix is not PSD within tolerance");
    return Empirical{std::move(sym)};
}

double eval_kernel(const KernelSpec& spec, const Point& x, const Point& y) {
    return std::visit(
        [&](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, SquaredExponential>) {
                return se_eval(k, (x - y).norm());
            } else if constexpr (std::is_same_v<T, Matern>) {
                return matern_eval(k, (x - y).norm());
            } else {
                const int i = as_index(x, k.covariance.rows());
                const int j = as_index(y, k.covariance.rows());
                return k.covariance(i, j);
            }
        },
        spec);
}

Matrix kernel_matrix(const KernelSpec& spec, const std::vector<Point>& points) {
    if (points.empty())
        throw std::invalid_argument("kernel_matrix: empty point sequence");
    const Eigen::Index n = static_cast<Eigen::Index>(points.size());
    Matrix K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = eval_kernel(spec, points[i], points[j]);
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

double decay_pow(double eps, double half_exponent_numerator) {
    if (eps < 0.0 || eps > 1.0)
        throw std::invalid_argument("decay_pow: eps must lie in [0,1]");
    if (half_exponent_numerator == 0.0) return 1.0;
    if (eps == 0.0) return 1.0;
    if (eps == 1.0) return 0.0;
    return std::exp(0.5 * half_exponent_numerator * std::log1p(-eps));
}

Matrix decay_matrix(int t, double eps) {
    if (t < 1) throw std::invalid_argument("decay_matrix: t must be >= 1");
    Matrix D(t, t);
    for (int i = 0; i < t; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = decay_pow(eps, static_cast<double>(i - j));
            D(i, j) = v;
            D(j, i) = v;
        }
    return D;
}

Vector decay_vector(int t, double eps) {
    if (t < 1) throw std::invalid_argument("decay_vector: t must be >= 1");
    Vector d(t);
    for (int i = 1; i <= t; ++i)
        d(i - 1) = decay_pow(eps, static_cast<double>(t + 1 - i));
    return d;
}

Point index_point(int i) {
    Point p(1);
    p(0) = static_cast<double>(i);
    return p;
}

}  // namespace tvgp
