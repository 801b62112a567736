#include "tvgp/gp.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace tvgp {

namespace {

constexpr double kJitterLadder[] = {0.0, 1e-10, 1e-8, 1e-6};

/// Decayed Gram, cross vector and prior variance for a history predicting
/// at time t_last + lag.
struct TvSystem {
    Matrix gram;       // K o D + sigma^2 I
    Vector cross;      // k o d
    Vector y;
    double prior_var;  // k(query, query)
};

TvSystem build_tv_system(const ObservationHistory& history, const KernelSpec& kernel, double eps,
                         const Point& query, int lag) {
    const int n = static_cast<int>(history.records.size());
    TvSystem sys;
    sys.gram.resize(n, n);
    sys.cross.resize(n);
    sys.y.resize(n);
    const int t_pred = n > 0 ? history.records.back().time + lag : lag;
    for (int i = 0; i < n; ++i) {
        const auto& ri = history.records[i];
        sys.y(i) = ri.value;
        sys.cross(i) = eval_kernel(kernel, ri.location, query) *
                       decay_pow(eps, static_cast<double>(t_pred - ri.time));
        for (int j = 0; j <= i; ++j) {
            const auto& rj = history.records[j];
            const double v = eval_kernel(kernel, ri.location, rj.location) *
                             decay_pow(eps, static_cast<double>(std::abs(ri.time - rj.time)));
            sys.gram(i, j) = v;
            sys.gram(j, i) = v;
        }
    }
    sys.gram.diagonal().array() += history.noise_variance;
    sys.prior_var = eval_kernel(kernel, query, query);
    return sys;
}

PosteriorSummary solve_posterior(const TvSystem& sys) {
    if (sys.y.size() == 0) return {0.0, sys.prior_var};
    const Matrix lower = cholesky_with_jitter(sys.gram);
    const Vector u = lower.triangularView<Eigen::Lower>().solve(sys.y);
    const Vector w = lower.triangularView<Eigen::Lower>().solve(sys.cross);
    const double mean = w.dot(u);
    const double variance = std::max(0.0, sys.prior_var - w.squaredNorm());
    return {mean, variance};
}

}  // namespace

Matrix cholesky_with_jitter(const Matrix& a) {
    for (const double jitter : kJitterLadder) {
        Matrix m = a;
        m.diagonal().array() += jitter;
        Eigen::LLT<Matrix> llt(m);
        if (llt.info() == Eigen::Success) return llt.matrixL();
    }
    throw NumericalError("Cholesky failed after jitter ladder");
}

double log_det_from_cholesky(const Matrix& lower) {
    return 2.0 * lower.diagonal().array().log().sum();
}

PosteriorSummary ti_posterior(const ObservationHistory& history, const KernelSpec& kernel,
                              const Point& query) {
    return solve_posterior(build_tv_system(history, kernel, 0.0, query, 1));
}

PosteriorSummary tv_posterior(const ObservationHistory& history, const KernelSpec& kernel,
                              double eps, const Point& query, int lag) {
    return solve_posterior(build_tv_system(history, kernel, eps, query, lag));
}

PosteriorSummary joint_conditioning_oracle(const ObservationHistory& history,
                                           const KernelSpec& kernel, double eps,
                                           const Point& query, int lag) {
    const int n = static_cast<int>(history.records.size());
    const double prior_var = eval_kernel(kernel, query, query);
    if (n == 0) return {0.0, prior_var};
    const int t_pred = history.records.back().time + lag;

    // Joint covariance of (f_{t_1}(x_1), ..., f_{t_n}(x_n), f_{t_pred}(query)).
    Matrix joint(n + 1, n + 1);
    auto loc = [&](int i) -> const Point& {
        return i < n ? history.records[i].location : query;
    };
    auto time_of = [&](int i) { return i < n ? history.records[i].time : t_pred; };
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = eval_kernel(kernel, loc(i), loc(j)) *
                             decay_pow(eps, static_cast<double>(std::abs(time_of(i) - time_of(j))));
            joint(i, j) = v;
            joint(j, i) = v;
        }

    Matrix obs_cov = joint.topLeftCorner(n, n);
    obs_cov.diagonal().array() += history.noise_variance;
    Vector y(n);
    for (int i = 0; i < n; ++i) y(i) = history.records[i].value;

    Eigen::FullPivLU<Matrix> lu(obs_cov);
    const Vector alpha = lu.solve(y);
    const Vector cross = joint.topRightCorner(n, 1);
    const double mean = cross.dot(alpha);
    const double variance = std::max(0.0, joint(n, n) - cross.dot(lu.solve(cross)));
    return {mean, variance};
}

double mutual_information(const Matrix& gram, double noise_variance) {
    if (gram.rows() == 0) return 0.0;
    Matrix m = gram / noise_variance;
    m.diagonal().array() += 1.0;
    return 0.5 * log_det_from_cholesky(cholesky_with_jitter(m));
}

double mutual_information_telescoped(const KernelSpec& kernel, const std::vector<Point>& points,
                                     double eps, double noise_variance) {
    ObservationHistory history{{}, noise_variance};
    double total = 0.0;
    int t = 1;
    for (const auto& p : points) {
        const auto post = tv_posterior(history, kernel, eps, p, 1);
        total += 0.5 * std::log1p(post.variance / noise_variance);
        history.records.push_back({t++, p, 0.0});
    }
    return total;
}

double greedy_gamma(const std::vector<Point>& domain, int horizon, const KernelSpec& kernel,
                    double eps, double noise_variance) {
    if (domain.empty()) throw std::invalid_argument("greedy_gamma: empty domain");
    SequentialPosterior posterior(kernel, domain, eps, noise_variance);
    Vector means(static_cast<Eigen::Index>(domain.size()));
    Vector stds(static_cast<Eigen::Index>(domain.size()));
    double total = 0.0;
    for (int t = 0; t < horizon; ++t) {
        posterior.predict(means, stds);
        Eigen::Index best = 0;
        stds.maxCoeff(&best);
        const double var = stds(best) * stds(best);
        total += 0.5 * std::log1p(var / noise_variance);
        posterior.add_observation(static_cast<int>(best), 0.0);
    }
    return total;
}

void IncrementalCholesky::extend(const Vector& col, double diag) {
    if (col.size() != n_) throw std::invalid_argument("IncrementalCholesky: bad column size");
    if (lower_.rows() <= n_) {
        const int cap = std::max(16, 2 * n_);
        Matrix grown = Matrix::Zero(cap, cap);
        grown.topLeftCorner(n_, n_) = lower_.topLeftCorner(n_, n_);
        lower_ = std::move(grown);
    }
    Vector l12(n_);
    if (n_ > 0)
        l12 = lower_.topLeftCorner(n_, n_).triangularView<Eigen::Lower>().solve(col);
    double pivot2 = diag - l12.squaredNorm();
    if (pivot2 < 1e-10) pivot2 = 1e-10;
    lower_.block(n_, 0, 1, n_) = l12.transpose();
    lower_(n_, n_) = std::sqrt(pivot2);
    ++n_;
}

Vector IncrementalCholesky::solve_lower(const Vector& rhs) const {
    return lower_.topLeftCorner(n_, n_).triangularView<Eigen::Lower>().solve(rhs);
}

void IncrementalCholesky::reset() { n_ = 0; }

SequentialPosterior::SequentialPosterior(const KernelSpec& kernel, const std::vector<Point>& arms,
                                         double eps, double noise_variance)
    : arms_(&arms),
      arm_gram_(kernel_matrix(kernel, arms)),
      eps_(eps),
      noise_variance_(noise_variance),
      decay_step_(decay_pow(eps, 1.0)) {
    whitened_x_.resize(0, arm_gram_.rows());
}

void SequentialPosterior::predict(Vector& means, Vector& stds) const {
    const Eigen::Index m = arm_gram_.rows();
    if (count_ == 0) {
        means = Vector::Zero(m);
        stds = arm_gram_.diagonal().cwiseMax(0.0).cwiseSqrt();
        return;
    }
    means.noalias() = whitened_x_.topRows(count_).transpose() * whitened_y_.head(count_);
    stds = (arm_gram_.diagonal() - whitened_x_.topRows(count_).colwise().squaredNorm().transpose())
               .cwiseMax(0.0)
               .cwiseSqrt();
}

void SequentialPosterior::add_observation(int arm, double value) {
    const Eigen::Index m = arm_gram_.rows();
    if (arm < 0 || arm >= m) throw std::out_of_range("SequentialPosterior: arm out of range");
    const int t_new = count_ + 1;

    // New Gram column: decayed covariances between the new sample and the
    // previous ones. These coincide with the current prediction-time cross
    // entries, since both use exponent (t_new - t_i)/2.
    Vector col(count_);
    for (int i = 0; i < count_; ++i)
        col(i) = arm_gram_(selected_[i], arm) *
                 decay_pow(eps_, static_cast<double>(t_new - times_[i]));
    chol_.extend(col, arm_gram_(arm, arm) + noise_variance_);
    const Vector l12 = chol_.lower().row(count_).head(count_).transpose();
    const double l22 = chol_.lower()(count_, count_);

    if (whitened_y_.size() < t_new) {
        Vector grown = Vector::Zero(std::max<Eigen::Index>(16, 2 * t_new));
        grown.head(count_) = whitened_y_.head(count_);
        whitened_y_ = std::move(grown);
    }
    whitened_y_(count_) = (value - l12.dot(whitened_y_.head(count_))) / l22;

    if (whitened_x_.rows() < t_new) {
        Matrix grown = Matrix::Zero(std::max<Eigen::Index>(16, 2 * t_new), m);
        grown.topRows(count_) = whitened_x_.topRows(count_);
        whitened_x_ = std::move(grown);
    }
    // Advancing the prediction time multiplies every stored cross entry by
    // (1-eps)^(1/2); the factor rows above are unaffected.
    whitened_x_.topRows(count_) *= decay_step_;
    whitened_x_.row(count_) =
        (arm_gram_.row(arm) * decay_step_ - l12.transpose() * whitened_x_.topRows(count_)) / l22;

    selected_.push_back(arm);
    times_.push_back(t_new);
    ++count_;
}

void SequentialPosterior::reset() {
    count_ = 0;
    chol_.reset();
    selected_.clear();
    times_.clear();
}

}  // namespace tvgp
