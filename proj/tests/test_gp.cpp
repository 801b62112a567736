#include <doctest.h>

#include <cmath>
#include <random>

#include "tvgp/gp.hpp"

using namespace tvgp;

namespace {

Point pt(double x, double y) {
    Point p(2);
    p << x, y;
    return p;
}

ObservationHistory random_history(std::mt19937_64& rng, int n, double noise_variance) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal;
    ObservationHistory h{{}, noise_variance};
    for (int t = 1; t <= n; ++t) h.records.push_back({t, pt(unit(rng), unit(rng)), normal(rng)});
    return h;
}

}  // namespace

TEST_CASE("prior is returned on an empty history") {
    const KernelSpec k = SquaredExponential{0.2};
    const auto post = ti_posterior({{}, 0.01}, k, pt(0.3, 0.3));
    CHECK(post.mean == 0.0);
    CHECK(post.variance == doctest::Approx(1.0));
}

TEST_CASE("single observation at the query point, 1x1 hand formula") {
    const KernelSpec k = SquaredExponential{0.2};
    ObservationHistory h{{{1, pt(0.5, 0.5), 2.0}}, 0.01};
    const auto post = ti_posterior(h, k, pt(0.5, 0.5));
    CHECK(post.mean == doctest::Approx(2.0 / 1.01).epsilon(1e-12));
    CHECK(post.variance == doctest::Approx(1.0 - 1.0 / 1.01).epsilon(1e-10));
}

TEST_CASE("query far from all data reverts to the prior") {
    const KernelSpec k = SquaredExponential{0.05};
    std::mt19937_64 rng(3);
    const auto h = random_history(rng, 8, 0.01);
    const auto post = ti_posterior(h, k, pt(50.0, 50.0));
    CHECK(std::abs(post.mean) < 1e-6);
    CHECK(post.variance == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("tv posterior with eps=0 reduces to the time-invariant posterior") {
    const KernelSpec k = Matern{0.3, 2.5};
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 200; ++rep) {
        const auto h = random_history(rng, 1 + rep % 12, 0.05);
        const Point q = pt(0.5, 0.2);
        const auto a = tv_posterior(h, k, 0.0, q);
        const auto b = ti_posterior(h, k, q);
        CHECK(std::abs(a.mean - b.mean) <= 1e-12);
        CHECK(std::abs(a.variance - b.variance) <= 1e-12);
    }
}

TEST_CASE("tv posterior with eps=1 reverts to the prior") {
    const KernelSpec k = SquaredExponential{0.2};
    std::mt19937_64 rng(9);
    const auto h = random_history(rng, 6, 0.01);
    const auto post = tv_posterior(h, k, 1.0, pt(0.4, 0.4));
    CHECK(post.mean == 0.0);
    CHECK(post.variance == doctest::Approx(1.0));
}

TEST_CASE("tv posterior 1x1 hand value with eps=0.19") {
    const KernelSpec k = SquaredExponential{0.2};
    const double y1 = 1.7;
    ObservationHistory h{{{1, pt(0.5, 0.5), y1}}, 0.01};
    const auto post = tv_posterior(h, k, 0.19, pt(0.5, 0.5));
    CHECK(post.mean == doctest::Approx(0.9 * y1 / 1.01).epsilon(1e-12));
    CHECK(post.variance == doctest::Approx(1.0 - 0.81 / 1.01).epsilon(1e-10));
}

TEST_CASE("joint conditioning oracle agrees with the Hadamard update") {
    const KernelSpec k = SquaredExponential{0.2};
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> eps_dist(0.0, 0.3);
    for (int rep = 0; rep < 100; ++rep) {
        const auto h = random_history(rng, 1 + rep % 20, 0.01);
        const double eps = eps_dist(rng);
        const Point q = pt(0.3, 0.7);
        const auto fast = tv_posterior(h, k, eps, q);
        const auto slow = joint_conditioning_oracle(h, k, eps, q);
        CHECK(std::abs(fast.mean - slow.mean) <= 1e-8);
        CHECK(std::abs(fast.variance - slow.variance) <= 1e-8);
    }
}

TEST_CASE("posterior variance shrinks as observations accumulate (eps=0)") {
    const KernelSpec k = SquaredExponential{0.2};
    std::mt19937_64 rng(17);
    ObservationHistory h{{}, 0.01};
    const Point q = pt(0.5, 0.5);
    double prev = ti_posterior(h, k, q).variance;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int t = 1; t <= 15; ++t) {
        h.records.push_back({t, pt(unit(rng), unit(rng)), unit(rng)});
        const double var = ti_posterior(h, k, q).variance;
        CHECK(var <= prev + 1e-10);
        prev = var;
    }
}

TEST_CASE("mutual information closed forms") {
    CHECK(mutual_information(Matrix(0, 0), 0.01) == 0.0);
    Matrix one(1, 1);
    one << 1.0;
    CHECK(mutual_information(one, 0.01) == doctest::Approx(0.5 * std::log(101.0)));
}

TEST_CASE("determinant and telescoped mutual information agree") {
    const KernelSpec k = SquaredExponential{0.2};
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 30; ++rep) {
        const int n = 1 + rep % 10;
        const double eps = unit(rng) * 0.3;
        std::vector<Point> points;
        for (int i = 0; i < n; ++i) points.push_back(pt(unit(rng), unit(rng)));
        const Matrix gram = kernel_matrix(k, points).cwiseProduct(decay_matrix(n, eps));
        const double det_form = mutual_information(gram, 0.01);
        const double tel_form = mutual_information_telescoped(k, points, eps, 0.01);
        CHECK(det_form == doctest::Approx(tel_form).epsilon(1e-8));
    }
}

TEST_CASE("greedy gamma base cases") {
    const KernelSpec k = SquaredExponential{0.2};
    const std::vector<Point> domain = {pt(0.1, 0.1), pt(0.9, 0.9)};
    CHECK(greedy_gamma(domain, 1, k, 0.0, 0.01) ==
          doctest::Approx(0.5 * std::log(101.0)).epsilon(1e-12));

    // two identical points, T=2: the value is the MI of sampling one point twice
    const std::vector<Point> dup = {pt(0.5, 0.5), pt(0.5, 0.5)};
    Matrix gram(2, 2);
    gram.setOnes();
    CHECK(greedy_gamma(dup, 2, k, 0.0, 0.01) ==
          doctest::Approx(mutual_information(gram, 0.01)).epsilon(1e-8));
}

TEST_CASE("time variation increases the greedy information gain") {
    const KernelSpec k = SquaredExponential{0.2};
    std::vector<Point> domain;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) domain.push_back(pt(i / 4.0, j / 4.0));
    const double static_gamma = greedy_gamma(domain, 12, k, 0.0, 0.01);
    const double tv_gamma = greedy_gamma(domain, 12, k, 0.1, 0.01);
    CHECK(tv_gamma >= static_gamma);
}

TEST_CASE("sequential posterior matches the batch update step by step") {
    const KernelSpec k = SquaredExponential{0.2};
    std::vector<Point> arms;
    for (int i = 0; i < 6; ++i) arms.push_back(pt(i / 5.0, 0.3));
    std::mt19937_64 rng(29);
    std::normal_distribution<double> normal;
    for (const double eps : {0.0, 0.05, 0.4}) {
        SequentialPosterior seq(k, arms, eps, 0.01);
        ObservationHistory h{{}, 0.01};
        Vector means(6), stds(6);
        for (int t = 1; t <= 25; ++t) {
            seq.predict(means, stds);
            for (int a = 0; a < 6; ++a) {
                const auto ref = tv_posterior(h, k, eps, arms[a]);
                CHECK(means(a) == doctest::Approx(ref.mean).epsilon(1e-8));
                CHECK(stds(a) * stds(a) == doctest::Approx(ref.variance).epsilon(1e-7));
            }
            const int arm = t % 6;
            const double y = normal(rng);
            seq.add_observation(arm, y);
            h.records.push_back({t, arms[arm], y});
        }
    }
}

TEST_CASE("incremental cholesky extension matches a direct factorization") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> normal;
    Matrix a = Matrix::Zero(10, 10);
    Matrix b(10, 10);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) b(i, j) = normal(rng);
    a = b * b.transpose() + 0.5 * Matrix::Identity(10, 10);

    IncrementalCholesky inc;
    for (int n = 0; n < 10; ++n) inc.extend(a.col(n).head(n), a(n, n));
    const Matrix direct = cholesky_with_jitter(a);
    CHECK((inc.lower().topLeftCorner(10, 10) - direct).norm() < 1e-9);
}

TEST_CASE("numerical failure surfaces as NumericalError") {
    Matrix bad(2, 2);
    bad << 1.0, 5.0, 5.0, 1.0;  // indefinite beyond any ladder jitter
    CHECK_THROWS_AS(cholesky_with_jitter(bad), NumericalError);
}
