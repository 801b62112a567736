#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "tvgp/experiment.hpp"

using namespace tvgp;

TEST_CASE("config parsing covers every key") {
    const std::string text = R"(
# synthetic sweep
mode = synthetic
grid.dim = 2
grid.resolution = 10
grid.extent = 1.0
kernel = matern
lengthscale = 0.25
nu = 1.5
eps_true = 0.02
sigma2 = 0.05
T = 80
trials = 7
seed = 99
threads = 2
out = sweep.csv
beta.c1 = 0.7
beta.c2 = 3.0
algorithms = gpucb, rgpucb:15, tvgpucb:0.03, random
)";
    const auto cfg = parse_config_text(text);
    CHECK(cfg.mode == "synthetic");
    CHECK(cfg.grid_resolution == 10);
    CHECK(cfg.kernel == "matern");
    CHECK(cfg.nu == 1.5);
    CHECK(cfg.eps_true == 0.02);
    CHECK(cfg.sigma2 == 0.05);
    CHECK(cfg.horizon == 80);
    CHECK(cfg.trials == 7);
    CHECK(cfg.seed == 99);
    CHECK(cfg.out == "sweep.csv");
    CHECK(cfg.beta_c1 == 0.7);
    REQUIRE(cfg.policies.size() == 4);
    CHECK(cfg.policies[0].kind == PolicyKind::GpUcb);
    CHECK(cfg.policies[1].kind == PolicyKind::RGpUcb);
    CHECK(cfg.policies[1].block_length == 15);
    CHECK(cfg.policies[2].kind == PolicyKind::TvGpUcb);
    CHECK(cfg.policies[2].assumed_eps == 0.03);
    CHECK(cfg.policies[2].assumed_eps_set);
    CHECK(cfg.policies[3].kind == PolicyKind::Random);

    CHECK_THROWS_AS(parse_config_text("bogus_key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("T = banana\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("algorithms = warpdrive\n"), ConfigError);
}

TEST_CASE("policy resolution fills defaults from the experiment") {
    ExperimentConfig cfg;
    cfg.eps_true = 0.04;
    cfg.horizon = 500;
    cfg.kernel = "se";

    const auto tv = resolve_policy(parse_policy("tvgpucb"), cfg);
    CHECK(tv.assumed_eps == 0.04);
    const auto tv_explicit = resolve_policy(parse_policy("tvgpucb:0.2"), cfg);
    CHECK(tv_explicit.assumed_eps == 0.2);

    const auto reset = resolve_policy(parse_policy("rgpucb"), cfg);
    CHECK(reset.block_length == block_size_se(0.04, 500));
    const auto reset_explicit = resolve_policy(parse_policy("rgpucb:9"), cfg);
    CHECK(reset_explicit.block_length == 9);
}

TEST_CASE("result CSV golden format and round trip") {
    ResultTable table;
    table.rows = {{"tvgpucb", 2, 0.25, 0.0625, 10},
                  {"gpucb", 1, 0.5, 0.125, 10},
                  {"gpucb", 2, 0.333333333333, 0.1, 10}};
    const std::string text = format_csv(table);
    CHECK(text ==
          "algorithm,t,mean_avg_regret,std_avg_regret,trials\n"
          "gpucb,1,0.5,0.125,10\n"
          "gpucb,2,0.333333333,0.1,10\n"
          "tvgpucb,2,0.25,0.0625,10\n");

    const auto parsed = parse_result_csv(text);
    REQUIRE(parsed.rows.size() == 3);
    CHECK(parsed.rows[0].algorithm == "gpucb");
    CHECK(parsed.rows[2].mean_avg_regret == 0.25);
    CHECK(format_csv(parsed) == text);

    CHECK_THROWS_AS(parse_result_csv("wrong,header\n1,2\n"), std::runtime_error);
}

TEST_CASE("sensor CSV ingestion and failure modes") {
    const std::string good =
        "timestamp,s1,s2,s3\n"
        "00:00,60.5,58.0,61.2\n"
        "00:05,NA,57.1,60.0\n"
        "00:10,59.9,,59.5\n";
    const auto data = parse_sensor_csv(good);
    REQUIRE(data.sensor_ids.size() == 3);
    REQUIRE(data.readings.rows() == 3);
    CHECK(data.readings(0, 0) == 60.5);
    CHECK(std::isnan(data.readings(1, 0)));
    CHECK(std::isnan(data.readings(2, 1)));
    CHECK(parse_sensor_csv(format_sensor_csv(data)).readings(0, 2) == 61.2);

    CHECK_THROWS_WITH_AS(parse_sensor_csv(""), doctest::Contains("empty"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_sensor_csv("timestamp,s1,s2\n00:00,1.0\n"),
                         doctest::Contains("ragged"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_sensor_csv("timestamp,s1\n00:00,fast\n"),
                         doctest::Contains("numeric"), std::runtime_error);
}

TEST_CASE("sensor selection and slicing") {
    const std::string text =
        "timestamp,a,b,c\n"
        "t0,1,2,3\n"
        "t1,4,5,6\n"
        "t2,7,8,9\n";
    const auto data = parse_sensor_csv(text);
    const auto cols = select_sensors(data, {2, 0});
    REQUIRE(cols.sensor_ids.size() == 2);
    CHECK(cols.sensor_ids[0] == "c");
    CHECK(cols.readings(1, 0) == 6.0);
    const auto rows = slice_rows(data, 1, 3);
    REQUIRE(rows.readings.rows() == 2);
    CHECK(rows.timestamps[0] == "t1");
    CHECK(rows.readings(0, 2) == 6.0);
}

TEST_CASE("sample covariance drops incomplete rows and matches a hand case") {
    const std::string text =
        "timestamp,a,b\n"
        "t0,1,2\n"
        "t1,3,6\n"
        "t2,NA,4\n"
        "t3,5,10\n";
    const auto data = parse_sensor_csv(text);
    int dropped = 0;
    const Matrix cov = sample_covariance(data, &dropped);
    CHECK(dropped == 1);
    // complete rows a = (1,3,5), b = (2,6,10): var(a)=4, var(b)=16, cov=8
    CHECK(cov(0, 0) == doctest::Approx(4.0));
    CHECK(cov(1, 1) == doctest::Approx(16.0));
    CHECK(cov(0, 1) == doctest::Approx(8.0));

    CHECK_THROWS_AS(sample_covariance(parse_sensor_csv("timestamp,a\nt0,1\n")),
                    std::runtime_error);
}

TEST_CASE("empirical covariance of an iid panel is near the identity") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> normal;
    SensorDataset panel;
    const int n = 4, rows = 4000;
    for (int j = 0; j < n; ++j) panel.sensor_ids.push_back("s" + std::to_string(j));
    panel.readings.resize(rows, n);
    for (int i = 0; i < rows; ++i) {
        panel.timestamps.push_back("t" + std::to_string(i));
        for (int j = 0; j < n; ++j) panel.readings(i, j) = normal(rng);
    }
    const KernelSpec spec = empirical_covariance(panel);
    const auto& emp = std::get<Empirical>(spec);
    REQUIRE(emp.covariance.rows() == n);
    CHECK(emp.covariance.diagonal().maxCoeff() == doctest::Approx(1.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) CHECK(std::abs(emp.covariance(i, j)) < 0.1);
}

TEST_CASE("synthetic run aggregates sensibly and beats random") {
    ExperimentConfig cfg;
    cfg.grid_resolution = 4;
    cfg.eps_true = 0.03;
    cfg.horizon = 60;
    cfg.trials = 12;
    cfg.seed = 7;
    cfg.threads = 1;
    cfg.policies = {parse_policy("tvgpucb"), parse_policy("random")};
    const auto table = run_synthetic(cfg);
    REQUIRE(table.rows.size() == 2u * 60u);

    double tv_final = -1.0, random_final = -1.0;
    for (const auto& row : table.rows) {
        CHECK(row.trials == 12);
        CHECK(row.mean_avg_regret >= 0.0);
        CHECK(row.std_avg_regret >= 0.0);
        if (row.t == 60) {
            if (row.algorithm == "tvgpucb") tv_final = row.mean_avg_regret;
            if (row.algorithm == "random") random_final = row.mean_avg_regret;
        }
    }
    REQUIRE(tv_final >= 0.0);
    REQUIRE(random_final >= 0.0);
    CHECK(tv_final * 2.0 < random_final);
}

TEST_CASE("synthetic results do not depend on the thread count") {
    ExperimentConfig cfg;
    cfg.grid_resolution = 4;
    cfg.eps_true = 0.05;
    cfg.horizon = 30;
    cfg.trials = 8;
    cfg.seed = 21;
    cfg.policies = {parse_policy("gpucb"), parse_policy("tvgpucb")};
    cfg.threads = 1;
    const std::string serial = format_csv(run_synthetic(cfg));
    cfg.threads = 4;
    const std::string parallel = format_csv(run_synthetic(cfg));
    CHECK(serial == parallel);
}

TEST_CASE("environment path hash is reproducible and trial-dependent") {
    ExperimentConfig cfg;
    cfg.grid_resolution = 4;
    cfg.eps_true = 0.05;
    cfg.seed = 33;
    CHECK(hash_env_path(cfg, 0, 20) == hash_env_path(cfg, 0, 20));
    CHECK(hash_env_path(cfg, 0, 20) != hash_env_path(cfg, 1, 20));
}

TEST_CASE("real-data run on a synthetic panel prefers tracking policies") {
    // Build a slowly drifting panel from the generative model so the
    // empirical kernel and fitted eps are meaningful.
    std::mt19937_64 rng(83);
    std::normal_distribution<double> normal;
    const int sensors = 6, rows = 220;
    const double eps_true = 0.05;
    SensorDataset panel;
    for (int j = 0; j < sensors; ++j) panel.sensor_ids.push_back("s" + std::to_string(j));
    panel.readings.resize(rows, sensors);
    Vector f(sensors);
    for (int j = 0; j < sensors; ++j) f(j) = normal(rng);
    for (int i = 0; i < rows; ++i) {
        panel.timestamps.push_back("t" + std::to_string(i));
        for (int j = 0; j < sensors; ++j) panel.readings(i, j) = f(j);
        Vector g(sensors);
        for (int j = 0; j < sensors; ++j) g(j) = normal(rng);
        f = std::sqrt(1.0 - eps_true) * f + std::sqrt(eps_true) * g;
    }

    ExperimentConfig cfg;
    cfg.mode = "real";
    cfg.kernel = "empirical";
    cfg.sigma2 = 0.01;
    cfg.trials = 6;
    cfg.seed = 11;
    cfg.threads = 1;
    cfg.train_rows = 100;
    cfg.horizon = rows - cfg.train_rows;
    cfg.real_assumed_eps = eps_true;
    cfg.policies = {parse_policy("tvgpucb"), parse_policy("random")};
    const auto table = run_real(cfg, panel);
    const int test_steps = rows - cfg.train_rows;
    REQUIRE(static_cast<int>(table.rows.size()) == 2 * test_steps);
    double tv_final = -1.0, random_final = -1.0;
    for (const auto& row : table.rows)
        if (row.t == test_steps) {
            if (row.algorithm == "tvgpucb") tv_final = row.mean_avg_regret;
            if (row.algorithm == "random") random_final = row.mean_avg_regret;
        }
    REQUIRE(tv_final >= 0.0);
    CHECK(tv_final * 2.0 < random_final);

    CHECK(real_oracle_regret(slice_rows(panel, cfg.train_rows, rows)) == 0.0);
}

TEST_CASE("eps fitted from a drifting panel is in the right regime") {
    std::mt19937_64 rng(89);
    std::normal_distribution<double> normal;
    const int sensors = 5, rows = 96;
    const double eps_true = 0.1;
    SensorDataset panel;
    for (int j = 0; j < sensors; ++j) panel.sensor_ids.push_back("s" + std::to_string(j));
    panel.readings.resize(rows, sensors);
    Vector f(sensors);
    for (int j = 0; j < sensors; ++j) f(j) = normal(rng);
    for (int i = 0; i < rows; ++i) {
        panel.timestamps.push_back("t" + std::to_string(i));
        for (int j = 0; j < sensors; ++j) panel.readings(i, j) = f(j) + 0.05 * normal(rng);
        Vector g(sensors);
        for (int j = 0; j < sensors; ++j) g(j) = normal(rng);
        f = std::sqrt(1.0 - eps_true) * f + std::sqrt(eps_true) * g;
    }
    const double fitted = fit_eps_from_panel(panel, 0.05);
    CHECK(fitted > 0.01);
    CHECK(fitted < 0.5);
}

TEST_CASE("default sensor preset has fifty distinct entries") {
    const auto& preset = traffic_sensor_preset();
    REQUIRE(preset.size() == 50);
    for (std::size_t i = 0; i < preset.size(); ++i)
        for (std::size_t j = i + 1; j < preset.size(); ++j) CHECK(preset[i] != preset[j]);
}
