#pragma once

#include <string>
#include <vector>

#include "tvgp/kernel.hpp"

namespace tvgp {

/// Rectangular panel of sensor readings: rows are time steps at a fixed
/// interval, columns are sensors. Missing readings are NaN.
struct SensorDataset {
    std::vector<std::string> sensor_ids;
    std::vector<std::string> timestamps;
    Matrix readings;
};

/// Parse `timestamp,ID1,ID2,...` CSV. Empty or `NA` cells become NaN.
/// Throws std::runtime_error with distinct messages for an empty file,
/// ragged rows and unparseable numerics.
SensorDataset ingest_sensor_csv(const std::string& path);
SensorDataset parse_sensor_csv(const std::string& text);
std::string format_sensor_csv(const SensorDataset& dataset);

/// Column subset by position.
SensorDataset select_sensors(const SensorDataset& dataset, const std::vector<int>& columns);

/// Row range [begin, end).
SensorDataset slice_rows(const SensorDataset& dataset, int begin, int end);

/// Sample covariance across time rows. Rows containing NaN are dropped
/// first; the count removed is written to dropped_rows when non-null.
/// Requires >= 2 complete rows.
Matrix sample_covariance(const SensorDataset& dataset, int* dropped_rows = nullptr);

/// Sample covariance -> symmetrized, jittered (1e-8), rescaled Empirical
/// kernel with unit max diagonal.
KernelSpec empirical_covariance(const SensorDataset& training, int* dropped_rows = nullptr);

}  // namespace tvgp
