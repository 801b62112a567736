#include "tvgp/sensor_data.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tvgp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

}  // namespace

SensorDataset parse_sensor_csv(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line) || line.empty())
        throw std::runtime_error("sensor csv: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_commas(line);
    if (header.size() < 2) throw std::runtime_error("sensor csv: header has no sensor columns");

    SensorDataset ds;
    ds.sensor_ids.assign(header.begin() + 1, header.end());
    const std::size_t cols = ds.sensor_ids.size();

    std::vector<std::vector<double>> rows;
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_commas(line);
        if (fields.size() != cols + 1)
            throw std::runtime_error("sensor csv: ragged row '" + line + "'");
        ds.timestamps.push_back(fields[0]);
        std::vector<double> row(cols);
        for (std::size_t j = 0; j < cols; ++j) {
            const std::string& cell = fields[j + 1];
            if (cell.empty() || cell == "NA" || cell == "nan") {
                row[j] = kNaN;
                continue;
            }
            try {
                std::size_t pos = 0;
                row[j] = std::stod(cell, &pos);
                if (pos != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw std::runtime_error("sensor csv: unparseable numeric '" + cell + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    ds.readings.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j)
            ds.readings(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return ds;
}

SensorDataset ingest_sensor_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("sensor csv: cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_sensor_csv(buffer.str());
}

std::string format_sensor_csv(const SensorDataset& dataset) {
    std::string out = "timestamp";
    for (const auto& id : dataset.sensor_ids) out += "," + id;
    out += '\n';
    char buf[64];
    for (Eigen::Index i = 0; i < dataset.readings.rows(); ++i) {
        out += dataset.timestamps[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < dataset.readings.cols(); ++j) {
            const double v = dataset.readings(i, j);
            if (std::isnan(v)) {
                out += ",NA";
            } else {
                std::snprintf(buf, sizeof(buf), ",%.9g", v);
                out += buf;
            }
        }
        out += '\n';
    }
    return out;
}

SensorDataset select_sensors(const SensorDataset& dataset, const std::vector<int>& columns) {
    SensorDataset out;
    out.timestamps = dataset.timestamps;
    out.readings.resize(dataset.readings.rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t k = 0; k < columns.size(); ++k) {
        const int c = columns[k];
        if (c < 0 || c >= dataset.readings.cols())
            throw std::out_of_range("select_sensors: column out of range");
        out.sensor_ids.push_back(dataset.sensor_ids[static_cast<std::size_t>(c)]);
        out.readings.col(static_cast<Eigen::Index>(k)) = dataset.readings.col(c);
    }
    return out;
}

SensorDataset slice_rows(const SensorDataset& dataset, int begin, int end) {
    if (begin < 0 || end > dataset.readings.rows() || begin > end)
        throw std::out_of_range("slice_rows: bad range");
    SensorDataset out;
    out.sensor_ids = dataset.sensor_ids;
    out.timestamps.assign(dataset.timestamps.begin() + begin, dataset.timestamps.begin() + end);
    out.readings = dataset.readings.middleRows(begin, end - begin);
    return out;
}

Matrix sample_covariance(const SensorDataset& dataset, int* dropped_rows) {
    std::vector<Eigen::Index> complete;
    for (Eigen::Index i = 0; i < dataset.readings.rows(); ++i)
        if (!dataset.readings.row(i).hasNaN()) complete.push_back(i);
    if (dropped_rows)
        *dropped_rows = static_cast<int>(dataset.readings.rows()) -
                        static_cast<int>(complete.size());
    const Eigen::Index n = static_cast<Eigen::Index>(complete.size());
    if (n < 2) throw std::runtime_error("sample_covariance: need >= 2 complete rows");
    const Eigen::Index m = dataset.readings.cols();
    Matrix x(n, m);
    for (Eigen::Index i = 0; i < n; ++i) x.row(i) = dataset.readings.row(complete[i]);
    const Eigen::RowVectorXd mean = x.colwise().mean();
    x.rowwise() -= mean;
    return (x.transpose() * x) / static_cast<double>(n - 1);
}

KernelSpec empirical_covariance(const SensorDataset& training, int* dropped_rows) {
    Matrix cov = sample_covariance(training, dropped_rows);
    cov.diagonal().array() += 1e-8;
    return make_empirical(cov, 1.0);
}

}  // namespace tvgp
