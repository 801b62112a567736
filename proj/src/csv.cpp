#include "tvgp/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tvgp {

namespace {

std::string fmt9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

std::string format_csv(const ResultTable& table) {
    std::vector<ResultRow> rows = table.rows;
    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return a.algorithm != b.algorithm ? a.algorithm < b.algorithm : a.t < b.t;
    });
    std::string out = "algorithm,t,mean_avg_regret,std_avg_regret,trials\n";
    for (const auto& r : rows) {
        out += r.algorithm;
        out += ',';
        out += std::to_string(r.t);
        out += ',';
        out += fmt9(r.mean_avg_regret);
        out += ',';
        out += fmt9(r.std_avg_regret);
        out += ',';
        out += std::to_string(r.trials);
        out += '\n';
    }
    return out;
}

void emit_csv(const ResultTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
    out << format_csv(table);
    if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

ResultTable parse_result_csv(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line) || line != "algorithm,t,mean_avg_regret,std_avg_regret,trials")
        throw std::runtime_error("parse_result_csv: missing or bad header");
    ResultTable table;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string field;
        ResultRow r;
        if (!std::getline(row, r.algorithm, ',')) throw std::runtime_error("bad row: " + line);
        if (!std::getline(row, field, ',')) throw std::runtime_error("bad row: " + line);
        r.t = std::stoi(field);
        if (!std::getline(row, field, ',')) throw std::runtime_error("bad row: " + line);
        r.mean_avg_regret = std::stod(field);
        if (!std::getline(row, field, ',')) throw std::runtime_error("bad row: " + line);
        r.std_avg_regret = std::stod(field);
        if (!std::getline(row, field, ',')) throw std::runtime_error("bad row: " + line);
        r.trials = std::stoi(field);
        table.rows.push_back(std::move(r));
    }
    return table;
}

}  // namespace tvgp
