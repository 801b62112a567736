#pragma once

#include <string>
#include <vector>

namespace tvgp {

/// Per-(algorithm, t) aggregate of the average regret R_t / t.
struct ResultRow {
    std::string algorithm;
    int t;
    double mean_avg_regret;
    double std_avg_regret;
    int trials;
};

struct ResultTable {
    std::vector<ResultRow> rows;
};

/// Serialize with header `algorithm,t,mean_avg_regret,std_avg_regret,trials`,
/// rows sorted by (algorithm, t), values in %.9g.
std::string format_csv(const ResultTable& table);
void emit_csv(const ResultTable& table, const std::string& path);

/// Inverse of emit_csv; throws std::runtime_error on malformed input.
ResultTable parse_result_csv(const std::string& text);

}  // namespace tvgp
