#include "tvgp/config.hpp"

#include <fstream>
#include <sstream>

namespace tvgp {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for '" + key + "': " + value);
    }
}

long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for '" + key + "': " + value);
    }
}

}  // namespace

PolicySpec parse_policy(const std::string& token) {
    PolicySpec spec;
    std::string head = token;
    std::string arg;
    if (const auto colon = token.find(':'); colon != std::string::npos) {
        head = token.substr(0, colon);
        arg = token.substr(colon + 1);
    }
    spec.name = token;
    if (head == "gpucb") {
        spec.kind = PolicyKind::GpUcb;
    } else if (head == "rgpucb") {
        spec.kind = PolicyKind::RGpUcb;
        spec.block_length = arg.empty() ? 0 : static_cast<int>(parse_int(token, arg));
    } else if (head == "tvgpucb") {
        spec.kind = PolicyKind::TvGpUcb;
        if (!arg.empty()) {
            spec.assumed_eps = parse_double(token, arg);
            spec.assumed_eps_set = true;
        }
    } else if (head == "random") {
        spec.kind = PolicyKind::Random;
    } else {
        throw ConfigError("config: unknown policy '" + token + "'");
    }
    return spec;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "mode") {
            cfg.mode = value;
        } else if (key == "grid.dim") {
            cfg.grid_dim = static_cast<int>(parse_int(key, value));
        } else if (key == "grid.resolution") {
            cfg.grid_resolution = static_cast<int>(parse_int(key, value));
        } else if (key == "grid.extent") {
            cfg.grid_extent = parse_double(key, value);
        } else if (key == "kernel") {
            if (value != "se" && value != "matern" && value != "empirical")
                throw ConfigError("config: unknown kernel '" + value + "'");
            cfg.kernel = value;
        } else if (key == "lengthscale") {
            cfg.lengthscale = parse_double(key, value);
        } else if (key == "nu") {
            cfg.nu = parse_double(key, value);
        } else if (key == "eps_true") {
            cfg.eps_true = parse_double(key, value);
        } else if (key == "sigma2") {
            cfg.sigma2 = parse_double(key, value);
        } else if (key == "T") {
            cfg.horizon = static_cast<int>(parse_int(key, value));
        } else if (key == "trials") {
            cfg.trials = static_cast<int>(parse_int(key, value));
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
        } else if (key == "threads") {
            cfg.threads = static_cast<int>(parse_int(key, value));
        } else if (key == "out") {
            cfg.out = value;
        } else if (key == "beta.c1") {
            cfg.beta_c1 = parse_double(key, value);
        } else if (key == "beta.c2") {
            cfg.beta_c2 = parse_double(key, value);
        } else if (key == "algorithms") {
            cfg.policies.clear();
            for (const auto& token : split_list(value)) cfg.policies.push_back(parse_policy(token));
        } else if (key == "data") {
            cfg.data_path = value;
        } else if (key == "train_rows") {
            cfg.train_rows = static_cast<int>(parse_int(key, value));
        } else if (key == "assumed_eps") {
            cfg.real_assumed_eps = parse_double(key, value);
        } else if (key == "sensor_subset") {
            cfg.sensor_subset.clear();
            if (value == "traffic-preset") {
                cfg.sensor_subset = traffic_sensor_preset();
            } else {
                for (const auto& token : split_list(value))
                    cfg.sensor_subset.push_back(static_cast<int>(parse_int(key, token)));
            }
        } else {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    if (cfg.trials < 1) throw ConfigError("config: trials must be >= 1");
    if (cfg.horizon < 1) throw ConfigError("config: T must be >= 1");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

const std::vector<int>& traffic_sensor_preset() {
    static const std::vector<int> ids = {
        0,   54,  69,  77,  169, 131, 262, 216, 34,  320, 308, 177, 130, 221, 290, 348, 25,
        157, 252, 83,  163, 149, 294, 21,  246, 45,  98,  74,  274, 237, 322, 29,  120, 44,
        49,  241, 286, 99,  247, 297, 96,  234, 236, 205, 329, 214, 28,  175, 65,  220};
    return ids;
}

}  // namespace tvgp
