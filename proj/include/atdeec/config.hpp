#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "atdeec/sim_engine.hpp"

namespace atdeec {

// Flat key=value configuration surface. Every key here is also a CLI flag
// of the same name; flags override file values, file values override the
// built-in defaults.
//
//   field_side=100            m
//   node_count=100
//   bs_x=50                   m (defaults to field_side/2)
//   bs_y=50                   m (defaults to field_side/2)
//   exclusion_radius=20       m, must satisfy R < field_side/sqrt(pi)
//   base_energy=0.5           J
//   advanced_fraction=0.4
//   advanced_factor=2
//   packet_bits=4000
//   max_rounds=8000
//   rng_seed=1
//   e_elec=50e-9              J/bit
//   e_da=5e-12                J/bit/signal
//   eps_fs=10e-12             J/bit/m^2
//   eps_mp=1.3e-15            J/bit/m^4
//   average_energy_mode=true  true | estimate
//   charge_excluded_aggregation=true
//   threshold_copt_factor=false

// Key order used when mirroring the config surface onto CLI flags.
inline const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "field_side",      "node_count",       "bs_x",
        "bs_y",            "exclusion_radius", "base_energy",
        "advanced_fraction", "advanced_factor", "packet_bits",
        "max_rounds",      "rng_seed",         "e_elec",
        "e_da",            "eps_fs",           "eps_mp",
        "average_energy_mode", "charge_excluded_aggregation", "threshold_copt_factor"};
    return keys;
}

inline bool parse_bool(const std::string& raw, const std::string& key) {
    if (raw == "true" || raw == "1" || raw == "on" || raw == "yes") return true;
    if (raw == "false" || raw == "0" || raw == "off" || raw == "no") return false;
    throw std::invalid_argument("invalid boolean for " + key + ": " + raw);
}

inline double parse_double(const std::string& raw, const std::string& key) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(raw, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid number for " + key + ": " + raw);
    }
    if (used != raw.size())
        throw std::invalid_argument("invalid number for " + key + ": " + raw);
    return value;
}

inline long long parse_integer(const std::string& raw, const std::string& key) {
    std::size_t used = 0;
    long long value = 0;
    try {
        value = std::stoll(raw, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid integer for " + key + ": " + raw);
    }
    if (used != raw.size())
        throw std::invalid_argument("invalid integer for " + key + ": " + raw);
    return value;
}

// Assign one key=value pair onto a config. Unknown keys are rejected so
// typos in config files fail loudly.
inline void apply_config_key(Config& cfg, const std::string& key, const std::string& value) {
    NetworkConfig& net = cfg.network;
    if (key == "field_side") net.field_side = parse_double(value, key);
    else if (key == "node_count") net.node_count = static_cast<int>(parse_integer(value, key));
    else if (key == "bs_x") net.bs_x = parse_double(value, key);
    else if (key == "bs_y") net.bs_y = parse_double(value, key);
    else if (key == "exclusion_radius") net.exclusion_radius = parse_double(value, key);
    else if (key == "base_energy") net.base_energy = parse_double(value, key);
    else if (key == "advanced_fraction") net.advanced_fraction = parse_double(value, key);
    else if (key == "advanced_factor") net.advanced_factor = parse_double(value, key);
    else if (key == "packet_bits") net.packet_bits = parse_double(value, key);
    else if (key == "max_rounds") net.max_rounds = static_cast<int>(parse_integer(value, key));
    else if (key == "rng_seed")
        net.rng_seed = static_cast<std::uint64_t>(parse_integer(value, key));
    else if (key == "e_elec") cfg.radio.e_elec = parse_double(value, key);
    else if (key == "e_da") cfg.radio.e_da = parse_double(value, key);
    else if (key == "eps_fs") cfg.radio.eps_fs = parse_double(value, key);
    else if (key == "eps_mp") cfg.radio.eps_mp = parse_double(value, key);
    else if (key == "average_energy_mode") {
        if (value == "true" || value == "true_mean" || value == "mean")
            cfg.sim.average_energy_mode = AverageEnergyMode::true_mean;
        else if (value == "estimate")
            cfg.sim.average_energy_mode = AverageEnergyMode::estimate;
        else
            throw std::invalid_argument("average_energy_mode must be 'true' or 'estimate'");
    } else if (key == "charge_excluded_aggregation")
        cfg.sim.charge_excluded_aggregation = parse_bool(value, key);
    else if (key == "threshold_copt_factor")
        cfg.sim.threshold_copt_factor = parse_bool(value, key);
    else
        throw std::invalid_argument("unknown config key: " + key);
}

inline std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

// Parse key=value lines from a stream. '#' starts a comment; blank lines
// are skipped. Returns the keys that were set.
inline std::vector<std::string> load_config_stream(Config& cfg, std::istream& in) {
    std::vector<std::string> keys;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        " is not key=value: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        apply_config_key(cfg, key, value);
        keys.push_back(key);
    }
    return keys;
}

inline std::vector<std::string> load_config_file(Config& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    return load_config_stream(cfg, in);
}

// Flat key -> value snapshot of a config, used for run-output echoes.
inline std::map<std::string, std::string> config_echo(const Config& cfg) {
    Config resolved = cfg;
    resolved.network.finalize();
    const NetworkConfig& net = resolved.network;
    auto num = [](double v) {
        std::ostringstream os;
        os.precision(17);
        os << v;
        return os.str();
    };
    std::map<std::string, std::string> kv;
    kv["field_side"] = num(net.field_side);
    kv["node_count"] = std::to_string(net.node_count);
    kv["bs_x"] = num(net.bs_x);
    kv["bs_y"] = num(net.bs_y);
    kv["exclusion_radius"] = num(net.exclusion_radius);
    kv["base_energy"] = num(net.base_energy);
    kv["advanced_fraction"] = num(net.advanced_fraction);
    kv["advanced_factor"] = num(net.advanced_factor);
    kv["packet_bits"] = num(net.packet_bits);
    kv["max_rounds"] = std::to_string(net.max_rounds);
    kv["rng_seed"] = std::to_string(net.rng_seed);
    kv["e_elec"] = num(resolved.radio.e_elec);
    kv["e_da"] = num(resolved.radio.e_da);
    kv["eps_fs"] = num(resolved.radio.eps_fs);
    kv["eps_mp"] = num(resolved.radio.eps_mp);
    kv["average_energy_mode"] =
        resolved.sim.average_energy_mode == AverageEnergyMode::true_mean ? "true" : "estimate";
    kv["charge_excluded_aggregation"] =
        resolved.sim.charge_excluded_aggregation ? "true" : "false";
    kv["threshold_copt_factor"] = resolved.sim.threshold_copt_factor ? "true" : "false";
    return kv;
}

}  // namespace atdeec
