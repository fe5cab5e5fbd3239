#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "atdeec/config.hpp"
#include "atdeec/sim_engine.hpp"

namespace atdeec {

using json = nlohmann::ordered_json;

// Output-path failures map to their own exit code in the CLI.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// small helpers

inline std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

// Sample standard deviation; defined as 0 for a single run.
inline double std_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double mu = mean_of(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - mu) * (x - mu);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

// "1,2,5" or "1:20" (inclusive range).
inline std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const auto lo = parse_integer(text.substr(0, colon), "seeds");
        const auto hi = parse_integer(text.substr(colon + 1), "seeds");
        if (lo < 0 || hi < lo) throw std::invalid_argument("invalid seed range: " + text);
        for (long long s = lo; s <= hi; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
        return seeds;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string tok =
            trim(text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (!tok.empty()) seeds.push_back(static_cast<std::uint64_t>(parse_integer(tok, "seeds")));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (seeds.empty()) throw std::invalid_argument("empty seed list");
    return seeds;
}

inline std::vector<double> parse_double_list(const std::string& text, const std::string& key) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string tok =
            trim(text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (!tok.empty()) values.push_back(parse_double(tok, key));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (values.empty()) throw std::invalid_argument("empty list for " + key);
    return values;
}

// Run n independent jobs across hardware threads. Results must be written
// by index so aggregation order never depends on completion order.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(n, hw);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// Paired runs: one simulation per (protocol, seed), seeds identical across
// protocols so deployments match.
inline std::vector<SimulationResult> run_batch(const Config& base, ProtocolKind kind,
                                               const std::vector<std::uint64_t>& seeds) {
    std::vector<SimulationResult> results(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) {
        Config cfg = base;
        cfg.network.rng_seed = seeds[i];
        results[i] = run_simulation(cfg, kind);
    });
    return results;
}

// ---------------------------------------------------------------------------
// serialization

inline constexpr const char* kTraceCsvHeader =
    "round,alive_total,alive_normal,alive_advanced,alive_excluded,"
    "ch_count,residual_energy_J,packets_round,packets_cum";

inline void write_trace_csv(const std::vector<RoundRecord>& records, std::ostream& out) {
    out << kTraceCsvHeader << "\n";
    for (const RoundRecord& r : records) {
        out << r.round_index << ',' << r.alive_total << ',' << r.alive_normal << ','
            << r.alive_advanced << ',' << r.alive_excluded << ',' << r.ch_count << ','
            << fmt_g(r.residual_energy_total) << ',' << r.packets_to_bs_round << ','
            << r.packets_to_bs_cumulative << "\n";
    }
}

inline json summary_json(const SimulationSummary& s, const Config& cfg) {
    json j;
    j["protocol"] = s.protocol;
    j["seed"] = s.seed;
    j["rng_algorithm"] = s.rng_algorithm;
    j["fnd_round"] = s.fnd_round;
    j["lnd_round"] = s.lnd_round;
    j["total_packets"] = s.total_packets;
    j["rounds_simulated"] = s.rounds_simulated;
    j["excluded_count"] = s.excluded_count;
    j["config"] = config_echo(cfg);
    return j;
}

// ---------------------------------------------------------------------------
// commands

// Energy curve grid: one row per (s, R, c) with the per-round network energy.
inline void cmd_analyze(const Config& cfg, const std::vector<double>& s_list,
                        const std::vector<double>& r_list, int c_lo, int c_hi,
                        std::ostream& out) {
    cfg.validate();
    if (c_lo < 1 || c_hi < c_lo)
        throw std::invalid_argument("cluster range must be non-empty and start at >= 1");

    AnalyticInputs in;
    in.n_total = static_cast<double>(cfg.network.node_count);
    in.field_side = cfg.network.field_side;
    in.packet_bits = cfg.network.packet_bits;
    in.radio = cfg.radio;
    // Reject the whole grid before writing anything.
    for (double r : r_list)
        if (r < 0.0 || r >= in.radius_bound())
            throw std::invalid_argument("inadmissible exclusion radius " + fmt_g(r) +
                                        " (bound " + fmt_g(in.radius_bound()) + ")");
    for (double s : s_list)
        if (s < 0.0 || s >= in.n_total)
            throw std::invalid_argument("inadmissible excluded count " + fmt_g(s));

    out << "s,R,c,e_total_J\n";
    for (double s : s_list) {
        for (double r : r_list) {
            in.s_excluded = s;
            in.exclusion_radius = r;
            for (const auto& [c, e] : energy_curve(in, c_lo, c_hi))
                out << fmt_g(s) << ',' << fmt_g(r) << ',' << c << ',' << fmt_g(e) << "\n";
        }
    }
}

// Closed-form optimum plus the grid-scan cross-check, as key: value lines.
inline void cmd_copt(const Config& cfg, double s_excluded, std::ostream& out) {
    cfg.validate();
    AnalyticInputs in;
    in.n_total = static_cast<double>(cfg.network.node_count);
    in.s_excluded = s_excluded;
    in.field_side = cfg.network.field_side;
    in.exclusion_radius = cfg.network.exclusion_radius;
    in.packet_bits = cfg.network.packet_bits;
    in.radio = cfg.radio;
    const AnalyticResult res = optimal_cluster_count(in);
    const int c_hi = std::max(1, static_cast<int>(in.n_total - in.s_excluded));
    const auto [c_scan, e_scan] = minimize_energy_over_clusters(in, 1, c_hi);
    out << "c_opt_real: " << fmt_g(res.c_opt_real) << "\n";
    out << "c_opt_int: " << res.c_opt_int << "\n";
    out << "p_opt: " << fmt_g(res.p_opt) << "\n";
    out << "d0: " << fmt_g(crossover_distance(cfg.radio)) << "\n";
    out << "c_opt_numeric: " << c_scan << "\n";
    out << "e_total_at_numeric_opt_J: " << fmt_g(e_scan) << "\n";
}

// Single run: per-round CSV trace plus a JSON summary.
inline SimulationResult cmd_simulate(const Config& cfg, ProtocolKind kind,
                                     std::ostream& csv_out, std::ostream& json_out) {
    SimulationResult result = run_simulation(cfg, kind);
    write_trace_csv(result.records, csv_out);
    json_out << summary_json(result.summary, cfg).dump(2) << "\n";
    return result;
}

struct ComparisonStats {
    std::string protocol;
    int runs = 0;
    double fnd_mean = 0.0, fnd_std = 0.0;
    double lnd_mean = 0.0, lnd_std = 0.0;
    double packets_mean = 0.0, packets_std = 0.0;
};

struct ComparisonReport {
    std::vector<ComparisonStats> stats;  // one per protocol, input order
    double fnd_ratio = 0.0;              // second listed over first listed
    double lnd_ratio = 0.0;
    double packets_ratio = 0.0;
};

inline ComparisonStats aggregate_stats(ProtocolKind kind,
                                       const std::vector<SimulationResult>& runs) {
    std::vector<double> fnd, lnd, packets;
    fnd.reserve(runs.size());
    lnd.reserve(runs.size());
    packets.reserve(runs.size());
    for (const SimulationResult& r : runs) {
        fnd.push_back(static_cast<double>(r.summary.fnd_round));
        lnd.push_back(static_cast<double>(r.summary.lnd_round));
        packets.push_back(static_cast<double>(r.summary.total_packets));
    }
    ComparisonStats s;
    s.protocol = protocol_name(kind);
    s.runs = static_cast<int>(runs.size());
    s.fnd_mean = mean_of(fnd);
    s.fnd_std = std_of(fnd);
    s.lnd_mean = mean_of(lnd);
    s.lnd_std = std_of(lnd);
    s.packets_mean = mean_of(packets);
    s.packets_std = std_of(packets);
    return s;
}

// Paired-seed protocol comparison. Ratios divide the second listed protocol
// by the first, so the conventional order "tdeec,atdeec" reports the
// ATDEEC-over-TDEEC improvement.
inline ComparisonReport cmd_compare(const Config& cfg,
                                    const std::vector<ProtocolKind>& protocols,
                                    const std::vector<std::uint64_t>& seeds,
                                    std::ostream& json_out) {
    cfg.validate();
    if (protocols.size() < 2)
        throw std::invalid_argument("compare needs at least two protocols");
    if (seeds.empty()) throw std::invalid_argument("compare needs at least one seed");

    ComparisonReport report;
    for (ProtocolKind kind : protocols)
        report.stats.push_back(aggregate_stats(kind, run_batch(cfg, kind, seeds)));

    const ComparisonStats& base = report.stats[0];
    const ComparisonStats& variant = report.stats[1];
    report.fnd_ratio = variant.fnd_mean / base.fnd_mean;
    report.lnd_ratio = variant.lnd_mean / base.lnd_mean;
    report.packets_ratio = variant.packets_mean / base.packets_mean;

    json j;
    j["rng_algorithm"] = SeededRng::algorithm();
    j["seeds"] = seeds;
    j["protocols"] = json::array();
    for (const ComparisonStats& s : report.stats) {
        json p;
        p["protocol"] = s.protocol;
        p["runs"] = s.runs;
        p["fnd_mean"] = s.fnd_mean;
        p["fnd_std"] = s.fnd_std;
        p["lnd_mean"] = s.lnd_mean;
        p["lnd_std"] = s.lnd_std;
        p["packets_mean"] = s.packets_mean;
        p["packets_std"] = s.packets_std;
        j["protocols"].push_back(p);
    }
    j["fnd_ratio"] = report.fnd_ratio;
    j["lnd_ratio"] = report.lnd_ratio;
    j["packets_ratio"] = report.packets_ratio;
    j["config"] = config_echo(cfg);
    json_out << j.dump(2) << "\n";
    return report;
}

struct SweepRow {
    double exclusion_radius = 0.0;
    int c_opt_int = 1;
    double fnd_mean = 0.0;
    double fnd_std = 0.0;
    double lnd_mean = 0.0;
};

// Radius sweep for the variant protocol. The c_opt_int column uses the
// geometric expectation of the excluded count, s = N*pi*R^2/M^2, so it is
// deterministic and independent of the seed draw.
inline std::vector<SweepRow> cmd_sweep_r(const Config& cfg, const std::vector<double>& r_list,
                                         const std::vector<std::uint64_t>& seeds,
                                         std::ostream& out) {
    cfg.validate();
    if (seeds.empty()) throw std::invalid_argument("sweep needs at least one seed");
    AnalyticInputs probe;
    probe.n_total = static_cast<double>(cfg.network.node_count);
    probe.field_side = cfg.network.field_side;
    probe.packet_bits = cfg.network.packet_bits;
    probe.radio = cfg.radio;
    for (double r : r_list)
        if (r < 0.0 || r >= probe.radius_bound())
            throw std::invalid_argument("inadmissible exclusion radius " + fmt_g(r) +
                                        " (bound " + fmt_g(probe.radius_bound()) + ")");

    std::vector<SweepRow> rows;
    rows.reserve(r_list.size());
    for (double r : r_list) {
        Config point = cfg;
        point.network.exclusion_radius = r;
        const auto runs = run_batch(point, ProtocolKind::atdeec, seeds);
        std::vector<double> fnd, lnd;
        for (const SimulationResult& run : runs) {
            fnd.push_back(static_cast<double>(run.summary.fnd_round));
            lnd.push_back(static_cast<double>(run.summary.lnd_round));
        }
        probe.exclusion_radius = r;
        probe.s_excluded = probe.n_total * kPi * r * r /
                           (probe.field_side * probe.field_side);
        SweepRow row;
        row.exclusion_radius = r;
        row.c_opt_int = optimal_cluster_count(probe).c_opt_int;
        row.fnd_mean = mean_of(fnd);
        row.fnd_std = std_of(fnd);
        row.lnd_mean = mean_of(lnd);
        rows.push_back(row);
    }

    out << "R,c_opt_int,fnd_mean,fnd_std,lnd_mean\n";
    for (const SweepRow& row : rows)
        out << fmt_g(row.exclusion_radius) << ',' << row.c_opt_int << ','
            << fmt_g(row.fnd_mean) << ',' << fmt_g(row.fnd_std) << ','
            << fmt_g(row.lnd_mean) << "\n";
    return rows;
}

}  // namespace atdeec
