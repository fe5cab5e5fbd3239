// Command-line front end: analytic curves, optimal cluster counts, single
// simulation runs, paired protocol comparisons, and radius sweeps.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "atdeec/config.hpp"
#include "atdeec/experiments.hpp"

namespace {

using atdeec::Config;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitIoError = 3;

struct ConfigFlags {
    std::string config_path;
    std::map<std::string, std::string> values;

    // Mirror every config key onto a flag of the same name.
    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value config file");
        for (const std::string& key : atdeec::config_keys())
            cmd->add_option("--" + key, values[key], "config override");
    }

    // Defaults, then file values, then explicit flags.
    Config resolve(CLI::App* cmd, const Config& base) const {
        Config cfg = base;
        if (cmd->count("--config") > 0) atdeec::load_config_file(cfg, config_path);
        for (const std::string& key : atdeec::config_keys())
            if (cmd->count("--" + key) > 0)
                atdeec::apply_config_key(cfg, key, values.at(key));
        return cfg;
    }
};

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw atdeec::IoError("cannot open output file: " + path);
    return out;
}

std::string summary_path_for(const std::string& csv_path) {
    const std::string suffix = ".csv";
    if (csv_path.size() > suffix.size() &&
        csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return csv_path.substr(0, csv_path.size() - suffix.size()) + ".summary.json";
    return csv_path + ".summary.json";
}

std::vector<atdeec::ProtocolKind> parse_protocols(const std::string& text) {
    std::vector<atdeec::ProtocolKind> kinds;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string tok =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) kinds.push_back(atdeec::protocol_from_name(atdeec::trim(tok)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return kinds;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"atdeec: clustering lifetime simulator and analytic optimizer"};
    app.require_subcommand(1);

    // analyze ---------------------------------------------------------------
    CLI::App* analyze = app.add_subcommand(
        "analyze", "write the per-round energy curve grid as CSV");
    ConfigFlags analyze_cfg;
    analyze_cfg.attach(analyze);
    std::string analyze_s = "0,10,20,30,40,50";
    std::string analyze_r = "0,10,20,30,40";
    int analyze_c_min = 1, analyze_c_max = 30;
    std::string analyze_out;
    analyze->add_option("--s_list", analyze_s, "excluded-node counts, comma separated");
    analyze->add_option("--r_list", analyze_r, "exclusion radii in m, comma separated");
    analyze->add_option("--c_min", analyze_c_min, "smallest cluster count");
    analyze->add_option("--c_max", analyze_c_max, "largest cluster count");
    analyze->add_option("--out", analyze_out, "output CSV path")->required();

    // copt ------------------------------------------------------------------
    CLI::App* copt = app.add_subcommand(
        "copt", "print the optimal cluster count and head probability");
    ConfigFlags copt_cfg;
    copt_cfg.attach(copt);
    double copt_s = 0.0;
    copt->add_option("--s", copt_s, "excluded-node count");

    // simulate ----------------------------------------------------------------
    CLI::App* simulate = app.add_subcommand(
        "simulate", "run one simulation; write a per-round CSV trace and a JSON summary");
    ConfigFlags simulate_cfg;
    simulate_cfg.attach(simulate);
    std::string simulate_protocol = "atdeec";
    std::string simulate_seed;
    std::string simulate_out;
    std::string simulate_summary_out;
    simulate->add_option("--protocol", simulate_protocol, "tdeec or atdeec");
    simulate->add_option("--seed", simulate_seed, "RNG seed (same as --rng_seed)");
    simulate->add_option("--out", simulate_out, "output CSV path")->required();
    simulate->add_option("--summary-out", simulate_summary_out,
                         "summary JSON path (default: derived from --out)");

    // compare -----------------------------------------------------------------
    CLI::App* compare = app.add_subcommand(
        "compare", "paired-seed protocol comparison; write aggregate stats as JSON");
    ConfigFlags compare_cfg;
    compare_cfg.attach(compare);
    std::string compare_protocols = "tdeec,atdeec";
    std::string compare_seeds = "1:20";
    std::string compare_out;
    compare->add_option("--protocols", compare_protocols, "comma-separated protocol pair");
    compare->add_option("--seeds", compare_seeds, "seed list: a,b,c or lo:hi");
    compare->add_option("--out", compare_out, "output JSON path")->required();

    // sweep-r -----------------------------------------------------------------
    CLI::App* sweep = app.add_subcommand(
        "sweep-r", "sweep the exclusion radius; write lifetime stats per R as CSV");
    ConfigFlags sweep_cfg;
    sweep_cfg.attach(sweep);
    std::string sweep_r_list = "10,15,20,25,30,35,40,45";
    std::string sweep_seeds = "1:10";
    std::string sweep_out;
    sweep->add_option("--r_list", sweep_r_list, "exclusion radii in m, comma separated");
    sweep->add_option("--seeds", sweep_seeds, "seed list: a,b,c or lo:hi");
    sweep->add_option("--out", sweep_out, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    try {
        if (app.got_subcommand(analyze)) {
            const Config cfg = analyze_cfg.resolve(analyze, Config{});
            const auto s_list = atdeec::parse_double_list(analyze_s, "s_list");
            const auto r_list = atdeec::parse_double_list(analyze_r, "r_list");
            std::ofstream out = open_output(analyze_out);
            atdeec::cmd_analyze(cfg, s_list, r_list, analyze_c_min, analyze_c_max, out);
        } else if (app.got_subcommand(copt)) {
            const Config cfg = copt_cfg.resolve(copt, Config{});
            atdeec::cmd_copt(cfg, copt_s, std::cout);
        } else if (app.got_subcommand(simulate)) {
            Config cfg = simulate_cfg.resolve(simulate, Config{});
            if (simulate->count("--seed") > 0)
                atdeec::apply_config_key(cfg, "rng_seed", simulate_seed);
            const atdeec::ProtocolKind kind = atdeec::protocol_from_name(simulate_protocol);
            const std::string summary_path = simulate->count("--summary-out") > 0
                                                 ? simulate_summary_out
                                                 : summary_path_for(simulate_out);
            // Both outputs must be writable before the run starts.
            std::ofstream csv = open_output(simulate_out);
            std::ofstream summary = open_output(summary_path);
            atdeec::cmd_simulate(cfg, kind, csv, summary);
        } else if (app.got_subcommand(compare)) {
            // The stock comparison experiment runs with a 20 m radius unless
            // the config file or a flag says otherwise.
            Config base;
            base.network.exclusion_radius = 20.0;
            const Config cfg = compare_cfg.resolve(compare, base);
            const auto kinds = parse_protocols(compare_protocols);
            const auto seeds = atdeec::parse_seed_list(compare_seeds);
            std::ofstream out = open_output(compare_out);
            atdeec::cmd_compare(cfg, kinds, seeds, out);
        } else if (app.got_subcommand(sweep)) {
            const Config cfg = sweep_cfg.resolve(sweep, Config{});
            const auto r_list = atdeec::parse_double_list(sweep_r_list, "r_list");
            const auto seeds = atdeec::parse_seed_list(sweep_seeds);
            std::ofstream out = open_output(sweep_out);
            atdeec::cmd_sweep_r(cfg, r_list, seeds, out);
        }
    } catch (const atdeec::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    }
    return kExitOk;
}
