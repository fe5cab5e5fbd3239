#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "atdeec/analytic_model.hpp"
#include "atdeec/network.hpp"
#include "atdeec/radio_energy.hpp"
#include "atdeec/rng.hpp"

namespace atdeec {

// TDEEC runs the threshold election over the whole population; ATDEEC lets
// nodes within the exclusion radius skip clustering and send straight to the
// base station. TDEEC is simulated as ATDEEC with the radius forced to 0.
enum class ProtocolKind { tdeec, atdeec };

inline const char* protocol_name(ProtocolKind kind) {
    return kind == ProtocolKind::tdeec ? "tdeec" : "atdeec";
}

inline ProtocolKind protocol_from_name(const std::string& name) {
    if (name == "tdeec") return ProtocolKind::tdeec;
    if (name == "atdeec") return ProtocolKind::atdeec;
    throw std::invalid_argument("unknown protocol: " + name);
}

enum class AverageEnergyMode { true_mean, estimate };

// Engine switches that are not deployment parameters.
struct SimSettings {
    AverageEnergyMode average_energy_mode = AverageEnergyMode::true_mean;
    // Direct senders pay the per-packet aggregation charge, matching the
    // closed-form model. Off: they pay electronics + amplifier only.
    bool charge_excluded_aggregation = true;
    // Multiply the election threshold by the optimal cluster count
    // (sensitivity mode; off keeps the plain rotation * energy-ratio form).
    bool threshold_copt_factor = false;
};

struct Config {
    NetworkConfig network;
    RadioParams radio = kDefaultRadio;
    SimSettings sim;

    void validate() const {
        network.validate();
        radio.validate();
    }
};

// Per-round metrics. Population counts and residual energy are taken at the
// start of the round (the population that participates in it); ch_count and
// packet counts cover the round itself. The exact-accounting fields are not
// serialized; residual_energy_total floors each node at zero while
// residual_exact_total keeps the overdraft of nodes that died mid-charge.
struct RoundRecord {
    int round_index = 0;
    int alive_total = 0;
    int alive_normal = 0;
    int alive_advanced = 0;
    int alive_excluded = 0;
    int ch_count = 0;
    double residual_energy_total = 0.0;
    std::int64_t packets_to_bs_round = 0;
    std::int64_t packets_to_bs_cumulative = 0;
    double residual_exact_total = 0.0;
    double energy_spent_round = 0.0;
    bool fallback_direct = false;
};

struct SimulationSummary {
    int fnd_round = 0;          // max_rounds when no node died
    int lnd_round = 0;          // max_rounds when survivors remain
    std::int64_t total_packets = 0;
    int rounds_simulated = 0;
    std::uint64_t seed = 0;
    std::string rng_algorithm;
    std::string protocol;
    int excluded_count = 0;
};

struct SimulationResult {
    std::vector<RoundRecord> records;
    SimulationSummary summary;
};

// Head-election probability for one node: the reference probability scaled
// by the node's residual-to-average energy ratio, with advanced nodes
// weighted by their extra initial energy. Clamped into (0, 1].
inline double election_probability(const Node& node, double avg_energy, double p_opt,
                                   const NetworkConfig& config) {
    if (!(avg_energy > 0.0))
        throw std::invalid_argument("average energy must be positive");
    const double weight = node.is_advanced() ? (1.0 + config.advanced_factor) : 1.0;
    const double denom = 1.0 + config.advanced_factor * config.advanced_fraction;
    const double p = p_opt * weight * node.residual_energy / (denom * avg_energy);
    return std::min(p, 1.0);
}

// Election epoch implied by a probability: roughly one head term every
// 1/p rounds.
inline int election_epoch(double p_i) {
    return std::max(1, static_cast<int>(std::llround(1.0 / p_i)));
}

// Threshold against which an eligible node's uniform draw is compared.
// The rotation denominator grows the threshold as the epoch progresses; the
// residual/average ratio favors nodes that still hold energy. Ineligible
// nodes get 0; a non-positive denominator at the end of an epoch yields 1.
inline double election_threshold(const Node& node, int round, double p_i,
                                 double avg_energy, double copt_factor = 1.0) {
    if (node.epoch_state > 0) return 0.0;
    if (!(p_i > 0.0)) return 0.0;
    if (!(avg_energy > 0.0))
        throw std::invalid_argument("average energy must be positive");
    const int epoch = election_epoch(p_i);
    const double denom = 1.0 - p_i * static_cast<double>(round % epoch);
    if (denom <= 0.0) return 1.0;
    const double t = (p_i / denom) * (node.residual_energy / avg_energy) * copt_factor;
    return std::clamp(t, 0.0, 1.0);
}

// Parameters of the declining-average estimate mode.
struct AverageEnergyEstimate {
    double total_initial_energy = 0.0;
    double node_count = 1.0;
    double predicted_lifetime_rounds = 1.0;
};

inline constexpr double kAverageEnergyFloor = 1e-9;  // J

// Network-wide reference energy for the election. true_mean averages the
// residual energy of the alive population; estimate applies the linear
// depletion model and never drops below a small positive floor.
inline double average_energy(const std::vector<Node>& nodes, int round,
                             AverageEnergyMode mode, const AverageEnergyEstimate& est) {
    if (mode == AverageEnergyMode::estimate) {
        const double mean0 = est.total_initial_energy / est.node_count;
        const double value =
            mean0 * (1.0 - static_cast<double>(round) / est.predicted_lifetime_rounds);
        return std::max(value, kAverageEnergyFloor);
    }
    double total = 0.0;
    int alive = 0;
    for (const Node& n : nodes) {
        if (!n.alive) continue;
        total += n.residual_energy;
        ++alive;
    }
    if (alive == 0) throw std::logic_error("no alive nodes; simulation already terminated");
    return total / static_cast<double>(alive);
}

// One full protocol cycle per call to run_round(): direct transmissions from
// the excluded zone, threshold election, nearest-head cluster formation,
// data transfer, death marking, metrics.
class Simulation {
public:
    Simulation(const Config& config, ProtocolKind kind)
        : Simulation(config, kind, SeededRng(config.network.rng_seed), {}) {}

    // Fixture entry point: run the engine over a caller-built population.
    Simulation(const Config& config, ProtocolKind kind, std::vector<Node> nodes)
        : Simulation(config, kind, SeededRng(config.network.rng_seed), std::move(nodes)) {}

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<int>& last_round_ch_ids() const { return ch_ids_; }
    double p_opt() const { return p_opt_; }
    double c_opt_real() const { return c_opt_real_; }
    int excluded() const { return excluded_; }

    bool any_alive() const {
        for (const Node& n : nodes_)
            if (n.alive) return true;
        return false;
    }

    int first_death_round() const { return first_death_round_; }
    int last_death_round() const { return last_death_round_; }

    RoundRecord run_round() {
        if (!any_alive()) throw std::logic_error("no alive nodes left");

        RoundRecord rec;
        rec.round_index = round_;

        // Rotation bookkeeping happens before anything else this round.
        for (Node& n : nodes_)
            if (n.alive && n.epoch_state > 0) --n.epoch_state;

        for (const Node& n : nodes_) {
            if (!n.alive) continue;
            ++rec.alive_total;
            if (n.is_advanced())
                ++rec.alive_advanced;
            else
                ++rec.alive_normal;
            if (n.is_excluded()) ++rec.alive_excluded;
            rec.residual_energy_total += std::max(0.0, n.residual_energy);
        }
        for (const Node& n : nodes_) rec.residual_exact_total += n.residual_energy;

        // The election reference energy is a start-of-round quantity; a
        // non-positive value means a degenerate state, so the round loop
        // stops before any transmission.
        const double avg = average_energy(nodes_, round_, config_.sim.average_energy_mode,
                                          estimate_);
        if (!(avg > 0.0)) {
            aborted_ = true;
            return rec;
        }

        std::vector<double> charge(nodes_.size(), 0.0);
        const double l = config_.network.packet_bits;

        // Phase 1: the excluded zone sends straight to the base station.
        for (const Node& n : nodes_) {
            if (!n.alive || !n.is_excluded()) continue;
            double cost = transmit_energy(config_.radio, l, n.dist_to_bs);
            if (config_.sim.charge_excluded_aggregation)
                cost += aggregation_energy(config_.radio, l, 1);
            charge[static_cast<std::size_t>(n.id)] += cost;
            ++rec.packets_to_bs_round;
        }

        // Phase 2: threshold election among eligible clustered nodes.
        // Draws are consumed in ascending node id so traces never depend on
        // container iteration order.
        ch_ids_.clear();
        const double copt_factor = config_.sim.threshold_copt_factor ? c_opt_real_ : 1.0;
        for (Node& n : nodes_) {
            if (!n.alive || n.is_excluded() || n.epoch_state > 0) continue;
            const double p_i = election_probability(n, avg, p_opt_, config_.network);
            const double t = election_threshold(n, round_, p_i, avg, copt_factor);
            const double u = rng_.uniform01();
            if (u < t) {
                ch_ids_.push_back(n.id);
                n.epoch_state = election_epoch(p_i);
            }
        }
        rec.ch_count = static_cast<int>(ch_ids_.size());

        if (!ch_ids_.empty()) {
            // Phase 3/4: members join the nearest head (ties go to the
            // lowest head id), heads receive, aggregate, and forward.
            std::vector<char> is_head(nodes_.size(), 0);
            for (int id : ch_ids_) is_head[static_cast<std::size_t>(id)] = 1;
            std::vector<int> member_count(ch_ids_.size(), 0);
            for (const Node& n : nodes_) {
                if (!n.alive || n.is_excluded()) continue;
                if (is_head[static_cast<std::size_t>(n.id)]) continue;
                std::size_t best = 0;
                double best_d2 = sq_dist(n, nodes_[static_cast<std::size_t>(ch_ids_[0])]);
                for (std::size_t k = 1; k < ch_ids_.size(); ++k) {
                    const double d2 = sq_dist(n, nodes_[static_cast<std::size_t>(ch_ids_[k])]);
                    if (d2 < best_d2) {
                        best_d2 = d2;
                        best = k;
                    }
                }
                ++member_count[best];
                charge[static_cast<std::size_t>(n.id)] +=
                    transmit_energy(config_.radio, l, std::sqrt(best_d2));
            }
            for (std::size_t k = 0; k < ch_ids_.size(); ++k) {
                const Node& head = nodes_[static_cast<std::size_t>(ch_ids_[k])];
                double cost = receive_energy(config_.radio, l) * member_count[k];
                cost += aggregation_energy(config_.radio, l, member_count[k] + 1);
                cost += transmit_energy(config_.radio, l, head.dist_to_bs);
                charge[static_cast<std::size_t>(head.id)] += cost;
                ++rec.packets_to_bs_round;
            }
        } else {
            // Phase 5: with no head this round, clustered nodes fall back to
            // direct transmission.
            rec.fallback_direct = true;
            for (const Node& n : nodes_) {
                if (!n.alive || n.is_excluded()) continue;
                charge[static_cast<std::size_t>(n.id)] +=
                    transmit_energy(config_.radio, l, n.dist_to_bs);
                ++rec.packets_to_bs_round;
            }
        }

        // Phase 6: charges land in full; deaths are marked afterwards, so a
        // node that ran dry this round still delivered its packet.
        for (Node& n : nodes_) {
            const double c = charge[static_cast<std::size_t>(n.id)];
            if (c == 0.0) continue;
            rec.energy_spent_round += c;
            n.residual_energy -= c;
            if (n.alive && n.residual_energy <= 0.0) {
                n.alive = false;
                if (first_death_round_ < 0) first_death_round_ = round_;
                last_death_round_ = round_;
            }
        }

        packets_cumulative_ += rec.packets_to_bs_round;
        rec.packets_to_bs_cumulative = packets_cumulative_;
        ++round_;
        return rec;
    }

    SimulationResult run() {
        SimulationResult result;
        result.records.reserve(static_cast<std::size_t>(config_.network.max_rounds));
        while (round_ < config_.network.max_rounds && any_alive() && !aborted_)
            result.records.push_back(run_round());

        SimulationSummary& s = result.summary;
        const int max_rounds = config_.network.max_rounds;
        s.fnd_round = first_death_round_ >= 0 ? first_death_round_ : max_rounds;
        s.lnd_round = any_alive() ? max_rounds : last_death_round_;
        s.total_packets = packets_cumulative_;
        s.rounds_simulated = static_cast<int>(result.records.size());
        s.seed = config_.network.rng_seed;
        s.rng_algorithm = SeededRng::algorithm();
        s.protocol = protocol_name(kind_);
        s.excluded_count = excluded_;
        return result;
    }

private:
    Simulation(const Config& config, ProtocolKind kind, SeededRng rng,
               std::vector<Node> fixture)
        : config_(config), kind_(kind), rng_(rng) {
        config_.validate();
        if (kind_ == ProtocolKind::tdeec) config_.network.exclusion_radius = 0.0;
        config_.network.finalize();
        if (fixture.empty()) {
            nodes_ = deploy(config_.network, rng_);
        } else {
            // Fixture populations must be id-ordered; zone, distance, and
            // liveness are derived here so they stay consistent with the
            // effective configuration.
            nodes_ = std::move(fixture);
            for (std::size_t i = 0; i < nodes_.size(); ++i) {
                Node& n = nodes_[i];
                if (n.id != static_cast<int>(i))
                    throw std::invalid_argument("fixture nodes must be id-ordered from 0");
                n.dist_to_bs = std::hypot(n.x - config_.network.bs_x,
                                          n.y - config_.network.bs_y);
                n.zone = (n.dist_to_bs < config_.network.exclusion_radius)
                             ? Zone::excluded
                             : Zone::clustered;
                n.alive = n.residual_energy > 0.0;
            }
        }
        excluded_ = excluded_count(nodes_);

        const int n = static_cast<int>(nodes_.size());
        if (excluded_ < n) {
            AnalyticInputs in;
            in.n_total = static_cast<double>(n);
            in.s_excluded = static_cast<double>(excluded_);
            in.field_side = config_.network.field_side;
            in.exclusion_radius = config_.network.exclusion_radius;
            in.packet_bits = config_.network.packet_bits;
            in.radio = config_.radio;
            const AnalyticResult opt = optimal_cluster_count(in);
            c_opt_real_ = opt.c_opt_real;
            p_opt_ = opt.p_opt;
            estimate_.total_initial_energy = total_initial_energy(nodes_);
            estimate_.node_count = static_cast<double>(n);
            estimate_.predicted_lifetime_rounds =
                estimate_.total_initial_energy / opt.e_total_per_round;
        } else {
            // Every node transmits directly; the election never runs.
            estimate_.total_initial_energy = total_initial_energy(nodes_);
            estimate_.node_count = static_cast<double>(n);
            estimate_.predicted_lifetime_rounds = 1.0;
        }
    }

    static double sq_dist(const Node& a, const Node& b) {
        const double dx = a.x - b.x;
        const double dy = a.y - b.y;
        return dx * dx + dy * dy;
    }

    Config config_;
    ProtocolKind kind_;
    SeededRng rng_;
    std::vector<Node> nodes_;
    std::vector<int> ch_ids_;
    double p_opt_ = 0.0;
    double c_opt_real_ = 0.0;
    int excluded_ = 0;
    AverageEnergyEstimate estimate_;
    int round_ = 0;
    std::int64_t packets_cumulative_ = 0;
    int first_death_round_ = -1;
    int last_death_round_ = -1;
    bool aborted_ = false;
};

inline SimulationResult run_simulation(const Config& config, ProtocolKind kind) {
    Simulation sim(config, kind);
    return sim.run();
}

}  // namespace atdeec
