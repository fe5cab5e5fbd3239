#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "atdeec/analytic_model.hpp"
#include "atdeec/rng.hpp"

namespace atdeec {

// Deployment parameters. Distances in meters, energies in joules.
struct NetworkConfig {
    double field_side = 100.0;       // M, square field edge
    int node_count = 100;            // N
    double bs_x = std::nan("");      // base station; NaN means field center
    double bs_y = std::nan("");
    double exclusion_radius = 0.0;   // R, disk around the BS that skips clustering
    double base_energy = 0.5;        // E0, J per normal node
    double advanced_fraction = 0.4;  // share of advanced nodes
    double advanced_factor = 2.0;    // advanced nodes start with E0*(1+a)
    double packet_bits = 4000.0;     // l
    int max_rounds = 8000;
    std::uint64_t rng_seed = 1;

    // Resolve the default BS placement at the field center.
    void finalize() {
        if (std::isnan(bs_x)) bs_x = field_side / 2.0;
        if (std::isnan(bs_y)) bs_y = field_side / 2.0;
    }

    double radius_bound() const { return field_side / std::sqrt(kPi); }

    void validate() const {
        if (node_count < 1) throw std::invalid_argument("node_count must be at least 1");
        if (!(field_side > 0.0)) throw std::invalid_argument("field_side must be positive");
        if (!(base_energy > 0.0)) throw std::invalid_argument("base_energy must be positive");
        if (advanced_fraction < 0.0 || advanced_fraction > 1.0)
            throw std::invalid_argument("advanced_fraction must lie in [0, 1]");
        if (advanced_factor < 0.0)
            throw std::invalid_argument("advanced_factor must be non-negative");
        if (exclusion_radius < 0.0 || exclusion_radius >= radius_bound())
            throw std::invalid_argument(
                "exclusion_radius " + std::to_string(exclusion_radius) +
                " violates the admissibility bound R < M/sqrt(pi) = " +
                std::to_string(radius_bound()));
        if (packet_bits < 0.0) throw std::invalid_argument("packet_bits must be non-negative");
        if (max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
        if (!std::isnan(bs_x) && !std::isfinite(bs_x))
            throw std::invalid_argument("bs_x must be finite");
        if (!std::isnan(bs_y) && !std::isfinite(bs_y))
            throw std::invalid_argument("bs_y must be finite");
    }

    int advanced_count() const {
        return static_cast<int>(std::floor(advanced_fraction * node_count));
    }
};

enum class EnergyClass { normal, advanced };
enum class Zone { excluded, clustered };

struct Node {
    int id = 0;
    double x = 0.0;
    double y = 0.0;
    EnergyClass energy_class = EnergyClass::normal;
    double initial_energy = 0.0;
    double residual_energy = 0.0;
    Zone zone = Zone::clustered;
    bool alive = true;
    int epoch_state = 0;       // rounds of head-election ineligibility left
    double dist_to_bs = 0.0;   // fixed at deployment

    bool is_advanced() const { return energy_class == EnergyClass::advanced; }
    bool is_excluded() const { return zone == Zone::excluded; }
};

// Place N nodes uniformly on [0,M]^2, pick floor(advanced_fraction*N)
// advanced nodes by a seeded shuffle, and assign zones by strict distance
// comparison d < R. Consumes draws from `rng` in a fixed order: positions
// in id order (x then y), then the shuffle.
inline std::vector<Node> deploy(const NetworkConfig& config, SeededRng& rng) {
    config.validate();
    NetworkConfig cfg = config;
    cfg.finalize();

    std::vector<Node> nodes(static_cast<std::size_t>(cfg.node_count));
    for (int i = 0; i < cfg.node_count; ++i) {
        Node& n = nodes[static_cast<std::size_t>(i)];
        n.id = i;
        n.x = rng.uniform(0.0, cfg.field_side);
        n.y = rng.uniform(0.0, cfg.field_side);
        n.dist_to_bs = std::hypot(n.x - cfg.bs_x, n.y - cfg.bs_y);
        n.zone = (n.dist_to_bs < cfg.exclusion_radius) ? Zone::excluded : Zone::clustered;
    }

    std::vector<int> order(static_cast<std::size_t>(cfg.node_count));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    const int advanced = cfg.advanced_count();
    for (int k = 0; k < advanced; ++k)
        nodes[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])].energy_class =
            EnergyClass::advanced;

    for (Node& n : nodes) {
        n.initial_energy = n.is_advanced() ? cfg.base_energy * (1.0 + cfg.advanced_factor)
                                           : cfg.base_energy;
        n.residual_energy = n.initial_energy;
    }
    return nodes;
}

inline std::vector<Node> deploy(const NetworkConfig& config) {
    SeededRng rng(config.rng_seed);
    return deploy(config, rng);
}

inline double total_initial_energy(const std::vector<Node>& nodes) {
    if (nodes.empty()) throw std::invalid_argument("node list is empty");
    double total = 0.0;
    for (const Node& n : nodes) total += n.initial_energy;
    return total;
}

inline int excluded_count(const std::vector<Node>& nodes) {
    int count = 0;
    for (const Node& n : nodes)
        if (n.is_excluded()) ++count;
    return count;
}

}  // namespace atdeec
