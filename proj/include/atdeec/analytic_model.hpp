#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "atdeec/radio_energy.hpp"

namespace atdeec {

inline constexpr double kPi = 3.14159265358979323846;

// Inputs to the closed-form per-round energy model of a clustered network
// with a direct-transmission disk of radius R around the base station.
// s_excluded is a free parameter here; callers tie it to geometry when they
// want the expected count N*pi*R^2/M^2.
struct AnalyticInputs {
    double n_total = 100.0;        // N, node count
    double s_excluded = 0.0;       // s, nodes transmitting directly
    double field_side = 100.0;     // M, m
    double exclusion_radius = 0.0; // R, m
    double cluster_count = 1.0;    // c, used for fixed-c evaluation
    double packet_bits = 4000.0;   // l
    RadioParams radio = kDefaultRadio;

    // Largest admissible R: the direct-transmission disk must fit inside
    // the field area, R < M/sqrt(pi).
    double radius_bound() const { return field_side / std::sqrt(kPi); }

    void validate(bool with_cluster_count = false) const {
        radio.validate();
        if (!(n_total >= 1.0))
            throw std::invalid_argument("n_total must be at least 1");
        if (s_excluded < 0.0 || s_excluded >= n_total)
            throw std::invalid_argument("s_excluded must satisfy 0 <= s < N");
        if (!(field_side > 0.0))
            throw std::invalid_argument("field_side must be positive");
        if (exclusion_radius < 0.0 || exclusion_radius >= radius_bound())
            throw std::invalid_argument(
                "exclusion_radius " + std::to_string(exclusion_radius) +
                " violates the admissibility bound R < M/sqrt(pi) = " +
                std::to_string(radius_bound()));
        if (packet_bits < 0.0)
            throw std::invalid_argument("packet_bits must be non-negative");
        if (with_cluster_count && !(cluster_count >= 1.0))
            throw std::invalid_argument("cluster_count must be at least 1");
    }
};

struct AnalyticResult {
    double e_excluded_per_round = 0.0; // J per direct-transmitting node
    double e_ch_per_round = 0.0;       // J per cluster head
    double e_member_per_round = 0.0;   // J per cluster member
    double e_total_per_round = 0.0;    // J network-wide
    double c_opt_real = 0.0;           // real-valued optimal cluster count
    int c_opt_int = 1;                 // rounded, clamped to >= 1
    double p_opt = 0.0;                // c_opt_real / (N - s)
};

// Mean squared distance to the center for a uniform point on a disk of
// radius R.
inline double expected_sq_dist_excluded(double radius_m) {
    if (radius_m < 0.0) throw std::invalid_argument("radius must be non-negative");
    return radius_m * radius_m / 2.0;
}

// Mean squared member-to-head distance when the field area outside the disk
// is split into c equal clusters.
inline double expected_sq_dist_to_ch(double field_side, double radius_m, double clusters) {
    if (clusters <= 0.0) throw std::invalid_argument("cluster count must be positive");
    if (radius_m < 0.0) throw std::invalid_argument("radius must be non-negative");
    if (radius_m >= field_side / std::sqrt(kPi))
        throw std::invalid_argument("exclusion radius violates R < M/sqrt(pi)");
    const double annulus = field_side * field_side - kPi * radius_m * radius_m;
    return annulus / (2.0 * kPi * clusters);
}

// Squared head-to-base-station distance used by the model for nodes outside
// the disk. Same expression as the member distance with a single cluster.
inline double expected_sq_dist_to_bs(double field_side, double radius_m) {
    return expected_sq_dist_to_ch(field_side, radius_m, 1.0);
}

// Per-round energy of a node inside the disk: one electronics + aggregation
// charge plus the short-range amplifier at the disk's mean squared distance.
inline double energy_excluded_node(const AnalyticInputs& in) {
    in.validate();
    const double l = in.packet_bits;
    return l * in.radio.e_elec + l * in.radio.e_da +
           l * in.radio.eps_fs * expected_sq_dist_excluded(in.exclusion_radius);
}

// Per-round energy of a cluster head serving (N-s)/c nodes.
inline double energy_cluster_head(const AnalyticInputs& in) {
    in.validate(true);
    const double l = in.packet_bits;
    const double per_cluster = (in.n_total - in.s_excluded) / in.cluster_count;
    const double d2_bs = expected_sq_dist_to_bs(in.field_side, in.exclusion_radius);
    return l * in.radio.e_elec * (per_cluster - 1.0) + l * in.radio.e_da * per_cluster +
           l * in.radio.e_elec + l * in.radio.eps_mp * d2_bs * d2_bs;
}

// Per-round energy of a cluster member.
inline double energy_member_node(const AnalyticInputs& in) {
    in.validate(true);
    const double l = in.packet_bits;
    const double d2_ch =
        expected_sq_dist_to_ch(in.field_side, in.exclusion_radius, in.cluster_count);
    return l * in.radio.e_elec + l * in.radio.eps_fs * d2_ch;
}

// Network-wide per-round energy, kept term-for-term in the model's grouped
// form so that optimal_cluster_count() below is its exact stationary point.
inline double total_energy_per_round(const AnalyticInputs& in) {
    in.validate(true);
    const double l = in.packet_bits;
    const double n = in.n_total;
    const double s = in.s_excluded;
    const double c = in.cluster_count;
    const double r2 = in.exclusion_radius * in.exclusion_radius;
    const double area_term =
        (in.field_side * in.field_side - kPi * r2) / (2.0 * kPi);
    const double direct = l * s * (in.radio.e_elec + in.radio.eps_fs * r2 / 2.0);
    const double heads = l * (n - s) *
                         (n * in.radio.e_elec + (n - s) * in.radio.e_da +
                          c * in.radio.eps_mp * area_term * area_term);
    const double members =
        l * (n - s) * (n - s) * (in.radio.e_elec + in.radio.eps_fs * area_term / c);
    return direct + heads + members;
}

// Closed-form optimal cluster count and head probability. The energies in
// the result are evaluated at c_opt_real.
inline AnalyticResult optimal_cluster_count(const AnalyticInputs& in) {
    in.validate();
    AnalyticResult out;
    const double annulus =
        in.field_side * in.field_side - kPi * in.exclusion_radius * in.exclusion_radius;
    const double d0 = crossover_distance(in.radio);
    out.c_opt_real = d0 * std::sqrt(2.0 * kPi * (in.n_total - in.s_excluded) / annulus);
    out.c_opt_int = static_cast<int>(std::llround(out.c_opt_real));
    if (out.c_opt_int < 1) out.c_opt_int = 1;
    out.p_opt = out.c_opt_real / (in.n_total - in.s_excluded);

    AnalyticInputs at_opt = in;
    at_opt.cluster_count = std::max(1.0, out.c_opt_real);
    out.e_excluded_per_round = energy_excluded_node(at_opt);
    out.e_ch_per_round = energy_cluster_head(at_opt);
    out.e_member_per_round = energy_member_node(at_opt);
    out.e_total_per_round = total_energy_per_round(at_opt);
    return out;
}

// Energy at each integer cluster count in [c_lo, c_hi], for CSV export.
inline std::vector<std::pair<int, double>> energy_curve(const AnalyticInputs& in,
                                                        int c_lo, int c_hi) {
    if (c_lo < 1 || c_hi < c_lo)
        throw std::invalid_argument("cluster range must be non-empty and start at >= 1");
    in.validate();
    std::vector<std::pair<int, double>> curve;
    curve.reserve(static_cast<std::size_t>(c_hi - c_lo + 1));
    AnalyticInputs point = in;
    for (int c = c_lo; c <= c_hi; ++c) {
        point.cluster_count = static_cast<double>(c);
        curve.emplace_back(c, total_energy_per_round(point));
    }
    return curve;
}

// Grid scan of the total-energy curve over integer c. This is the numeric
// cross-check for the closed form; it intentionally does not reuse
// optimal_cluster_count().
inline std::pair<int, double> minimize_energy_over_clusters(const AnalyticInputs& in,
                                                            int c_lo, int c_hi) {
    const auto curve = energy_curve(in, c_lo, c_hi);
    auto best = curve.front();
    for (const auto& p : curve)
        if (p.second < best.second) best = p;
    return best;
}

}  // namespace atdeec
