#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "atdeec/analytic_model.hpp"
#include "atdeec/rng.hpp"
#include "oracle_helpers.hpp"

using namespace atdeec;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

AnalyticInputs stock_inputs(double n, double s, double r, double m, double c) {
    AnalyticInputs in;
    in.n_total = n;
    in.s_excluded = s;
    in.field_side = m;
    in.exclusion_radius = r;
    in.cluster_count = c;
    in.packet_bits = 4000.0;
    in.radio = kDefaultRadio;
    return in;
}

}  // namespace

TEST_CASE("mean squared distance inside the disk") {
    CHECK(expected_sq_dist_excluded(20.0) == 200.0);
    CHECK(expected_sq_dist_excluded(0.0) == 0.0);
    CHECK(expected_sq_dist_excluded(1.0) == 0.5);
    CHECK_THROWS_AS(expected_sq_dist_excluded(-1.0), std::invalid_argument);

    // Closed form agrees with a Monte-Carlo sample of the disk.
    const double mc = oracle::mc_mean_sq_dist_disk(20.0, 1'000'000, 1234);
    CHECK_THAT(mc, WithinRel(200.0, 0.01));
}

TEST_CASE("mean squared member-to-head distance") {
    CHECK_THAT(expected_sq_dist_to_ch(100.0, 0.0, 5.0), WithinRel(318.3098861837907, 1e-12));
    CHECK_THAT(expected_sq_dist_to_ch(100.0, 20.0, 1.0),
               WithinRel((10000.0 - 400.0 * kPi) / (2.0 * kPi), 1e-12));
    CHECK_THROWS_AS(expected_sq_dist_to_ch(100.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(expected_sq_dist_to_ch(100.0, 60.0, 5.0), std::invalid_argument);

    // Vanishes in the zero-area limit approached from below the bound.
    const double r_limit = 100.0 / std::sqrt(kPi) * (1.0 - 1e-9);
    CHECK(expected_sq_dist_to_ch(100.0, r_limit, 1.0) < 1e-3);
}

TEST_CASE("per-node energies match the substitution oracle") {
    const oracle::Radio stock;

    CHECK_THAT(energy_excluded_node(stock_inputs(100, 10, 20, 100, 1)),
               WithinRel(2.0802e-4, 1e-12));
    CHECK_THAT(energy_excluded_node(stock_inputs(100, 10, 0, 100, 1)),
               WithinRel(2.0002e-4, 1e-12));
    auto zero_bits = stock_inputs(100, 10, 20, 100, 1);
    zero_bits.packet_bits = 0.0;
    CHECK(energy_excluded_node(zero_bits) == 0.0);

    CHECK_THAT(energy_cluster_head(stock_inputs(100, 0, 0, 100, 10)),
               WithinRel(oracle::head_energy(stock, 4000, 100, 0, 10, 100, 0), 1e-12));
    // Single-member cluster: the receive term vanishes, aggregation covers
    // exactly one signal.
    const double single = energy_cluster_head(stock_inputs(100, 90, 0, 100, 10));
    CHECK_THAT(single,
               WithinRel(4000 * (stock.e_elec + stock.e_da) +
                             4000 * stock.eps_mp * std::pow(10000.0 / (2 * kPi), 2),
                         1e-12));

    CHECK_THAT(energy_member_node(stock_inputs(100, 0, 0, 100, 5)),
               WithinRel(2.127323954473516e-4, 1e-12));
    auto many_clusters = stock_inputs(100, 0, 0, 100, 1e9);
    CHECK_THAT(energy_member_node(many_clusters), WithinRel(4000 * stock.e_elec, 1e-3));
}

TEST_CASE("total energy follows the grouped closed form term for term") {
    const oracle::Radio stock;
    SeededRng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const double n = 10.0 + std::floor(rng.uniform(0.0, 190.0));
        const double s = std::floor(rng.uniform(0.0, n));
        const double m = rng.uniform(50.0, 200.0);
        const double r = rng.uniform(0.0, 0.99 * m / std::sqrt(kPi));
        const double c = 1.0 + std::floor(rng.uniform(0.0, 40.0));
        const double l = rng.uniform(0.0, 8000.0);
        auto in = stock_inputs(n, s, r, m, c);
        in.packet_bits = l;
        CHECK_THAT(total_energy_per_round(in),
                   WithinRel(oracle::total_energy(stock, l, n, s, c, m, r), 1e-12));
    }

    // Dominated by the direct-transmission term when nearly all nodes sit
    // inside the disk.
    auto lopsided = stock_inputs(100, 99, 20, 100, 1);
    CHECK_THAT(total_energy_per_round(lopsided),
               WithinRel(oracle::total_energy(stock, 4000, 100, 99, 1, 100, 20), 1e-12));

    auto zero_bits = stock_inputs(100, 10, 20, 100, 5);
    zero_bits.packet_bits = 0.0;
    CHECK(total_energy_per_round(zero_bits) == 0.0);

    // Strictly positive and increasing in the message length.
    auto base = stock_inputs(100, 10, 20, 100, 5);
    auto longer = base;
    longer.packet_bits = 4001.0;
    CHECK(total_energy_per_round(base) > 0.0);
    CHECK(total_energy_per_round(longer) > total_energy_per_round(base));
}

TEST_CASE("optimal cluster count and head probability") {
    const auto flat = optimal_cluster_count(stock_inputs(100, 0, 0, 100, 1));
    CHECK_THAT(flat.c_opt_real, WithinAbs(21.98458429686861, 1e-9));
    CHECK(flat.c_opt_int == 22);
    CHECK_THAT(flat.p_opt, WithinRel(0.2198458429686861, 1e-12));

    const auto carved = optimal_cluster_count(stock_inputs(100, 50, 20, 100, 1));
    CHECK_THAT(carved.c_opt_real, WithinAbs(16.6250900748306, 1e-9));
    CHECK(carved.c_opt_int == 17);

    // One clustered node left: the prefactor formula with N-s = 1.
    const auto lone = optimal_cluster_count(stock_inputs(100, 99, 20, 100, 1));
    const double d0 = crossover_distance(kDefaultRadio);
    CHECK_THAT(lone.c_opt_real,
               WithinRel(d0 * std::sqrt(2.0 * kPi / (10000.0 - kPi * 400.0)), 1e-12));

    CHECK_THROWS_AS(optimal_cluster_count(stock_inputs(100, 0, 60, 100, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(optimal_cluster_count(stock_inputs(100, 100, 0, 100, 1)),
                    std::invalid_argument);
}

TEST_CASE("closed-form optimum agrees with the scan minimizer") {
    // The numeric minimization is the independent route; the closed form may
    // differ from the integer argmin by at most one after rounding.
    const oracle::Radio stock;
    SeededRng rng(17);
    int checked = 0;
    while (checked < 60) {
        const double n = 20.0 + std::floor(rng.uniform(0.0, 180.0));
        const double s = std::floor(rng.uniform(0.0, n - 1.0));
        const double m = rng.uniform(50.0, 200.0);
        const double r = rng.uniform(0.0, 0.9 * m / std::sqrt(kPi));
        const auto res = optimal_cluster_count(stock_inputs(n, s, r, m, 1));
        // The property holds where the optimum is realizable, i.e. the head
        // probability does not exceed one; outside that regime the scan just
        // saturates at its upper bound.
        if (res.c_opt_real > n - s - 1.0) continue;
        const int argmin = oracle::scan_argmin(1, static_cast<int>(n - s), [&](int c) {
            return oracle::total_energy(stock, 4000, n, s, c, m, r);
        });
        CHECK(std::abs(argmin - static_cast<int>(std::llround(res.c_opt_real))) <= 1);
        ++checked;
    }
}

TEST_CASE("energy curve export") {
    const auto curve = energy_curve(stock_inputs(100, 0, 0, 100, 1), 1, 30);
    REQUIRE(curve.size() == 30);
    CHECK(curve.front().first == 1);
    CHECK(curve.back().first == 30);

    // Interior minimum: smaller than both endpoints.
    double lowest = curve.front().second;
    int at = 1;
    for (const auto& [c, e] : curve)
        if (e < lowest) {
            lowest = e;
            at = c;
        }
    CHECK(at > 1);
    CHECK(at < 30);

    const auto single = energy_curve(stock_inputs(100, 0, 0, 100, 1), 7, 7);
    REQUIRE(single.size() == 1);
    CHECK(single.front().first == 7);

    CHECK_THROWS_AS(energy_curve(stock_inputs(100, 0, 0, 100, 1), 5, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS(energy_curve(stock_inputs(100, 0, 0, 100, 1), 0, 4),
                    std::invalid_argument);

    // More direct senders means a pointwise lower or equal curve.
    const auto some = energy_curve(stock_inputs(100, 10, 20, 100, 1), 1, 30);
    const auto more = energy_curve(stock_inputs(100, 20, 20, 100, 1), 1, 30);
    for (std::size_t i = 0; i < some.size(); ++i)
        CHECK(more[i].second <= some[i].second);
}

TEST_CASE("the admissibility bound is enforced at every entry point") {
    auto bad = stock_inputs(100, 0, 57.0, 100, 5);  // bound is ~56.42
    CHECK_THROWS_AS(energy_excluded_node(bad), std::invalid_argument);
    CHECK_THROWS_AS(energy_cluster_head(bad), std::invalid_argument);
    CHECK_THROWS_AS(energy_member_node(bad), std::invalid_argument);
    CHECK_THROWS_AS(total_energy_per_round(bad), std::invalid_argument);
    CHECK_THROWS_AS(optimal_cluster_count(bad), std::invalid_argument);
    CHECK_THROWS_AS(energy_curve(bad, 1, 10), std::invalid_argument);
    CHECK_THROWS_AS(expected_sq_dist_to_ch(100.0, 57.0, 5.0), std::invalid_argument);
}
