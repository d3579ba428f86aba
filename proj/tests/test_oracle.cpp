#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "wscap/capacity.hpp"
#include "wscap/channels.hpp"
#include "wscap/oracle.hpp"

using namespace wscap;

namespace {

DiscreteInputChannel make_channel(std::vector<double> inputs,
                                  std::vector<std::vector<double>> rows) {
    DiscreteInputChannel dc;
    dc.inputs = std::move(inputs);
    dc.transition = std::move(rows);
    const std::size_t k = dc.transition.front().size();
    dc.bin_edges.resize(k + 1);
    for (std::size_t i = 0; i <= k; ++i) dc.bin_edges[i] = static_cast<double>(i);
    dc.min_row_coverage = 1.0;
    return dc;
}

}  // namespace

TEST_CASE("alternating-sum iteration reproduces textbook capacities") {
    const double ln2 = std::numbers::ln2;

    const BlahutArimotoResult bsc =
        blahut_arimoto(make_channel({0.0, 1.0}, {{0.9, 0.1}, {0.1, 0.9}}));
    const double h01 = -(0.1 * std::log(0.1) + 0.9 * std::log(0.9));
    CHECK(bsc.converged);
    CHECK(std::fabs(bsc.capacity_nats - (ln2 - h01)) <= 1e-6);
    CHECK(bsc.upper_bound >= bsc.lower_bound);
    CHECK(bsc.input_distribution[0] == doctest::Approx(0.5).epsilon(1e-4));

    const BlahutArimotoResult erasure =
        blahut_arimoto(make_channel({0.0, 1.0}, {{0.7, 0.0, 0.3}, {0.0, 0.7, 0.3}}));
    CHECK(std::fabs(erasure.capacity_nats - 0.7 * ln2) <= 1e-6);

    const BlahutArimotoResult noiseless =
        blahut_arimoto(make_channel({0.0, 1.0}, {{1.0, 0.0}, {0.0, 1.0}}));
    CHECK(std::fabs(noiseless.capacity_nats - ln2) <= 1e-7);
    CHECK(noiseless.effective_support == 2);

    const BlahutArimotoResult useless =
        blahut_arimoto(make_channel({0.0, 1.0}, {{0.5, 0.5}, {0.5, 0.5}}));
    CHECK(useless.capacity_nats <= 1e-9);
}

TEST_CASE("alternating-sum iteration improves with budget and rejects bad input") {
    const DiscreteInputChannel dc =
        make_channel({0.0, 1.0}, {{0.85, 0.15}, {0.25, 0.75}});
    const BlahutArimotoResult one = blahut_arimoto(dc, 1e-7, 1);
    const BlahutArimotoResult many = blahut_arimoto(dc, 1e-7, 200);
    CHECK_FALSE(one.converged);
    CHECK(many.converged);
    CHECK(one.lower_bound <= many.lower_bound + 1e-12);
    CHECK(many.iterations >= 1);

    CHECK_THROWS_AS(blahut_arimoto(make_channel({0.0, 1.0}, {{0.5, 0.5}, {0.5}})),
                    std::invalid_argument);
    CHECK_THROWS_AS(blahut_arimoto(make_channel({0.0, 1.0}, {{1.5, -0.5}, {0.5, 0.5}})),
                    std::invalid_argument);
    CHECK_THROWS_AS(blahut_arimoto(make_channel({0.0, 1.0}, {{0.6, 0.6}, {0.5, 0.5}})),
                    std::invalid_argument);
    CHECK_THROWS_AS(blahut_arimoto(dc, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(blahut_arimoto(dc, 1e-7, 0), std::invalid_argument);
}

TEST_CASE("output discretization produces a proper stochastic matrix") {
    const AwgnChannel awgn(1.0);
    const DiscreteInputChannel dc = discretize(awgn, {-0.5, 0.5}, 200);
    CHECK(dc.input_count() == 2);
    CHECK(dc.output_count() == 200);
    CHECK(dc.bin_edges.size() == 201);
    CHECK(dc.bin_edges.front() < -4.0);
    CHECK(dc.bin_edges.back() > 4.0);
    CHECK(dc.min_row_coverage >= 1.0 - 1e-8);
    for (const auto& row : dc.transition) {
        double sum = 0.0;
        for (const double w : row) {
            CHECK(w >= 0.0);
            sum += w;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (std::size_t i = 1; i < dc.bin_edges.size(); ++i)
        CHECK(dc.bin_edges[i] > dc.bin_edges[i - 1]);
}

TEST_CASE("output discretization respects a one-sided support") {
    const GammaChannel gamma(0.75);
    const DiscreteInputChannel dc = discretize(gamma, {1.0, 1.2}, 300);
    CHECK(dc.bin_edges.front() >= 0.0);
    CHECK(dc.min_row_coverage >= 1.0 - 1e-8);
    for (const auto& row : dc.transition) {
        double sum = 0.0;
        for (const double w : row) sum += w;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("output discretization preconditions") {
    const AwgnChannel awgn(1.0);
    CHECK_THROWS_AS(discretize(awgn, {0.5}, 100), std::invalid_argument);
    CHECK_THROWS_AS(discretize(awgn, {-0.5, 0.5}, 1), std::invalid_argument);
    CHECK_THROWS_AS(discretize(awgn, {-0.5, 0.5}, 100, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(discretize(GammaChannel(2.0), {-1.0, 1.0}, 100), std::invalid_argument);
}

TEST_CASE("amplitude-constrained reference stays inside its analytic bracket") {
    const double dt = 0.5;
    const BlahutArimotoResult res = awgn_amplitude_oracle(dt, 17, 200);
    CHECK(res.converged);
    const double two_point = c_bin(AwgnChannel(1.0), 0.0, dt).nats;
    const double power_bound = shannon_awgn(dt * dt, 1.0).nats;
    CHECK(res.capacity_nats >= two_point - 1e-3);
    CHECK(res.capacity_nats <= power_bound + 1e-3);

    const double wrapped = exact_awgn_amplitude_capacity(dt, 17, 200);
    CHECK(wrapped == res.capacity_nats);

    CHECK_THROWS_AS(awgn_amplitude_oracle(0.0), std::invalid_argument);
    CHECK_THROWS_AS(awgn_amplitude_oracle(0.5, 4), std::invalid_argument);
}

TEST_CASE("discrete-input rate functional") {
    const AwgnChannel awgn(1.0);

    CHECK(mi_discrete_input(awgn, {0.3}, {1.0}) == 0.0);
    CHECK(mi_discrete_input(awgn, {-0.3, 0.3}, {1.0, 0.0}) == 0.0);

    const double dt = 0.3;
    const double pair = mi_discrete_input(awgn, {-dt, dt}, {0.5, 0.5});
    CHECK(pair == doctest::Approx(c_bin(awgn, 0.0, dt).nats).epsilon(1e-6));

    // Any fixed distribution on the oracle's grid is dominated by its optimum.
    const BlahutArimotoResult res = awgn_amplitude_oracle(0.5, 9, 200);
    std::vector<double> grid(9), uniform(9, 1.0 / 9.0);
    for (int i = 0; i < 9; ++i) grid[i] = -0.5 + 0.125 * static_cast<double>(i);
    const double flat = mi_discrete_input(awgn, grid, uniform);
    CHECK(flat <= res.capacity_nats + 1e-3);
    CHECK(flat > 0.0);

    CHECK_THROWS_AS(mi_discrete_input(awgn, {0.1, 0.2}, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(mi_discrete_input(awgn, {0.1, 0.2}, {-0.5, 1.5}), std::invalid_argument);
    CHECK_THROWS_AS(mi_discrete_input(awgn, {0.1, 0.2}, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(mi_discrete_input(GammaChannel(2.0), {-1.0, 1.0}, {0.5, 0.5}),
                    std::invalid_argument);
}
