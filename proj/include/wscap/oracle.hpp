#pragma once

#include <cstddef>
#include <vector>

#include "wscap/channels.hpp"

namespace wscap {

// Finite-alphabet snapshot of a scalar channel: m input letters against K
// output bins. Rows of `transition` are normalized to sum to one;
// `min_row_coverage` records the smallest pre-normalization row mass, i.e.
// how much of each conditional law the binning window actually captured.
struct DiscreteInputChannel {
    std::vector<double> inputs;
    std::vector<std::vector<double>> transition;
    std::vector<double> bin_edges;  // K+1 monotone edges
    double min_row_coverage = 1.0;

    std::size_t input_count() const { return inputs.size(); }
    std::size_t output_count() const { return bin_edges.empty() ? 0 : bin_edges.size() - 1; }
};

// Bins the channel outputs on a uniform grid wide enough that every input
// letter keeps at least `coverage` of its conditional mass inside.
DiscreteInputChannel discretize(const ScalarChannel& ch, const std::vector<double>& inputs,
                                std::size_t k = 800, double coverage = 1.0 - 1e-10);

struct BlahutArimotoResult {
    double capacity_nats = 0.0;  // the certified lower bound at the last iteration
    std::vector<double> input_distribution;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::size_t effective_support = 0;  // letters with probability > 1e-6
};

// Alternating maximization with the standard capacity bracket; stops when
// upper - lower < tol. Hitting max_iter returns the bracket unconverged.
BlahutArimotoResult blahut_arimoto(const DiscreteInputChannel& dc, double tol = 1e-7,
                                   std::size_t max_iter = 10000);

// Capacity of the unit-noise AWGN channel under the amplitude constraint
// |theta| <= delta_theta, via an m-letter grid (m odd) and K output bins.
BlahutArimotoResult awgn_amplitude_oracle(double delta_theta, std::size_t m = 65,
                                          std::size_t k = 800);
double exact_awgn_amplitude_capacity(double delta_theta, std::size_t m = 65, std::size_t k = 800);

// Mutual information of a finitely supported input against the continuous
// output, by adaptive quadrature (no binning). Weights are normalized.
double mi_discrete_input(const ScalarChannel& ch, const std::vector<double>& support,
                         const std::vector<double>& weights);

}  // namespace wscap
