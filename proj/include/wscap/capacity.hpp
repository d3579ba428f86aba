#pragma once

#include <numbers>
#include <vector>

#include "wscap/channels.hpp"
#include "wscap/fisher.hpp"
#include "wscap/numkit.hpp"

namespace wscap {

enum class CapacityMethod { high, bin, low, exact_awgn, waterfill, waterfill_small_p };

struct CapacityDiagnostics {
    bool psd_violation = false;
    bool ill_conditioned = false;
    bool quadrature_warning = false;
};

// All values are carried in nats; bits only at presentation.
struct CapacityEstimate {
    double nats = 0.0;
    CapacityMethod method = CapacityMethod::high;
    bool per_channel_use = true;
    CapacityDiagnostics diagnostics;

    double bits() const { return nats / std::numbers::ln2; }
};

// Amplitude constraint {theta0, delta_theta} or power constraint {P, theta0}.
struct InputConstraint {
    enum class Kind { amplitude, power };

    Kind kind = Kind::amplitude;
    double theta0 = 0.0;
    double delta_theta = 0.0;  // half-amplitude (amplitude kind)
    double power = 0.0;        // per-use power budget (power kind)

    static InputConstraint amplitude(double theta0, double delta_theta);
    static InputConstraint power_budget(double p, double theta0 = 0.0);
};

// Stationary input covariance C_Theta: constant diagonal sigma2, correlations
// in [-1, 1]. A failed PSD check is recorded, never fatal.
struct InputCovariance {
    SymMatrix matrix;
    double sigma2 = 0.0;
    bool psd_violation = false;
};

struct WaterFilling {
    std::vector<double> allocations;  // m_i = max(0, level - lambda_i)
    double level = 0.0;               // nu
};

struct ColoredCapacity {
    CapacityEstimate estimate;     // per channel use
    SymMatrix input_covariance;    // Q diag(m) Q^T; trace/n equals the power budget
    WaterFilling water;            // allocations aligned with ascending eigenvalues
};

// Joint mutual information of the n-use block, (1/2) tr(J C_Theta), in nats.
double mi_weak(const FisherMatrix& j, const InputCovariance& c);

// Sign-matched covariance [C]_ik = sigma2 sgn(J_ik) for i != k (sgn(0) -> 0),
// correlations clamped to +-(1 - 1e-9); diagonal sigma2.
InputCovariance optimal_covariance(const FisherMatrix& j, double sigma2);

// delta_theta^2 * J / 2 per channel use.
CapacityEstimate c_high_memoryless(double j_scalar, double delta_theta);

// (delta_theta^2 / 2n) sum_ik |J_ik| per channel use; finite-n surrogate for
// the infinite-block limit. psd_violation reflects the sign-matched covariance.
CapacityEstimate c_high_memory(const FisherMatrix& j, double delta_theta);

// (P/2)(rho^2 + 1 - 2 c rho)/(1 - rho^2): per-use weak-signal MI of AR(1)
// noise with lag-1 input correlation c. |c| = 1 allowed as the limit value.
double ar1_mi_per_use(double p, double rho, double c);

// Supremum of ar1_mi_per_use over c: (P/2)(rho^2 + 1 + 2|rho|)/(1 - rho^2).
CapacityEstimate ar1_capacity(double p, double rho);

// MI of the equiprobable two-point input {theta0 +- delta_theta}: the mean KL
// divergence of each component from their mixture. Bounded by ln 2.
CapacityEstimate c_bin(const ScalarChannel& ch, double theta0, double delta_theta);

// ln( integral of sqrt(J(theta)) over [theta_lo, theta_hi] / sqrt(2 pi e) ).
// Uses the channel's closed-form Fisher information when present, quadrature
// otherwise. May be negative; returned unclipped.
CapacityEstimate c_low(const ScalarChannel& ch, double theta_lo, double theta_hi);

// (1/2) ln(1 + P/N).
CapacityEstimate shannon_awgn(double p, double noise_power);

// Exact piecewise-linear solve of m_i = max(0, nu - lambda_i) with
// sum m_i = n * p (p is the per-use budget).
WaterFilling water_filling(const std::vector<double>& lambda, double p);

// Spectral water-filling capacity of Gaussian noise with memory:
// (1/2n) sum ln(1 + m_i/lambda_i), plus the optimal input covariance.
ColoredCapacity exact_colored_capacity(const NoiseCovariance& cz, double p);

// Weak-signal value of the water-filled allocation:
// (1/2n) tr(C_Z^{-1} C_Theta), which equals (1/2n) sum m_i/lambda_i.
CapacityEstimate waterfill_smallP(const NoiseCovariance& cz, double p);

// I(R1;R2) for two channel uses driven by the same equiprobable two-point
// input, by nested adaptive quadrature. Leading behaviour is quartic in
// delta_theta. Throws QuadratureError on breakdown.
double redundancy_mi(const ScalarChannel& ch, double theta0, double delta_theta);

}  // namespace wscap
