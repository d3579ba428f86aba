#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "wscap/numkit.hpp"

namespace wscap {

// Open interval for supports and parameter domains; endpoints may be +-inf.
struct Interval {
    double lower;
    double upper;

    bool contains(double x) const { return x > lower && x < upper; }
    bool bounded_below() const { return std::isfinite(lower); }
    bool bounded_above() const { return std::isfinite(upper); }
};

// Memoryless conditional density family f(r|theta).
class ScalarChannel {
  public:
    virtual ~ScalarChannel() = default;

    virtual double log_density(double r, double theta) const = 0;
    double density(double r, double theta) const { return std::exp(log_density(r, theta)); }

    // d/dtheta ln f(r|theta); central difference with h = max(1e-6, 1e-6|theta|)
    // unless a subclass supplies the analytic form.
    virtual double score(double r, double theta) const;

    virtual Interval support() const = 0;
    virtual Interval theta_domain() const = 0;

    // Closed-form Fisher information, when the family has one.
    virtual std::optional<double> fisher_analytic(double /*theta*/) const { return std::nullopt; }

    // Split point for integrals over a doubly infinite support.
    virtual double integration_center(double theta) const { return theta; }

    // Rough standard deviation of R given theta; seeds bracketing searches.
    virtual double output_scale(double /*theta*/) const { return 1.0; }
};

// R = theta + Z with Z ~ N(0, N).
class AwgnChannel : public ScalarChannel {
  public:
    explicit AwgnChannel(double noise_power);

    double log_density(double r, double theta) const override;
    double score(double r, double theta) const override { return (r - theta) / noise_power_; }
    Interval support() const override;
    Interval theta_domain() const override;
    std::optional<double> fisher_analytic(double) const override { return 1.0 / noise_power_; }
    double output_scale(double) const override { return std::sqrt(noise_power_); }

    double noise_power() const { return noise_power_; }

  private:
    double noise_power_;
    double log_norm_;
};

// f(r|theta) = r^(kappa-1) theta^(-kappa) exp(-r/theta) / Gamma(kappa) on r > 0.
class GammaChannel : public ScalarChannel {
  public:
    explicit GammaChannel(double kappa);

    double log_density(double r, double theta) const override;
    double score(double r, double theta) const override;
    Interval support() const override;
    Interval theta_domain() const override;
    std::optional<double> fisher_analytic(double theta) const override;
    double integration_center(double theta) const override { return kappa_ * theta; }
    double output_scale(double theta) const override { return theta * std::sqrt(kappa_); }

    double kappa() const { return kappa_; }

  private:
    double kappa_;
    double lgamma_kappa_;  // cached: std::lgamma is not required to be thread-safe
};

enum class NoiseModel { ar1, ma1, custom };

// Stationary Gaussian noise covariance C_Z. rho is the lag-1 correlation;
// gamma is meaningful for the ma1 model only.
struct NoiseCovariance {
    SymMatrix matrix;
    NoiseModel model = NoiseModel::custom;
    double rho = 0.0;
    double gamma = 0.0;

    std::size_t size() const { return matrix.size(); }
};

// [C_Z]_ik = rho^|i-k|; requires |rho| < 1.
NoiseCovariance ar1_covariance(double rho, std::size_t n);

// Tridiagonal: diagonal 1+gamma^2, first off-diagonal -gamma, with
// gamma = rho_to_gamma(rho); requires |rho| < 0.5.
NoiseCovariance ma1_covariance(double rho, std::size_t n);

// Invertible root (|gamma| < 1) of rho = -gamma/(1+gamma^2).
double rho_to_gamma(double rho);

// Square numeric CSV, no header. Enforces symmetry, a constant diagonal, and
// strict positive definiteness; small asymmetries within 1e-12 of the scale
// are averaged away.
NoiseCovariance load_covariance_csv(const std::string& path);

// Residuals of the density regularity conditions at theta:
// integral of f is 1, and the first two theta-derivatives of f integrate to 0
// (derivatives taken by central differences of the density).
struct DensityCheckReport {
    double normalization_residual;
    double d_theta_residual;
    double d2_theta_residual;
};

DensityCheckReport scalar_density_checks(const ScalarChannel& ch, double theta);

// Integrates g over the channel's output support, dispatching on boundedness;
// doubly infinite supports are split at integration_center(theta).
QuadratureResult integrate_over_support(const ScalarChannel& ch, double theta,
                                        const std::function<double(double)>& g,
                                        double tol = 1e-10, long max_evaluations = 1000000);

}  // namespace wscap
