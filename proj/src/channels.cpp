#include "wscap/channels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace wscap {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double ScalarChannel::score(double r, double theta) const {
    const double h = std::max(1e-6, 1e-6 * std::fabs(theta));
    return (log_density(r, theta + h) - log_density(r, theta - h)) / (2.0 * h);
}

AwgnChannel::AwgnChannel(double noise_power) : noise_power_(noise_power) {
    if (!(noise_power > 0.0))
        throw std::invalid_argument("AwgnChannel: noise power must be > 0");
    log_norm_ = -0.5 * std::log(2.0 * M_PI * noise_power);
}

double AwgnChannel::log_density(double r, double theta) const {
    const double d = r - theta;
    return log_norm_ - d * d / (2.0 * noise_power_);
}

Interval AwgnChannel::support() const { return {-kInf, kInf}; }
Interval AwgnChannel::theta_domain() const { return {-kInf, kInf}; }

GammaChannel::GammaChannel(double kappa) : kappa_(kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("GammaChannel: shape must be > 0");
    lgamma_kappa_ = std::lgamma(kappa);
}

double GammaChannel::log_density(double r, double theta) const {
    if (!(theta > 0.0)) throw std::invalid_argument("GammaChannel: theta must be > 0");
    if (r <= 0.0) return -kInf;
    return (kappa_ - 1.0) * std::log(r) - kappa_ * std::log(theta) - r / theta - lgamma_kappa_;
}

double GammaChannel::score(double r, double theta) const {
    if (!(theta > 0.0)) throw std::invalid_argument("GammaChannel: theta must be > 0");
    return -kappa_ / theta + r / (theta * theta);
}

Interval GammaChannel::support() const { return {0.0, kInf}; }
Interval GammaChannel::theta_domain() const { return {0.0, kInf}; }

std::optional<double> GammaChannel::fisher_analytic(double theta) const {
    if (!(theta > 0.0)) throw std::invalid_argument("GammaChannel: theta must be > 0");
    return kappa_ / (theta * theta);
}

NoiseCovariance ar1_covariance(double rho, std::size_t n) {
    if (!(std::fabs(rho) < 1.0))
        throw std::invalid_argument("ar1_covariance: requires |rho| < 1");
    if (n < 1) throw std::invalid_argument("ar1_covariance: requires n >= 1");

    std::vector<double> pow_rho(n);
    pow_rho[0] = 1.0;
    for (std::size_t d = 1; d < n; ++d) pow_rho[d] = pow_rho[d - 1] * rho;

    NoiseCovariance cz{SymMatrix(n), NoiseModel::ar1, rho, 0.0};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i; k < n; ++k) cz.matrix.set(i, k, pow_rho[k - i]);
    return cz;
}

NoiseCovariance ma1_covariance(double rho, std::size_t n) {
    if (n < 1) throw std::invalid_argument("ma1_covariance: requires n >= 1");
    const double gamma = rho_to_gamma(rho);

    NoiseCovariance cz{SymMatrix(n), NoiseModel::ma1, rho, gamma};
    const double d = 1.0 + gamma * gamma;
    for (std::size_t i = 0; i < n; ++i) {
        cz.matrix.set(i, i, d);
        if (i + 1 < n) cz.matrix.set(i, i + 1, -gamma);
    }
    return cz;
}

double rho_to_gamma(double rho) {
    if (!(std::fabs(rho) < 0.5))
        throw std::invalid_argument("rho_to_gamma: no real invertible root for |rho| >= 0.5");
    if (rho == 0.0) return 0.0;
    return (-1.0 + std::sqrt(1.0 - 4.0 * rho * rho)) / (2.0 * rho);
}

NoiseCovariance load_covariance_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_covariance_csv: cannot open " + path);

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            std::size_t consumed = 0;
            double v;
            try {
                v = std::stod(cell, &consumed);
            } catch (const std::exception&) {
                throw std::invalid_argument("load_covariance_csv: bad number at line " +
                                            std::to_string(lineno));
            }
            while (consumed < cell.size() && std::isspace(static_cast<unsigned char>(cell[consumed])))
                ++consumed;
            if (consumed != cell.size())
                throw std::invalid_argument("load_covariance_csv: bad number at line " +
                                            std::to_string(lineno));
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::invalid_argument("load_covariance_csv: ragged row at line " +
                                        std::to_string(lineno));
        rows.push_back(std::move(row));
    }
    const std::size_t n = rows.size();
    if (n == 0 || rows.front().size() != n)
        throw std::invalid_argument("load_covariance_csv: matrix must be square and non-empty");

    double max_abs = 0.0;
    for (const auto& r : rows)
        for (double v : r) max_abs = std::max(max_abs, std::fabs(v));

    SymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i; k < n; ++k) {
            const double a = rows[i][k], b = rows[k][i];
            if (std::fabs(a - b) > 1e-12 * std::max(1.0, max_abs))
                throw std::invalid_argument("load_covariance_csv: matrix is not symmetric");
            m.set(i, k, 0.5 * (a + b));
        }
    }

    const double d0 = m(0, 0);
    for (std::size_t i = 1; i < n; ++i)
        if (std::fabs(m(i, i) - d0) > 1e-12 * std::max(1.0, std::fabs(d0)))
            throw std::invalid_argument(
                "load_covariance_csv: diagonal is not constant (noise must be stationary)");

    if (!is_psd(m, -1e-12 * std::max(1.0, d0)))
        throw std::invalid_argument("load_covariance_csv: matrix is not positive definite");

    NoiseCovariance cz{std::move(m), NoiseModel::custom, 0.0,
                       std::numeric_limits<double>::quiet_NaN()};
    cz.rho = n > 1 ? cz.matrix(0, 1) / d0 : 0.0;  // observed lag-1 correlation
    return cz;
}

DensityCheckReport scalar_density_checks(const ScalarChannel& ch, double theta) {
    if (!ch.theta_domain().contains(theta))
        throw std::invalid_argument("scalar_density_checks: theta outside domain");

    // Both residuals are exactly zero for any step size (they difference the
    // unit normalization), so the steps are chosen large enough to keep the
    // quotients clear of cancellation noise in the density evaluations.
    const double h1 = 1e-3 * std::max(1.0, std::fabs(theta));
    const double h2 = 1e-2 * std::max(1.0, std::fabs(theta));
    if (!ch.theta_domain().contains(theta - h2) || !ch.theta_domain().contains(theta + h2))
        throw std::invalid_argument(
            "scalar_density_checks: theta too close to the domain boundary");

    auto run = [&](const std::function<double(double)>& g, double tol) {
        QuadratureResult q = integrate_over_support(ch, theta, g, tol);
        if (!q.converged)
            throw QuadratureError("scalar_density_checks: quadrature did not converge", q);
        return q.value;
    };

    DensityCheckReport rep{};
    rep.normalization_residual =
        std::fabs(run([&](double r) { return ch.density(r, theta); }, 1e-11) - 1.0);
    rep.d_theta_residual = std::fabs(run(
        [&](double r) {
            return (ch.density(r, theta + h1) - ch.density(r, theta - h1)) / (2.0 * h1);
        },
        1e-10));
    rep.d2_theta_residual = std::fabs(run(
        [&](double r) {
            return (ch.density(r, theta + h2) - 2.0 * ch.density(r, theta) +
                    ch.density(r, theta - h2)) /
                   (h2 * h2);
        },
        1e-9));
    return rep;
}

QuadratureResult integrate_over_support(const ScalarChannel& ch, double theta,
                                        const std::function<double(double)>& g, double tol,
                                        long max_evaluations) {
    const Interval s = ch.support();
    if (s.bounded_below() && s.bounded_above())
        return integrate(g, s.lower, s.upper, tol, max_evaluations);
    if (s.bounded_below())
        return integrate_semi_infinite(g, s.lower, tol, max_evaluations);
    if (s.bounded_above()) {
        const double hi = s.upper;
        return integrate_semi_infinite([&g, hi](double u) { return g(hi - u); }, 0.0, tol,
                                       max_evaluations);
    }
    return integrate_real_line(g, ch.integration_center(theta), tol, max_evaluations);
}

}  // namespace wscap
