#include "wscap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wscap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logaddexp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::fabs(a - b)));
}

}  // namespace

InputConstraint InputConstraint::amplitude(double theta0, double delta_theta) {
    if (!(delta_theta > 0.0))
        throw std::invalid_argument("InputConstraint: half-amplitude must be > 0");
    InputConstraint c;
    c.kind = Kind::amplitude;
    c.theta0 = theta0;
    c.delta_theta = delta_theta;
    return c;
}

InputConstraint InputConstraint::power_budget(double p, double theta0) {
    if (!(p > 0.0)) throw std::invalid_argument("InputConstraint: power budget must be > 0");
    InputConstraint c;
    c.kind = Kind::power;
    c.theta0 = theta0;
    c.power = p;
    return c;
}

double mi_weak(const FisherMatrix& j, const InputCovariance& c) {
    if (j.size() != c.matrix.size())
        throw std::invalid_argument("mi_weak: dimension mismatch");
    return 0.5 * trace_product(j.matrix, c.matrix);
}

InputCovariance optimal_covariance(const FisherMatrix& j, double sigma2) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("optimal_covariance: sigma2 must be > 0");
    const std::size_t n = j.size();
    const double clamp = 1.0 - 1e-9;  // the supremum is approached, never attained

    InputCovariance c{SymMatrix(n), sigma2, false};
    for (std::size_t i = 0; i < n; ++i) {
        c.matrix.set(i, i, sigma2);
        for (std::size_t k = i + 1; k < n; ++k) {
            const double jik = j.matrix(i, k);
            const double sgn = (jik > 0.0) ? 1.0 : (jik < 0.0 ? -1.0 : 0.0);
            c.matrix.set(i, k, sigma2 * sgn * clamp);
        }
    }
    c.psd_violation = !is_psd(c.matrix);
    return c;
}

CapacityEstimate c_high_memoryless(double j_scalar, double delta_theta) {
    if (!(j_scalar >= 0.0))
        throw std::invalid_argument("c_high_memoryless: Fisher information must be >= 0");
    if (!(delta_theta >= 0.0))
        throw std::invalid_argument("c_high_memoryless: delta_theta must be >= 0");
    CapacityEstimate e;
    e.nats = 0.5 * (delta_theta * delta_theta) * j_scalar;
    e.method = CapacityMethod::high;
    e.per_channel_use = true;
    return e;
}

CapacityEstimate c_high_memory(const FisherMatrix& j, double delta_theta) {
    if (!(delta_theta >= 0.0))
        throw std::invalid_argument("c_high_memory: delta_theta must be >= 0");
    const std::size_t n = j.size();

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = j.matrix.row(i);
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += std::fabs(row[k]);
        sum += s;
    }

    CapacityEstimate e;
    e.nats = 0.5 * (delta_theta * delta_theta) * (sum / static_cast<double>(n));
    e.method = CapacityMethod::high;
    e.per_channel_use = true;
    // The sign pattern decides PSD-ness; the scale does not, so delta_theta=0
    // still reports a meaningful flag.
    const double sigma2 = delta_theta > 0.0 ? delta_theta * delta_theta : 1.0;
    e.diagnostics.psd_violation = optimal_covariance(j, sigma2).psd_violation;
    e.diagnostics.ill_conditioned = j.condition_estimate > 1e12;
    return e;
}

double ar1_mi_per_use(double p, double rho, double c) {
    if (!(p > 0.0)) throw std::invalid_argument("ar1_mi_per_use: requires P > 0");
    if (!(std::fabs(rho) < 1.0)) throw std::invalid_argument("ar1_mi_per_use: requires |rho| < 1");
    if (!(std::fabs(c) <= 1.0))
        throw std::invalid_argument("ar1_mi_per_use: requires |c| <= 1 (limit values allowed)");
    return 0.5 * p * (rho * rho + 1.0 - 2.0 * c * rho) / (1.0 - rho * rho);
}

CapacityEstimate ar1_capacity(double p, double rho) {
    if (!(p > 0.0)) throw std::invalid_argument("ar1_capacity: requires P > 0");
    if (!(std::fabs(rho) < 1.0)) throw std::invalid_argument("ar1_capacity: requires |rho| < 1");
    CapacityEstimate e;
    e.nats = 0.5 * p * (rho * rho + 1.0 + 2.0 * std::fabs(rho)) / (1.0 - rho * rho);
    e.method = CapacityMethod::high;
    e.per_channel_use = true;
    return e;
}

CapacityEstimate c_bin(const ScalarChannel& ch, double theta0, double delta_theta) {
    if (!(delta_theta >= 0.0)) throw std::invalid_argument("c_bin: delta_theta must be >= 0");

    CapacityEstimate e;
    e.method = CapacityMethod::bin;
    e.per_channel_use = true;
    if (delta_theta == 0.0) return e;

    const double tp = theta0 + delta_theta;
    const double tm = theta0 - delta_theta;
    if (!ch.theta_domain().contains(tp) || !ch.theta_domain().contains(tm))
        throw std::invalid_argument("c_bin: theta0 +- delta_theta outside the theta domain");

    auto integrand = [&](double r) {
        const double a = ch.log_density(r, tp);
        const double b = ch.log_density(r, tm);
        const double lbar = logaddexp(a, b) - std::numbers::ln2;
        double s = 0.0;
        if (a != -kInf) s += std::exp(a) * (a - lbar);
        if (b != -kInf) s += std::exp(b) * (b - lbar);
        return 0.5 * s;
    };

    const QuadratureResult q = integrate_over_support(ch, theta0, integrand, 1e-12);
    e.diagnostics.quadrature_warning = !q.converged;

    double v = q.value;
    if (v < 0.0) {
        if (v < -1e-10) e.diagnostics.quadrature_warning = true;
        v = 0.0;
    }
    e.nats = v;
    return e;
}

CapacityEstimate c_low(const ScalarChannel& ch, double theta_lo, double theta_hi) {
    if (!(theta_lo < theta_hi)) throw std::invalid_argument("c_low: requires theta_lo < theta_hi");
    if (!ch.theta_domain().contains(theta_lo) || !ch.theta_domain().contains(theta_hi))
        throw std::invalid_argument("c_low: theta range outside the theta domain");

    bool warn = false;
    auto sqrt_fi = [&](double theta) {
        double j;
        if (auto fa = ch.fisher_analytic(theta)) {
            j = *fa;
        } else {
            QuadratureResult qd;
            j = fisher_scalar(ch, theta, qd);
            if (!qd.converged) warn = true;
        }
        if (j < 0.0) {
            warn = true;
            j = 0.0;
        }
        return std::sqrt(j);
    };

    const QuadratureResult q = integrate(sqrt_fi, theta_lo, theta_hi, 1e-11);
    if (!q.converged) warn = true;
    if (!(q.value > 0.0))
        throw QuadratureError("c_low: integral of sqrt(J) is not positive", q);

    CapacityEstimate e;
    e.nats = std::log(q.value) - 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
    e.method = CapacityMethod::low;
    e.per_channel_use = true;
    e.diagnostics.quadrature_warning = warn;
    return e;
}

CapacityEstimate shannon_awgn(double p, double noise_power) {
    if (!(p >= 0.0)) throw std::invalid_argument("shannon_awgn: requires P >= 0");
    if (!(noise_power > 0.0)) throw std::invalid_argument("shannon_awgn: requires N > 0");
    CapacityEstimate e;
    e.nats = 0.5 * std::log1p(p / noise_power);
    e.method = CapacityMethod::exact_awgn;
    e.per_channel_use = true;
    return e;
}

WaterFilling water_filling(const std::vector<double>& lambda, double p) {
    const std::size_t n = lambda.size();
    if (n == 0) throw std::invalid_argument("water_filling: empty noise spectrum");
    for (double l : lambda)
        if (!(l > 0.0)) throw std::invalid_argument("water_filling: noise levels must be > 0");
    if (!(p > 0.0)) throw std::invalid_argument("water_filling: requires P > 0");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t k) { return lambda[i] < lambda[k]; });

    const double budget = static_cast<double>(n) * p;
    double prefix = 0.0;  // sum of the k smallest noise levels
    double level = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        prefix += lambda[order[k - 1]];
        const double nu = (budget + prefix) / static_cast<double>(k);
        if (nu > lambda[order[k - 1]]) level = nu;
    }

    WaterFilling w;
    w.level = level;
    w.allocations.resize(n);
    for (std::size_t i = 0; i < n; ++i) w.allocations[i] = std::max(0.0, level - lambda[i]);
    return w;
}

ColoredCapacity exact_colored_capacity(const NoiseCovariance& cz, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("exact_colored_capacity: requires P > 0");
    const std::size_t n = cz.size();
    const EigenDecomposition eig = sym_eigen(cz.matrix);
    if (!(eig.values.front() > 0.0))
        throw std::invalid_argument("exact_colored_capacity: covariance is not positive definite");

    WaterFilling wf = water_filling(eig.values, p);

    double nats = 0.0;
    for (std::size_t k = 0; k < n; ++k) nats += std::log1p(wf.allocations[k] / eig.values[k]);
    nats /= 2.0 * static_cast<double>(n);

    SymMatrix c_theta(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double m = wf.allocations[k];
        if (m == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const double qi = eig.vector_entry(i, k);
            for (std::size_t j = i; j < n; ++j)
                c_theta.set(i, j, c_theta(i, j) + m * qi * eig.vector_entry(j, k));
        }
    }

    ColoredCapacity out{CapacityEstimate{}, std::move(c_theta), std::move(wf)};
    out.estimate.nats = nats;
    out.estimate.method = CapacityMethod::waterfill;
    out.estimate.per_channel_use = true;
    return out;
}

CapacityEstimate waterfill_smallP(const NoiseCovariance& cz, double p) {
    const FisherMatrix j = fisher_gaussian_vector(cz);
    const ColoredCapacity cc = exact_colored_capacity(cz, p);

    CapacityEstimate e;
    e.nats = trace_product(j.matrix, cc.input_covariance) / (2.0 * static_cast<double>(cz.size()));
    e.method = CapacityMethod::waterfill_small_p;
    e.per_channel_use = true;
    return e;
}

double redundancy_mi(const ScalarChannel& ch, double theta0, double delta_theta) {
    if (!(delta_theta >= 0.0))
        throw std::invalid_argument("redundancy_mi: delta_theta must be >= 0");
    if (delta_theta == 0.0) return 0.0;

    const double tp = theta0 + delta_theta;
    const double tm = theta0 - delta_theta;
    if (!ch.theta_domain().contains(tp) || !ch.theta_domain().contains(tm))
        throw std::invalid_argument("redundancy_mi: theta0 +- delta_theta outside the theta domain");

    const double ln2 = std::numbers::ln2;

    // g(r1) = integral over r2 of p12 ln(p12/(p1 p2)): the joint density is the
    // equal mixture of the two product components, so g is a scaled KL
    // divergence and is nonnegative pointwise.
    bool inner_failed = false;
    double inner_tol = 1e-9;  // crude pass for scale probing, tightened below
    auto g = [&](double r1) {
        const double a1 = ch.log_density(r1, tp);
        const double b1 = ch.log_density(r1, tm);
        const double lnp1 = logaddexp(a1, b1) - ln2;
        if (lnp1 == -kInf) return 0.0;

        auto h = [&](double r2) {
            const double a2 = ch.log_density(r2, tp);
            const double b2 = ch.log_density(r2, tm);
            const double lnp2 = logaddexp(a2, b2) - ln2;
            if (lnp2 == -kInf) return 0.0;
            const double lnp12 = logaddexp(a1 + a2, b1 + b2) - ln2;
            if (lnp12 == -kInf) return 0.0;
            return std::exp(lnp12) * (lnp12 - lnp1 - lnp2);
        };
        const QuadratureResult q = integrate_over_support(ch, theta0, h, inner_tol, 200000);
        if (!q.converged && std::fabs(q.value) > inner_tol * 1e3) inner_failed = true;
        return q.value;
    };

    const Interval sup = ch.support();
    const double center = ch.integration_center(theta0);
    const double scale = ch.output_scale(theta0);
    double gscale = 0.0;
    for (int t = -2; t <= 2; ++t) {
        const double r = center + static_cast<double>(t) * scale;
        if (!sup.contains(r)) continue;
        gscale = std::max(gscale, std::fabs(g(r)));
    }
    gscale = std::max(gscale, 1e-300);

    inner_tol = 1e-5 * gscale;
    inner_failed = false;
    const double outer_tol = 1e-5 * gscale * std::max(scale, 1.0);
    const QuadratureResult q = integrate_over_support(ch, theta0, g, outer_tol, 400000);
    if (!q.converged || inner_failed)
        throw QuadratureError("redundancy_mi: quadrature did not converge", q);
    return std::max(0.0, q.value);
}

}  // namespace wscap
