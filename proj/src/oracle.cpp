#include "wscap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "wscap/capacity.hpp"
#include "wscap/numkit.hpp"

namespace wscap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Mass of the conditional density inside [lo, hi].
double window_mass(const ScalarChannel& ch, double theta, double lo, double hi) {
    auto f = [&](double r) { return ch.density(r, theta); };
    return integrate(f, lo, hi, 1e-12).value;
}

}  // namespace

DiscreteInputChannel discretize(const ScalarChannel& ch, const std::vector<double>& inputs,
                                std::size_t k, double coverage) {
    if (inputs.size() < 2) throw std::invalid_argument("discretize: need at least 2 input letters");
    if (k < 2) throw std::invalid_argument("discretize: need at least 2 output bins");
    if (!(coverage > 0.0 && coverage < 1.0))
        throw std::invalid_argument("discretize: coverage must lie in (0, 1)");
    for (double theta : inputs)
        if (!ch.theta_domain().contains(theta))
            throw std::invalid_argument("discretize: input letter outside the theta domain");

    const Interval sup = ch.support();
    double lo = kInf;
    double hi = -kInf;
    for (double theta : inputs) {
        const double center = ch.integration_center(theta);
        double half = 8.0 * ch.output_scale(theta);
        double wlo = 0.0;
        double whi = 0.0;
        bool covered = false;
        for (int doubling = 0; doubling <= 60; ++doubling) {
            wlo = center - half;
            whi = center + half;
            if (sup.bounded_below()) wlo = std::max(wlo, sup.lower);
            if (sup.bounded_above()) whi = std::min(whi, sup.upper);
            if (window_mass(ch, theta, wlo, whi) >= coverage) {
                covered = true;
                break;
            }
            half *= 2.0;
        }
        if (!covered)
            throw std::invalid_argument("discretize: could not capture the requested coverage");
        lo = std::min(lo, wlo);
        hi = std::max(hi, whi);
    }

    DiscreteInputChannel dc;
    dc.inputs = inputs;
    dc.bin_edges.resize(k + 1);
    const double width = hi - lo;
    for (std::size_t i = 0; i <= k; ++i)
        dc.bin_edges[i] = lo + width * static_cast<double>(i) / static_cast<double>(k);
    dc.bin_edges.front() = lo;
    dc.bin_edges.back() = hi;

    dc.transition.assign(inputs.size(), std::vector<double>(k, 0.0));
    dc.min_row_coverage = 1.0;
    for (std::size_t j = 0; j < inputs.size(); ++j) {
        auto f = [&](double r) { return ch.density(r, inputs[j]); };
        double row_sum = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            const double v =
                integrate(f, dc.bin_edges[c], dc.bin_edges[c + 1], 1e-13, 4000).value;
            dc.transition[j][c] = std::max(0.0, v);
            row_sum += dc.transition[j][c];
        }
        if (!(row_sum > 0.0))
            throw std::invalid_argument("discretize: an input letter has no mass in the window");
        dc.min_row_coverage = std::min(dc.min_row_coverage, row_sum);
        for (double& w : dc.transition[j]) w /= row_sum;
    }
    return dc;
}

BlahutArimotoResult blahut_arimoto(const DiscreteInputChannel& dc, double tol,
                                   std::size_t max_iter) {
    const std::size_t m = dc.input_count();
    if (m == 0) throw std::invalid_argument("blahut_arimoto: no input letters");
    if (dc.transition.size() != m)
        throw std::invalid_argument("blahut_arimoto: transition row count mismatch");
    const std::size_t k = dc.transition.front().size();
    if (k == 0) throw std::invalid_argument("blahut_arimoto: no output bins");
    if (!(tol > 0.0)) throw std::invalid_argument("blahut_arimoto: tol must be > 0");
    if (max_iter == 0) throw std::invalid_argument("blahut_arimoto: max_iter must be >= 1");

    for (const auto& row : dc.transition) {
        if (row.size() != k)
            throw std::invalid_argument("blahut_arimoto: ragged transition matrix");
        double s = 0.0;
        for (double w : row) {
            if (!(w >= 0.0))
                throw std::invalid_argument("blahut_arimoto: negative transition probability");
            s += w;
        }
        if (std::fabs(s - 1.0) > 1e-9)
            throw std::invalid_argument("blahut_arimoto: transition row does not sum to 1");
    }

    std::vector<double> lnw(m * k, -kInf);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t c = 0; c < k; ++c)
            if (dc.transition[j][c] > 0.0) lnw[j * k + c] = std::log(dc.transition[j][c]);

    BlahutArimotoResult res;
    res.input_distribution.assign(m, 1.0 / static_cast<double>(m));
    std::vector<double>& p = res.input_distribution;
    std::vector<double> q(k), lnq(k), d(m);

    for (std::size_t it = 1; it <= max_iter; ++it) {
        std::fill(q.begin(), q.end(), 0.0);
        for (std::size_t j = 0; j < m; ++j) {
            if (p[j] == 0.0) continue;
            const auto& row = dc.transition[j];
            for (std::size_t c = 0; c < k; ++c) q[c] += p[j] * row[c];
        }
        for (std::size_t c = 0; c < k; ++c) lnq[c] = q[c] > 0.0 ? std::log(q[c]) : -kInf;

        double lower = 0.0;
        double upper = -kInf;
        for (std::size_t j = 0; j < m; ++j) {
            const auto& row = dc.transition[j];
            double dj = 0.0;
            for (std::size_t c = 0; c < k; ++c)
                if (row[c] > 0.0) dj += row[c] * (lnw[j * k + c] - lnq[c]);
            d[j] = dj;
            lower += p[j] * dj;
            upper = std::max(upper, dj);
        }

        res.iterations = it;
        res.lower_bound = lower;
        res.upper_bound = upper;
        if (upper - lower < tol) {
            res.converged = true;
            break;
        }

        double norm = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            p[j] *= std::exp(d[j] - upper);
            norm += p[j];
        }
        for (double& pj : p) pj /= norm;
    }

    res.capacity_nats = res.lower_bound;
    res.effective_support = static_cast<std::size_t>(
        std::count_if(p.begin(), p.end(), [](double pj) { return pj > 1e-6; }));
    return res;
}

BlahutArimotoResult awgn_amplitude_oracle(double delta_theta, std::size_t m, std::size_t k) {
    if (!(delta_theta > 0.0))
        throw std::invalid_argument("awgn_amplitude_oracle: delta_theta must be > 0");
    if (m < 3 || m % 2 == 0)
        throw std::invalid_argument("awgn_amplitude_oracle: letter count must be odd and >= 3");

    AwgnChannel ch(1.0);
    std::vector<double> inputs(m);
    for (std::size_t i = 0; i < m; ++i)
        inputs[i] = -delta_theta +
                    2.0 * delta_theta * static_cast<double>(i) / static_cast<double>(m - 1);

    return blahut_arimoto(discretize(ch, inputs, k));
}

double exact_awgn_amplitude_capacity(double delta_theta, std::size_t m, std::size_t k) {
    return awgn_amplitude_oracle(delta_theta, m, k).capacity_nats;
}

double mi_discrete_input(const ScalarChannel& ch, const std::vector<double>& support,
                         const std::vector<double>& weights) {
    if (support.empty()) throw std::invalid_argument("mi_discrete_input: empty support");
    if (support.size() != weights.size())
        throw std::invalid_argument("mi_discrete_input: support/weights size mismatch");

    double wsum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("mi_discrete_input: negative weight");
        wsum += w;
    }
    if (!(wsum > 0.0)) throw std::invalid_argument("mi_discrete_input: weights sum to zero");

    std::vector<double> theta, w, lnwgt;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (weights[i] == 0.0) continue;
        if (!ch.theta_domain().contains(support[i]))
            throw std::invalid_argument("mi_discrete_input: letter outside the theta domain");
        theta.push_back(support[i]);
        w.push_back(weights[i] / wsum);
        lnwgt.push_back(std::log(weights[i] / wsum));
    }
    const std::size_t m = theta.size();
    if (m <= 1) return 0.0;

    auto integrand = [&](double r) {
        double lmax = -kInf;
        std::vector<double> l(m);
        for (std::size_t j = 0; j < m; ++j) {
            l[j] = ch.log_density(r, theta[j]);
            lmax = std::max(lmax, lnwgt[j] + l[j]);
        }
        if (lmax == -kInf) return 0.0;
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            if (l[j] != -kInf) s += std::exp(lnwgt[j] + l[j] - lmax);
        const double lmix = lmax + std::log(s);
        double val = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            if (l[j] != -kInf) val += w[j] * std::exp(l[j]) * (l[j] - lmix);
        return val;
    };

    double theta_bar = 0.0;
    for (std::size_t j = 0; j < m; ++j) theta_bar += w[j] * theta[j];

    const QuadratureResult q = integrate_over_support(ch, theta_bar, integrand, 1e-12);
    if (!q.converged)
        throw QuadratureError("mi_discrete_input: quadrature did not converge", q);
    return std::max(0.0, q.value);
}

}  // namespace wscap
