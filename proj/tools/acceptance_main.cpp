#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "wscap/capacity.hpp"
#include "wscap/channels.hpp"
#include "wscap/fisher.hpp"
#include "wscap/numkit.hpp"
#include "wscap/oracle.hpp"

using namespace wscap;

namespace {

using Fails = std::vector<std::string>;

double rel(double x, double ref) { return std::fabs(x - ref) / std::fabs(ref); }

std::string fmt(double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%.10g", v);
    return b;
}

void expect(Fails& f, bool ok, const std::string& msg) {
    if (!ok) f.push_back(msg);
}

double urand(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// ---- 1: gamma family weak-signal rate against its closed form ----
void gamma_rate(Fails& f) {
    for (const double kappa : {0.75, 1.0, 2.0, 4.5}) {
        const GammaChannel ch(kappa);
        const double theta0 = 27.5 / kappa;
        const double dt = 22.5 / kappa;
        const double expected = (81.0 / 242.0) * kappa;

        const double analytic = c_high_memoryless(*ch.fisher_analytic(theta0), dt).nats;
        expect(f, rel(analytic, expected) <= 1e-9,
               "analytic rate at kappa=" + fmt(kappa) + ": rel err " +
                   fmt(rel(analytic, expected)) + " > 1e-9");

        const double numeric = c_high_memoryless(fisher_scalar(ch, theta0), dt).nats;
        expect(f, rel(numeric, expected) <= 1e-5,
               "quadrature rate at kappa=" + fmt(kappa) + ": rel err " +
                   fmt(rel(numeric, expected)) + " > 1e-5");
    }
}

// ---- 2: Gaussian weak-signal chain at -20 dB ----
void gaussian_chain(Fails& f) {
    const double dt = std::pow(10.0, -20.0 / 20.0);
    const AwgnChannel ch(1.0);

    const double hi = c_high_memoryless(1.0, dt).nats;
    expect(f, hi == 0.5 * (dt * dt),
           "c_high not bit-exact: " + fmt(hi) + " vs " + fmt(0.5 * (dt * dt)));

    const double cb = c_bin(ch, 0.0, dt).nats;
    expect(f, std::fabs(cb - hi) / hi <= 0.01,
           "two-point rate vs c_high: rel gap " + fmt(std::fabs(cb - hi) / hi) + " > 1%");

    const double oracle = exact_awgn_amplitude_capacity(dt, 65, 800);
    expect(f, std::fabs(oracle - cb) / cb <= 0.02,
           "discretized reference vs two-point rate: rel gap " +
               fmt(std::fabs(oracle - cb) / cb) + " > 2%");
}

// ---- 3: two-point rate below the reference and below ln 2 ----
void two_point_bounds(Fails& f) {
    const AwgnChannel ch(1.0);
    for (int snr = -30; snr <= 10; snr += 2) {
        const double dt = std::pow(10.0, static_cast<double>(snr) / 20.0);
        const double cb = c_bin(ch, 0.0, dt).nats;
        const double oracle = exact_awgn_amplitude_capacity(dt, 65, 800);
        expect(f, cb <= oracle + 1e-3,
               "snr_db=" + std::to_string(snr) + ": two-point rate " + fmt(cb) +
                   " above reference " + fmt(oracle) + " + 1e-3");
        expect(f, cb <= std::numbers::ln2,
               "snr_db=" + std::to_string(snr) + ": two-point rate " + fmt(cb) + " above ln 2");
    }
}

// ---- 4: AR(1) numeric block pipeline against the closed form ----
void ar1_pipeline(Fails& f) {
    for (const double rho : {0.1, -0.1, 0.5, -0.5, 0.9, -0.9}) {
        const double closed = ar1_capacity(1.0, rho).nats;
        const double numeric = c_high_memory(ar1_fisher(rho, 2000), 1.0).nats;
        expect(f, rel(numeric, closed) <= 5e-3,
               "rho=" + fmt(rho) + ": n=2000 value " + fmt(numeric) + " vs closed form " +
                   fmt(closed) + ", rel err " + fmt(rel(numeric, closed)) + " > 0.5%");
    }
    const double mid = ar1_capacity(1.0, 0.5).nats;
    expect(f, std::fabs(mid - 1.5) <= 1e-12,
           "ar1_capacity(1, 0.5) = " + fmt(mid) + ", expected 1.5 within 1e-12");
}

// ---- 5: water-filled capacity approaches its small-power value ----
void small_power(Fails& f) {
    const NoiseCovariance cz = ar1_covariance(0.5, 8);
    std::vector<double> ratio;
    for (const double p : {1e-2, 1e-3, 1e-4})
        ratio.push_back(exact_colored_capacity(cz, p).estimate.nats /
                        waterfill_smallP(cz, p).nats);
    expect(f, ratio[2] >= 0.99 && ratio[2] <= 1.0,
           "ratio at P=1e-4 is " + fmt(ratio[2]) + ", expected in [0.99, 1]");
    expect(f, ratio[0] <= ratio[1] && ratio[1] <= ratio[2],
           "ratio not monotone while P shrinks: " + fmt(ratio[0]) + ", " + fmt(ratio[1]) + ", " +
               fmt(ratio[2]));
}

// ---- 6: pairwise redundancy scales like the fourth power ----
void redundancy_scaling(Fails& f) {
    const AwgnChannel ch(1.0);
    std::vector<double> lx, ly;
    double at_002 = 0.0;
    for (const double dt : {0.02, 0.04, 0.08}) {
        const double i = redundancy_mi(ch, 0.0, dt);
        if (!(i > 0.0)) {
            f.push_back("redundancy at delta_theta=" + fmt(dt) + " is " + fmt(i) +
                        ", expected > 0");
            return;
        }
        if (dt == 0.02) at_002 = i;
        lx.push_back(std::log(dt));
        ly.push_back(std::log(i));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(ly.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = num / den;
    expect(f, std::fabs(slope - 4.0) <= 0.1,
           "log-log slope " + fmt(slope) + ", expected 4.0 +- 0.1");

    const double coeff = at_002 / std::pow(0.02, 4);
    expect(f, std::fabs(coeff - 0.5) <= 0.025,
           "quartic coefficient " + fmt(coeff) + ", expected 0.5 +- 5%");
}

// ---- 7: MA(1) inverse-covariance structure and growth ----
void ma1_structure(Fails& f) {
    const std::size_t n = 50;
    const FisherMatrix neg = ma1_fisher(-0.3, n);
    bool all_pos = true;
    for (std::size_t i = 0; i < n && all_pos; ++i)
        for (std::size_t k = 0; k < n; ++k)
            if (!(neg.matrix(i, k) > 0.0)) {
                all_pos = false;
                break;
            }
    expect(f, all_pos, "rho=-0.3: expected every inverse-covariance entry positive");

    const FisherMatrix pos = ma1_fisher(0.3, n);
    bool bands_ok = true;
    for (std::size_t i = 0; i + 1 < n && bands_ok; ++i) {
        if (!(pos.matrix(i, i + 1) < 0.0)) bands_ok = false;
        if (i + 2 < n && !(pos.matrix(i, i + 2) > 0.0)) bands_ok = false;
    }
    expect(f, bands_ok,
           "rho=+0.3: expected first off-diagonal negative and second positive throughout");

    bool monotone = true;
    for (std::size_t k = 0; k + 1 < n; ++k)
        if (std::fabs(pos.matrix(0, k + 1)) > std::fabs(pos.matrix(0, k))) {
            monotone = false;
            f.push_back("rho=+0.3: |J[0][k]| increases from k=" + std::to_string(k) + " (" +
                        fmt(std::fabs(pos.matrix(0, k))) + ") to k+1 (" +
                        fmt(std::fabs(pos.matrix(0, k + 1))) + ")");
            break;
        }
    expect(f, monotone, "rho=+0.3: first-row magnitude profile must be non-increasing");

    const double v42 = c_high_memory(ma1_fisher(0.42, 2000), 1.0).nats;
    const double v30 = c_high_memory(ma1_fisher(0.30, 2000), 1.0).nats;
    expect(f, v42 >= 2.0 * v30,
           "growth check: value " + fmt(v42) + " at rho=0.42 is below twice " + fmt(v30) +
               " at rho=0.30");
}

// ---- 8: semidefiniteness classifier on the boundary pair ----
void psd_boundary(Fails& f) {
    SymMatrix yes(3);
    SymMatrix no(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k) {
            yes.set(i, k, i == k ? 2.0 : -1.0);
            no.set(i, k, i == k ? 1.0 : -1.0);
        }
    expect(f, is_psd(yes), "matrix with eigenvalues {0, 3, 3} must classify as PSD");
    expect(f, !is_psd(no), "matrix with eigenvalues {-1, 2, 2} must classify as not PSD");
}

// ---- 9: property sweeps over densities, inverses, and allocations ----
void property_sweeps(Fails& f) {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);

    const auto run_density = [&](const ScalarChannel& ch, const std::string& name, double tlo,
                                 double thi) {
        for (int t = 0; t < 20; ++t) {
            const double theta = tlo + (thi - tlo) * urand(rng);
            const DensityCheckReport rep = scalar_density_checks(ch, theta);
            expect(f, rep.normalization_residual < 1e-8,
                   name + " theta=" + fmt(theta) + ": normalization residual " +
                       fmt(rep.normalization_residual) + " >= 1e-8");
            expect(f, rep.d_theta_residual < 1e-6,
                   name + " theta=" + fmt(theta) + ": first-derivative residual " +
                       fmt(rep.d_theta_residual) + " >= 1e-6");
            expect(f, rep.d2_theta_residual < 1e-6,
                   name + " theta=" + fmt(theta) + ": second-derivative residual " +
                       fmt(rep.d2_theta_residual) + " >= 1e-6");
        }
    };
    run_density(AwgnChannel(1.0), "awgn(1)", -10.0, 10.0);
    run_density(AwgnChannel(0.04), "awgn(0.04)", -10.0, 10.0);
    run_density(AwgnChannel(27.5), "awgn(27.5)", -10.0, 10.0);
    run_density(GammaChannel(0.75), "gamma(0.75)", 0.5, 40.0);
    run_density(GammaChannel(2.0), "gamma(2)", 0.5, 40.0);
    run_density(GammaChannel(4.5), "gamma(4.5)", 0.5, 40.0);

    // max |J C - I| using whichever factor is tridiagonal.
    const auto band_residual = [](const FisherMatrix& j, const SymMatrix& c, bool j_banded) {
        const std::size_t n = j.size();
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                double s = 0.0;
                const std::size_t center = j_banded ? i : k;
                const std::size_t from = center == 0 ? 0 : center - 1;
                const std::size_t to = center + 1 >= n ? n - 1 : center + 1;
                for (std::size_t m = from; m <= to; ++m) s += j.matrix(i, m) * c(m, k);
                worst = std::max(worst, std::fabs(s - (i == k ? 1.0 : 0.0)));
            }
        return worst;
    };
    for (const double rho : {-0.9, -0.5, -0.1, 0.1, 0.5, 0.9}) {
        const double r = band_residual(ar1_fisher(rho, 2000), ar1_covariance(rho, 2000).matrix,
                                       true);
        expect(f, r <= 1e-8,
               "ar1 rho=" + fmt(rho) + ": inverse residual " + fmt(r) + " > 1e-8");
    }
    for (const double rho : {-0.42, -0.3, -0.1, 0.1, 0.3, 0.42}) {
        const double r = band_residual(ma1_fisher(rho, 2000), ma1_covariance(rho, 2000).matrix,
                                       false);
        expect(f, r <= 1e-6,
               "ma1 rho=" + fmt(rho) + ": inverse residual " + fmt(r) + " > 1e-6");
    }

    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng() % 16);
        std::vector<double> lambda(n);
        for (double& l : lambda) l = std::exp(-3.0 + 6.0 * urand(rng));
        const double p = std::exp(-6.0 + 8.0 * urand(rng));
        const WaterFilling wf = water_filling(lambda, p);

        double total = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double m = wf.allocations[i];
            if (!(m >= 0.0)) ok = false;
            total += m;
            if (m > 0.0 && std::fabs(lambda[i] + m - wf.level) > 1e-9 * wf.level) ok = false;
            if (m == 0.0 && lambda[i] < wf.level * (1.0 - 1e-12)) ok = false;
        }
        const double budget = static_cast<double>(n) * p;
        if (std::fabs(total - budget) > 1e-9 * budget) ok = false;
        expect(f, ok,
               "allocation optimality violated on trial " + std::to_string(t) + " (n=" +
                   std::to_string(n) + ", p=" + fmt(p) + ")");
        if (!ok) break;
    }
}

struct Criterion {
    int id;
    const char* title;
    double budget_seconds;  // 0 = no budget
    void (*run)(Fails&);
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "gamma family weak-signal rate matches its closed form", 5.0, gamma_rate},
        {2, "Gaussian weak-signal chain agrees at -20 dB", 60.0, gaussian_chain},
        {3, "two-point rate stays below the reference and ln 2", 0.0, two_point_bounds},
        {4, "AR(1) numeric block pipeline matches the closed form", 30.0, ar1_pipeline},
        {5, "water-filled capacity approaches its small-power value", 1.0, small_power},
        {6, "pairwise redundancy scales like the fourth power", 30.0, redundancy_scaling},
        {7, "MA(1) inverse-covariance structure and growth", 60.0, ma1_structure},
        {8, "semidefiniteness classifier splits the boundary pair", 0.0, psd_boundary},
        {9, "property sweeps: densities, inverses, allocations", 300.0, property_sweeps},
    };

    int failed = 0;
    double total_seconds = 0.0;
    for (const Criterion& c : criteria) {
        Fails fails;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(fails);
        } catch (const std::exception& e) {
            fails.push_back(std::string("unexpected exception: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        total_seconds += seconds;
        if (c.budget_seconds > 0.0 && seconds > c.budget_seconds)
            fails.push_back("exceeded time budget: " + fmt(seconds) + "s > " +
                            fmt(c.budget_seconds) + "s");

        std::string line = fails.empty() ? "[PASS]" : "[FAIL]";
        line += " " + std::to_string(c.id) + ": " + c.title + " (" + fmt(seconds) + "s";
        if (c.budget_seconds > 0.0) line += ", budget " + fmt(c.budget_seconds) + "s";
        line += ")";
        std::printf("%s\n", line.c_str());
        for (const std::string& msg : fails) std::printf("       - %s\n", msg.c_str());
        if (!fails.empty()) ++failed;
    }

    std::printf("%d/%zu criteria passed (total %.1fs)\n",
                static_cast<int>(criteria.size()) - failed, criteria.size(), total_seconds);
    return failed;
}
