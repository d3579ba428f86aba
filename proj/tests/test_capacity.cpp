#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "wscap/capacity.hpp"
#include "wscap/channels.hpp"
#include "wscap/fisher.hpp"
#include "wscap/numkit.hpp"

using namespace wscap;

namespace {

double urand(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

FisherMatrix diagonal_fisher(const std::vector<double>& d) {
    SymMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
    return {m, 0.0, 1.0};
}

}  // namespace

TEST_CASE("gaussian channel capacity closed form") {
    const CapacityEstimate unity = shannon_awgn(1.0, 1.0);
    CHECK(unity.nats == doctest::Approx(0.5 * std::numbers::ln2).epsilon(1e-15));
    CHECK(unity.method == CapacityMethod::exact_awgn);

    const CapacityEstimate two_bits = shannon_awgn(3.0, 1.0);
    CHECK(two_bits.bits() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(shannon_awgn(0.0, 1.0).nats == 0.0);
    CHECK_THROWS_AS(shannon_awgn(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(shannon_awgn(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("weak-signal scalar estimate is the literal quadratic") {
    const CapacityEstimate e = c_high_memoryless(1.0, 0.1);
    CHECK(e.nats == 0.5 * (0.1 * 0.1) * 1.0);
    CHECK(e.method == CapacityMethod::high);
    CHECK(c_high_memoryless(0.0, 0.3).nats == 0.0);
    CHECK_THROWS_AS(c_high_memoryless(-1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(c_high_memoryless(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("weak-signal trace functional") {
    SymMatrix j(2);
    j.set(0, 0, 2.0);
    j.set(1, 1, 4.0);
    SymMatrix c(2);
    c.set(0, 0, 0.5);
    c.set(1, 1, 0.25);
    const double mi = mi_weak({j, 0.0, 1.0}, {c, 0.5, false});
    CHECK(mi == doctest::Approx(1.0).epsilon(1e-15));

    SymMatrix wrong(3);
    wrong.set(0, 0, 1.0);
    CHECK_THROWS_AS(mi_weak({j, 0.0, 1.0}, {wrong, 1.0, false}), std::invalid_argument);
}

TEST_CASE("sign-matched input covariance") {
    const InputCovariance diag = optimal_covariance(diagonal_fisher({1.0, 2.0, 3.0}), 2.0);
    CHECK(diag.sigma2 == 2.0);
    CHECK(diag.matrix(0, 0) == 2.0);
    CHECK(diag.matrix(0, 1) == 0.0);
    CHECK_FALSE(diag.psd_violation);

    // Alternating tridiagonal sign pattern cannot be completed to a PSD matrix.
    const InputCovariance ar = optimal_covariance(ar1_fisher(0.5, 6), 1.0);
    CHECK(ar.psd_violation);
    CHECK(ar.matrix(0, 1) < 0.0);
    CHECK(std::fabs(ar.matrix(0, 1)) < ar.matrix(0, 0));

    // An all-positive pattern is within a hair of the all-ones matrix and stays PSD.
    const InputCovariance ma = optimal_covariance(ma1_fisher(-0.3, 6), 1.0);
    CHECK_FALSE(ma.psd_violation);
    CHECK(ma.matrix(0, 5) > 0.0);

    CHECK_THROWS_AS(optimal_covariance(ar1_fisher(0.5, 3), 0.0), std::invalid_argument);
}

TEST_CASE("autoregressive per-use rate and its maximum") {
    CHECK(ar1_mi_per_use(1.0, 0.5, 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(ar1_mi_per_use(1.0, 0.5, -1.0) == doctest::Approx(1.5).epsilon(1e-15));

    const CapacityEstimate cap = ar1_capacity(1.0, 0.5);
    CHECK(cap.nats == 1.5);
    CHECK(cap.method == CapacityMethod::high);
    for (double c = -1.0; c <= 1.0; c += 0.125)
        CHECK(ar1_mi_per_use(1.0, 0.5, c) <= cap.nats + 1e-15);

    // The capacity depends on the correlation only through its magnitude.
    CHECK(ar1_capacity(0.7, -0.3).nats == ar1_capacity(0.7, 0.3).nats);

    CHECK_THROWS_AS(ar1_mi_per_use(1.0, 0.5, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(ar1_mi_per_use(0.0, 0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ar1_capacity(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("per-block trace rate approaches the stationary rate") {
    const double rho = 0.5;
    const std::size_t n = 400;
    const FisherMatrix j = ar1_fisher(rho, n);
    SymMatrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
        c.set(i, i, 1.0);
        if (i + 1 < n) c.set(i, i + 1, -1.0);
    }
    const double per_use = mi_weak(j, {c, 1.0, false}) / static_cast<double>(n);
    CHECK(std::fabs(per_use - ar1_mi_per_use(1.0, rho, -1.0)) < 3.0 / static_cast<double>(n));
}

TEST_CASE("absolute-sum estimate for correlated noise") {
    const double rho = 0.5;
    const CapacityEstimate ar = c_high_memory(ar1_fisher(rho, 200), 0.1);
    // Interior rows contribute (1 + |rho|)^2 / (1 - rho^2) = (1 + |rho|) / (1 - |rho|).
    CHECK(ar.nats == doctest::Approx(0.5 * 0.01 * 3.0).epsilon(0.01));
    CHECK(ar.method == CapacityMethod::high);
    CHECK(ar.diagnostics.psd_violation);
    CHECK_FALSE(ar.diagnostics.ill_conditioned);

    const CapacityEstimate ma = c_high_memory(ma1_fisher(-0.3, 50), 0.1);
    CHECK(ma.nats > 0.0);
    CHECK_FALSE(ma.diagnostics.psd_violation);

    CHECK_THROWS_AS(c_high_memory(ar1_fisher(0.5, 8), -1.0), std::invalid_argument);
}

TEST_CASE("water filling on a two-level spectrum") {
    const WaterFilling low = water_filling({1.0, 3.0}, 1.0);
    CHECK(low.level == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(low.allocations[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(low.allocations[1] == 0.0);

    const WaterFilling high = water_filling({1.0, 3.0}, 3.0);
    CHECK(high.level == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(high.allocations[0] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(high.allocations[1] == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(water_filling({}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(water_filling({0.0, 1.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(water_filling({1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("water filling satisfies the stationarity conditions") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng() % 8;
        std::vector<double> lam(n);
        for (double& l : lam) l = std::exp(-2.0 + 4.0 * urand(rng));
        const double p = std::exp(-4.0 + 6.0 * urand(rng));
        const WaterFilling w = water_filling(lam, p);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(w.allocations[i] >= 0.0);
            if (w.allocations[i] > 0.0)
                CHECK(std::fabs(lam[i] + w.allocations[i] - w.level) <= 1e-9 * w.level);
            else
                CHECK(lam[i] >= w.level * (1.0 - 1e-12));
            total += w.allocations[i];
        }
        const double budget = static_cast<double>(n) * p;
        CHECK(std::fabs(total - budget) <= 1e-9 * budget);
    }
}

TEST_CASE("colored capacity degenerates to the flat formula on white noise") {
    SymMatrix eye(4);
    for (std::size_t i = 0; i < 4; ++i) eye.set(i, i, 1.0);
    const ColoredCapacity cc = exact_colored_capacity({eye, NoiseModel::custom, 0.0, 0.0}, 0.7);
    CHECK(cc.estimate.nats == doctest::Approx(shannon_awgn(0.7, 1.0).nats).epsilon(1e-12));
    CHECK(cc.estimate.method == CapacityMethod::waterfill);
    double trace = 0.0;
    for (std::size_t i = 0; i < 4; ++i) trace += cc.input_covariance(i, i);
    CHECK(trace / 4.0 == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("colored capacity exploits the noise spectrum") {
    const ColoredCapacity cc = exact_colored_capacity(ar1_covariance(0.5, 50), 1.0);
    CHECK(cc.estimate.nats >= shannon_awgn(1.0, 1.0).nats - 1e-12);
    CHECK(cc.water.level > 0.0);
    CHECK(cc.water.allocations.size() == 50);
    double trace = 0.0;
    for (std::size_t i = 0; i < 50; ++i) trace += cc.input_covariance(i, i);
    CHECK(trace / 50.0 == doctest::Approx(1.0).epsilon(1e-10));

    SymMatrix bad(2);
    bad.set(0, 0, 1.0);
    bad.set(1, 1, 1.0);
    bad.set(0, 1, 2.0);
    CHECK_THROWS_AS(exact_colored_capacity({bad, NoiseModel::custom, 2.0, 0.0}, 1.0),
                    std::invalid_argument);
}

TEST_CASE("linearized water-filling rate brackets the exact one at small power") {
    SymMatrix eye(3);
    for (std::size_t i = 0; i < 3; ++i) eye.set(i, i, 1.0);
    const NoiseCovariance white{eye, NoiseModel::custom, 0.0, 0.0};
    CHECK(waterfill_smallP(white, 1e-3).nats == doctest::Approx(0.5e-3).epsilon(1e-12));
    CHECK(waterfill_smallP(white, 1e-3).method == CapacityMethod::waterfill_small_p);

    const NoiseCovariance cz = ar1_covariance(0.5, 6);
    double prev_ratio = 0.0;
    for (const double p : {1e-2, 1e-4}) {
        const double lin = waterfill_smallP(cz, p).nats;
        const double exact = exact_colored_capacity(cz, p).estimate.nats;
        CHECK(lin >= exact);
        const double ratio = exact / lin;
        CHECK(ratio > prev_ratio);
        prev_ratio = ratio;
    }
    CHECK(prev_ratio > 0.999);
}

TEST_CASE("two-point rate: saturation, weak limit, and guards") {
    const AwgnChannel unit(1.0);

    const CapacityEstimate zero = c_bin(unit, 0.0, 0.0);
    CHECK(zero.nats == 0.0);
    CHECK(zero.method == CapacityMethod::bin);

    const CapacityEstimate far = c_bin(unit, 0.0, 6.0);
    CHECK(far.nats <= std::numbers::ln2 + 1e-12);
    CHECK(far.nats == doctest::Approx(std::numbers::ln2).epsilon(1e-6));

    const CapacityEstimate weak = c_bin(unit, 0.0, 0.05);
    const double quadratic = c_high_memoryless(1.0, 0.05).nats;
    CHECK(weak.nats < quadratic);
    CHECK(weak.nats == doctest::Approx(quadratic).epsilon(5e-3));

    const GammaChannel gamma(2.0);
    const CapacityEstimate skew = c_bin(gamma, 10.0, 0.5);
    CHECK(skew.nats == doctest::Approx(c_high_memoryless(0.02, 0.5).nats).epsilon(1e-2));

    CHECK_THROWS_AS(c_bin(gamma, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(c_bin(unit, 0.0, -0.1), std::invalid_argument);
}

TEST_CASE("range-limited rate follows the root-information integral") {
    const AwgnChannel unit(1.0);
    const double half_log_2pie = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);

    CHECK(c_low(unit, -3.0, 3.0).nats ==
          doctest::Approx(std::log(6.0) - half_log_2pie).epsilon(1e-9));
    CHECK(c_low(unit, -3.0, 3.0).method == CapacityMethod::low);

    // The estimate changes sign when the range crosses sqrt(2 pi e).
    const double a = 0.5 * std::sqrt(2.0 * std::numbers::pi * std::numbers::e);
    CHECK(std::fabs(c_low(unit, -a, a).nats) <= 1e-9);
    CHECK(c_low(unit, -1.0, 1.0).nats < 0.0);

    const GammaChannel gamma(2.0);
    const double expected = std::log(std::sqrt(2.0) * std::log(10.0)) - half_log_2pie;
    CHECK(c_low(gamma, 2.5, 25.0).nats == doctest::Approx(expected).epsilon(1e-9));

    CHECK_THROWS_AS(c_low(unit, 3.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(c_low(gamma, -1.0, 5.0), std::invalid_argument);
}

TEST_CASE("pair-rate overlap grows with the fourth power of the offset") {
    const AwgnChannel unit(1.0);
    CHECK(redundancy_mi(unit, 0.0, 0.0) == 0.0);

    const double i2 = redundancy_mi(unit, 0.0, 0.02);
    const double i4 = redundancy_mi(unit, 0.0, 0.04);
    CHECK(i2 > 0.0);
    CHECK(i4 > i2);
    CHECK(i4 / i2 == doctest::Approx(16.0).epsilon(0.02));
    CHECK(i2 == doctest::Approx(0.5 * std::pow(0.02, 4)).epsilon(0.05));

    CHECK_THROWS_AS(redundancy_mi(GammaChannel(2.0), 1.0, 2.0), std::invalid_argument);
}

TEST_CASE("input constraint factories validate their arguments") {
    const InputConstraint amp = InputConstraint::amplitude(0.3, 0.1);
    CHECK(amp.theta0 == 0.3);
    CHECK(amp.delta_theta == 0.1);
    const InputConstraint pow = InputConstraint::power_budget(2.0, 1.5);
    CHECK(pow.power == 2.0);
    CHECK(pow.theta0 == 1.5);
    CHECK(pow.kind == InputConstraint::Kind::power);
    CHECK_THROWS_AS(InputConstraint::amplitude(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(InputConstraint::power_budget(-1.0), std::invalid_argument);
}
