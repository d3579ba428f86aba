#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>

#include "doctest.h"
#include "wscap/channels.hpp"
#include "wscap/numkit.hpp"

using namespace wscap;

namespace {

double urand(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Writes `content` to a unique file and removes it when the test ends.
class TempFile {
  public:
    explicit TempFile(const std::string& content) {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 ("wscap_test_" + std::to_string(++counter) + "_" +
                  std::to_string(::getpid()) + ".csv"))
                    .string();
        std::ofstream out(path_);
        out << content;
    }
    ~TempFile() { std::filesystem::remove(path_); }
    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

// Density family with no analytic score override, to exercise the fallback.
class ShiftedLaplace : public ScalarChannel {
  public:
    double log_density(double r, double theta) const override {
        return -std::fabs(r - theta) - std::log(2.0);
    }
    Interval support() const override {
        return {-std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity()};
    }
    Interval theta_domain() const override { return support(); }
};

}  // namespace

TEST_CASE("autoregressive covariance entries decay geometrically") {
    const NoiseCovariance cz = ar1_covariance(0.5, 3);
    CHECK(cz.model == NoiseModel::ar1);
    CHECK(cz.rho == 0.5);
    CHECK(cz.matrix(0, 0) == 1.0);
    CHECK(cz.matrix(0, 1) == 0.5);
    CHECK(cz.matrix(0, 2) == 0.25);
    CHECK(cz.matrix(1, 2) == 0.5);
    CHECK(cz.matrix(2, 2) == 1.0);

    CHECK_THROWS_AS(ar1_covariance(1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(ar1_covariance(-1.5, 4), std::invalid_argument);
}

TEST_CASE("moving-average covariance is tridiagonal with the literal scaling") {
    const NoiseCovariance cz = ma1_covariance(-0.4, 3);
    CHECK(cz.model == NoiseModel::ma1);
    CHECK(cz.gamma == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(cz.matrix(0, 0) == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(cz.matrix(0, 1) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(cz.matrix(0, 2) == 0.0);

    // The implied lag-1 correlation reproduces rho.
    CHECK(cz.matrix(0, 1) / cz.matrix(0, 0) == doctest::Approx(-0.4).epsilon(1e-12));
}

TEST_CASE("moving-average root: sign, zero, and refusal") {
    CHECK(rho_to_gamma(0.0) == 0.0);
    CHECK(rho_to_gamma(-0.4) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rho_to_gamma(0.4) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK_THROWS_AS(rho_to_gamma(0.5), std::invalid_argument);
    CHECK_THROWS_AS(rho_to_gamma(-0.62), std::invalid_argument);
}

TEST_CASE("moving-average root round-trips across the admissible range") {
    for (int i = 0; i < 99; ++i) {
        const double rho = -0.495 + 0.01 * static_cast<double>(i);
        const double gamma = rho_to_gamma(rho);
        CHECK(std::fabs(gamma) < 1.0);
        const double back = -gamma / (1.0 + gamma * gamma);
        CHECK(std::fabs(back - rho) <= 1e-12);
    }
}

TEST_CASE("moving-average covariance approaches singularity near the boundary") {
    double prev = std::numeric_limits<double>::infinity();
    for (const double rho : {0.0, 0.2, 0.4, 0.49}) {
        const NoiseCovariance cz = ma1_covariance(rho, 100);
        const double min_eig = sym_eigen(cz.matrix).values.front();
        CHECK(min_eig > 0.0);
        CHECK(min_eig < prev + 1e-15);
        prev = min_eig;
    }
}

TEST_CASE("density regularity residuals at fixed parameters") {
    const DensityCheckReport awgn = scalar_density_checks(AwgnChannel(1.0), 0.7);
    CHECK(awgn.normalization_residual < 1e-8);
    CHECK(awgn.d_theta_residual < 1e-8);
    CHECK(awgn.d2_theta_residual < 1e-8);

    const DensityCheckReport gamma = scalar_density_checks(GammaChannel(2.0), 3.0);
    CHECK(gamma.normalization_residual < 1e-8);
    CHECK(gamma.d_theta_residual < 1e-6);
    CHECK(gamma.d2_theta_residual < 1e-6);
}

TEST_CASE("density normalization holds across random parameters") {
    std::mt19937_64 rng(7);
    const AwgnChannel awgn(1.0);
    const GammaChannel gamma(2.0);
    for (int t = 0; t < 20; ++t) {
        const double ta = -10.0 + 20.0 * urand(rng);
        CHECK(scalar_density_checks(awgn, ta).normalization_residual < 1e-8);
        const double tg = 0.5 + 39.5 * urand(rng);
        CHECK(scalar_density_checks(gamma, tg).normalization_residual < 1e-8);
    }
}

TEST_CASE("density checks refuse parameters at the domain edge") {
    CHECK_THROWS_AS(scalar_density_checks(GammaChannel(1.0), 1e-6), std::invalid_argument);
}

TEST_CASE("analytic scores match the density slope") {
    const AwgnChannel awgn(2.0);
    const GammaChannel gamma(3.0);
    for (const double r : {-1.0, 0.3, 2.0}) {
        const double fd = (awgn.log_density(r, 0.5 + 1e-6) - awgn.log_density(r, 0.5 - 1e-6)) /
                          2e-6;
        CHECK(awgn.score(r, 0.5) == doctest::Approx(fd).epsilon(1e-6));
    }
    for (const double r : {0.5, 2.0, 9.0}) {
        const double fd =
            (gamma.log_density(r, 2.0 + 1e-6) - gamma.log_density(r, 2.0 - 1e-6)) / 2e-6;
        CHECK(gamma.score(r, 2.0) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("score fallback differentiates the log-density numerically") {
    const ShiftedLaplace ch;
    // Away from the kink the slope of -|r - theta| is sign(r - theta).
    CHECK(ch.score(3.0, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(ch.score(-2.0, 1.0) == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("covariance loader round-trips a valid file") {
    const TempFile f("1.0, 0.5, 0.25\n0.5, 1.0, 0.5\n0.25, 0.5, 1.0\n");
    const NoiseCovariance cz = load_covariance_csv(f.path());
    CHECK(cz.model == NoiseModel::custom);
    CHECK(cz.size() == 3);
    CHECK(cz.rho == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cz.matrix(0, 2) == 0.25);
    CHECK(std::isnan(cz.gamma));
}

TEST_CASE("covariance loader rejects malformed input") {
    CHECK_THROWS(load_covariance_csv("/nonexistent/definitely_missing.csv"));

    const TempFile ragged("1.0, 0.5\n0.5\n");
    CHECK_THROWS_AS(load_covariance_csv(ragged.path()), std::invalid_argument);

    const TempFile rect("1.0, 0.5\n0.5, 1.0\n0.1, 0.1\n");
    CHECK_THROWS_AS(load_covariance_csv(rect.path()), std::invalid_argument);

    const TempFile asym("1.0, 0.5\n0.4, 1.0\n");
    CHECK_THROWS_AS(load_covariance_csv(asym.path()), std::invalid_argument);

    const TempFile drift("1.0, 0.1\n0.1, 2.0\n");
    CHECK_THROWS_AS(load_covariance_csv(drift.path()), std::invalid_argument);

    const TempFile indefinite("1.0, 2.0\n2.0, 1.0\n");
    CHECK_THROWS_AS(load_covariance_csv(indefinite.path()), std::invalid_argument);

    const TempFile junk("1.0, 0.5x\n0.5, 1.0\n");
    CHECK_THROWS_AS(load_covariance_csv(junk.path()), std::invalid_argument);

    const TempFile empty("");
    CHECK_THROWS_AS(load_covariance_csv(empty.path()), std::invalid_argument);
}

TEST_CASE("support dispatch covers all boundedness cases") {
    const AwgnChannel awgn(1.0);
    const QuadratureResult whole =
        integrate_over_support(awgn, 2.0, [&](double r) { return awgn.density(r, 2.0); }, 1e-11);
    CHECK(whole.converged);
    CHECK(std::fabs(whole.value - 1.0) <= 1e-9);

    const GammaChannel gamma(1.5);
    const QuadratureResult half = integrate_over_support(
        gamma, 2.0, [&](double r) { return gamma.density(r, 2.0); }, 1e-11);
    CHECK(half.converged);
    CHECK(std::fabs(half.value - 1.0) <= 1e-9);
}
