#include "wscap/fisher.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace wscap {

double fisher_scalar(const ScalarChannel& ch, double theta0, QuadratureResult& diag,
                     double tol) {
    if (!ch.theta_domain().contains(theta0))
        throw std::invalid_argument("fisher_scalar: theta0 outside domain");

    auto integrand = [&](double r) {
        const double lp = ch.log_density(r, theta0);
        if (lp == -std::numeric_limits<double>::infinity()) return 0.0;
        const double s = ch.score(r, theta0);
        return s * s * std::exp(lp);
    };
    diag = integrate_over_support(ch, theta0, integrand, tol);
    return diag.value;
}

double fisher_scalar(const ScalarChannel& ch, double theta0, double tol) {
    QuadratureResult diag;
    const double j = fisher_scalar(ch, theta0, diag, tol);
    if (!diag.converged)
        throw QuadratureError("fisher_scalar: quadrature did not converge", diag);
    if (j < 0.0)
        throw QuadratureError("fisher_scalar: negative value signals numerical breakdown",
                              diag);
    return j;
}

FisherMatrix fisher_gaussian_vector(const NoiseCovariance& cz) {
    const std::size_t n = cz.size();
    const EigenDecomposition eig = sym_eigen(cz.matrix);
    if (eig.values.front() <= 0.0)
        throw std::invalid_argument("fisher_gaussian_vector: covariance is not positive definite");

    const double cond = eig.values.back() / eig.values.front();
    if (cond > 1e12)
        throw IllConditionedError("fisher_gaussian_vector: condition estimate " +
                                      std::to_string(cond) + " exceeds 1e12",
                                  cond);

    FisherMatrix j{SymMatrix(n), 0.0, cond};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i; k < n; ++k) {
            double s = 0.0;
            for (std::size_t m = 0; m < n; ++m)
                s += eig.vector_entry(i, m) * eig.vector_entry(k, m) / eig.values[m];
            j.matrix.set(i, k, s);
        }
    }
    return j;
}

FisherMatrix ar1_fisher(double rho, std::size_t n) {
    if (!(std::fabs(rho) < 1.0)) throw std::invalid_argument("ar1_fisher: requires |rho| < 1");
    if (n < 2) throw std::invalid_argument("ar1_fisher: requires n >= 2");

    const double f = 1.0 / (1.0 - rho * rho);
    const double interior = (1.0 + rho * rho) * f;
    const double off = -rho * f;

    const double a = std::fabs(rho);
    const double cond = ((1.0 + a) / (1.0 - a)) * ((1.0 + a) / (1.0 - a));

    FisherMatrix j{SymMatrix(n), 0.0, cond};
    for (std::size_t i = 0; i < n; ++i) {
        j.matrix.set(i, i, (i == 0 || i + 1 == n) ? f : interior);
        if (i + 1 < n) j.matrix.set(i, i + 1, off);
    }
    return j;
}

FisherMatrix ma1_fisher(double rho, std::size_t n) {
    if (n < 2) throw std::invalid_argument("ma1_fisher: requires n >= 2");
    const double gamma = rho_to_gamma(rho);
    const double g = std::fabs(gamma);

    // Exact Toeplitz-tridiagonal eigenvalue bounds for the covariance:
    // lambda_k = 1 + gamma^2 - 2|gamma| cos(k pi/(n+1)).
    const double c1 = std::cos(M_PI / static_cast<double>(n + 1));
    const double lo = 1.0 + g * g - 2.0 * g * c1;
    const double hi = 1.0 + g * g + 2.0 * g * c1;
    const double cond = hi / lo;
    if (!(cond <= 1e12))
        throw IllConditionedError("ma1_fisher: condition estimate " + std::to_string(cond) +
                                      " exceeds 1e12 at rho=" + std::to_string(rho) +
                                      ", n=" + std::to_string(n),
                                  cond);

    TridiagMatrix t;
    t.diag.assign(n, 1.0 + gamma * gamma);
    t.offdiag.assign(n - 1, -gamma);
    const TridiagFactorization fact = tridiag_factor(t);

    std::vector<std::vector<double>> cols(n);
    std::vector<double> e(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        e.assign(n, 0.0);
        e[k] = 1.0;
        fact.solve_inplace(e);
        cols[k] = e;
    }

    FisherMatrix j{SymMatrix(n), 0.0, cond};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i; k < n; ++k)
            j.matrix.set(i, k, 0.5 * (cols[k][i] + cols[i][k]));
    return j;
}

}  // namespace wscap
