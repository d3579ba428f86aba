#pragma once

#include "wscap/channels.hpp"
#include "wscap/numkit.hpp"

namespace wscap {

// Fisher information matrix J evaluated at theta0. For the Gaussian vector
// noise families J is independent of theta, and theta0 is kept only for the
// scalar pipeline's bookkeeping.
struct FisherMatrix {
    SymMatrix matrix;
    double theta0 = 0.0;
    double condition_estimate = 1.0;  // estimated cond(C_Z) where applicable

    std::size_t size() const { return matrix.size(); }
};

// E[score^2] at theta0, by adaptive quadrature over the output support.
// Throws QuadratureError when the integral fails to converge.
double fisher_scalar(const ScalarChannel& ch, double theta0, double tol = 1e-10);

// Non-throwing variant: quadrature diagnostics are written to `diag` and the
// best estimate is returned even on non-convergence.
double fisher_scalar(const ScalarChannel& ch, double theta0, QuadratureResult& diag,
                     double tol = 1e-10);

// J = C_Z^{-1}, computed from the spectral decomposition. O(n^3) Jacobi;
// intended for custom covariances of moderate dimension.
FisherMatrix fisher_gaussian_vector(const NoiseCovariance& cz);

// Closed form: tridiagonal with factor 1/(1-rho^2), corner diagonal 1,
// interior diagonal 1+rho^2, off-diagonal -rho.
FisherMatrix ar1_fisher(double rho, std::size_t n);

// Inverse of the MA(1) covariance via n tridiagonal solves against unit
// vectors; dense result. Refuses (IllConditionedError) when the covariance's
// estimated condition number exceeds 1e12.
FisherMatrix ma1_fisher(double rho, std::size_t n);

}  // namespace wscap
