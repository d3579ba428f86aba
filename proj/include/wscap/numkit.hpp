#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wscap {

// Result of an adaptive quadrature call. `converged` is false when the
// evaluation budget ran out before the error target was met; `value` is then
// the best available estimate.
struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

class QuadratureError : public std::runtime_error {
  public:
    explicit QuadratureError(const std::string& what, QuadratureResult best = {})
        : std::runtime_error(what), best_estimate(best) {}
    QuadratureResult best_estimate;
};

class IllConditionedError : public std::runtime_error {
  public:
    IllConditionedError(const std::string& what, double condition)
        : std::runtime_error(what), condition_estimate(condition) {}
    double condition_estimate;
};

// Dense symmetric matrix. set() writes both mirror entries, so
// a(i,k) == a(k,i) holds exactly, not just within roundoff.
class SymMatrix {
  public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {
        if (n == 0) throw std::invalid_argument("SymMatrix: dimension must be >= 1");
    }

    static SymMatrix identity(std::size_t n);

    std::size_t size() const { return n_; }

    double operator()(std::size_t i, std::size_t k) const { return a_[i * n_ + k]; }

    void set(std::size_t i, std::size_t k, double v) {
        a_[i * n_ + k] = v;
        a_[k * n_ + i] = v;
    }

    const double* row(std::size_t i) const { return a_.data() + i * n_; }
    const std::vector<double>& data() const { return a_; }

  private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

// Symmetric tridiagonal matrix: diag has n entries, offdiag has n-1.
struct TridiagMatrix {
    std::vector<double> diag;
    std::vector<double> offdiag;

    std::size_t size() const { return diag.size(); }
    void validate() const {
        if (diag.empty()) throw std::invalid_argument("TridiagMatrix: dimension must be >= 1");
        if (offdiag.size() + 1 != diag.size())
            throw std::invalid_argument("TridiagMatrix: offdiag must have n-1 entries");
    }
};

struct EigenDecomposition {
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // row-major n*n; column k is the eigenvector of values[k]
    std::size_t n = 0;

    double vector_entry(std::size_t i, std::size_t k) const { return vectors[i * n + k]; }
};

// LDL^T factorization of a symmetric positive definite tridiagonal matrix,
// reusable across right-hand sides.
struct TridiagFactorization {
    std::vector<double> d;  // pivots, all > 0
    std::vector<double> l;  // subdiagonal multipliers, n-1 entries

    void solve_inplace(std::vector<double>& b) const;
};

// Adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b].
// Panels are bisected worst-error-first until the global error estimate drops
// below max(tol, tol*|integral|) or the evaluation budget is exhausted.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-10, long max_evaluations = 1000000);

// Integration over [a, inf) via the rational substitution x = a + t/(1-t).
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f, double a,
                                         double tol = 1e-10, long max_evaluations = 1000000);

// Integration over (-inf, inf), split at `center` into two half-line integrals.
QuadratureResult integrate_real_line(const std::function<double(double)>& f, double center,
                                     double tol = 1e-10, long max_evaluations = 1000000);

// Cyclic Jacobi eigensolver. Converges when the off-diagonal Frobenius norm
// falls below 1e-12 * ||A||_F; eigenvalues returned ascending.
EigenDecomposition sym_eigen(const SymMatrix& a);

TridiagFactorization tridiag_factor(const TridiagMatrix& t);
std::vector<double> tridiag_solve(const TridiagMatrix& t, const std::vector<double>& b);

// tr(A*B) = sum_{i,k} A_ik * B_ki, evaluated as a direct double sum.
double trace_product(const SymMatrix& a, const SymMatrix& b);

// True iff the minimum eigenvalue of A is >= -tol. A negative tol demands a
// strictly positive margin. The one-argument form uses the scale-relative
// default 1e-10 * max diagonal entry.
bool is_psd(const SymMatrix& a, double tol);
bool is_psd(const SymMatrix& a);

}  // namespace wscap
