#include "wscap/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wscap {

SymMatrix SymMatrix::identity(std::size_t n) {
    SymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
}

namespace {

// 15-point Kronrod abscissae on [-1,1] (positive half) and the matching
// 7-point Gauss weights, standard QUADPACK values.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
    double a, b;
    double value;
    double err;
    double resabs;

    bool operator<(const Panel& o) const { return err < o.err; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);

    const double fc = f(center);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    double resabs = kWgk[7] * std::fabs(fc);

    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        fv1[j] = f(center - hlgth * kXgk[j]);
        fv2[j] = f(center + hlgth * kXgk[j]);
        const double fsum = fv1[j] + fv2[j];
        resk += kWgk[j] * fsum;
        resabs += kWgk[j] * (std::fabs(fv1[j]) + std::fabs(fv2[j]));
        if (j % 2 == 1) resg += kWg[(j - 1) / 2] * fsum;
    }

    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::fabs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));

    Panel p;
    p.a = a;
    p.b = b;
    p.value = resk * hlgth;
    p.resabs = resabs * std::fabs(hlgth);
    resasc *= std::fabs(hlgth);

    double err = std::fabs((resk - resg) * hlgth);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (p.resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(err, 50.0 * eps * p.resabs);
    p.err = err;

    if (!std::isfinite(p.value) || !std::isfinite(p.err))
        throw QuadratureError("integrand produced a non-finite value on [" +
                              std::to_string(a) + ", " + std::to_string(b) + "]");
    return p;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double tol, long max_evaluations) {
    if (!(a < b)) throw std::invalid_argument("integrate: requires a < b");
    if (!(tol > 0.0)) throw std::invalid_argument("integrate: requires tol > 0");
    if (max_evaluations < 15) throw std::invalid_argument("integrate: budget below one panel");

    std::vector<Panel> heap;
    heap.push_back(gk15(f, a, b));
    long evals = 15;

    double total = heap[0].value;
    double err_total = heap[0].err;
    double resabs_total = heap[0].resabs;

    const double eps = std::numeric_limits<double>::epsilon();
    auto target = [&] { return std::max(tol, tol * std::fabs(total)); };
    // Panels narrower than this cannot be meaningfully bisected in doubles.
    auto splittable = [&](const Panel& p) {
        return p.b - p.a > 16.0 * eps * (std::fabs(p.a) + std::fabs(p.b) + 1e-300);
    };

    while (err_total > target() && err_total > 50.0 * eps * resabs_total &&
           evals + 30 <= max_evaluations) {
        std::pop_heap(heap.begin(), heap.end());
        Panel worst = heap.back();
        heap.pop_back();
        if (!splittable(worst)) {
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end());
            break;
        }

        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        evals += 30;

        total += left.value + right.value - worst.value;
        err_total += left.err + right.err - worst.err;
        resabs_total += left.resabs + right.resabs - worst.resabs;

        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end());
    }

    // Resum from scratch: incremental updates drift after many bisections.
    total = 0.0;
    err_total = 0.0;
    resabs_total = 0.0;
    for (const Panel& p : heap) {
        total += p.value;
        err_total += p.err;
        resabs_total += p.resabs;
    }

    QuadratureResult r;
    r.value = total;
    r.abs_error_estimate = err_total;
    r.evaluations = evals;
    r.converged = err_total <= std::max(target(), 50.0 * eps * resabs_total);
    return r;
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f, double a,
                                         double tol, long max_evaluations) {
    auto g = [&f, a](double t) {
        if (t >= 1.0) return 0.0;
        const double u = 1.0 - t;
        const double x = a + t / u;
        const double fx = f(x);
        if (fx == 0.0) return 0.0;  // avoid 0 * inf when the tail underflows
        return fx / (u * u);
    };
    return integrate(g, 0.0, 1.0, tol, max_evaluations);
}

QuadratureResult integrate_real_line(const std::function<double(double)>& f, double center,
                                     double tol, long max_evaluations) {
    QuadratureResult right =
        integrate_semi_infinite(f, center, 0.5 * tol, max_evaluations / 2);
    QuadratureResult left = integrate_semi_infinite(
        [&f, center](double u) { return f(center - u); }, 0.0, 0.5 * tol,
        max_evaluations / 2);

    QuadratureResult r;
    r.value = left.value + right.value;
    r.abs_error_estimate = left.abs_error_estimate + right.abs_error_estimate;
    r.evaluations = left.evaluations + right.evaluations;
    r.converged = left.converged && right.converged;
    return r;
}

EigenDecomposition sym_eigen(const SymMatrix& a) {
    const std::size_t n = a.size();
    std::vector<double> w(a.data());
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    double fro = 0.0;
    for (double x : w) fro += x * x;
    fro = std::sqrt(fro);
    const double threshold = 1e-12 * fro;

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += 2.0 * w[p * n + q] * w[p * n + q];
        return std::sqrt(s);
    };

    const int max_sweeps = 64;
    int sweep = 0;
    while (n > 1 && off_norm() > threshold) {
        if (++sweep > max_sweeps)
            throw std::runtime_error("sym_eigen: Jacobi sweeps failed to converge");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = w[p * n + q];
                if (apq == 0.0) continue;
                const double app = w[p * n + p];
                const double aqq = w[q * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                w[p * n + p] = app - t * apq;
                w[q * n + q] = aqq + t * apq;
                w[p * n + q] = 0.0;
                w[q * n + p] = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = w[i * n + p];
                    const double aiq = w[i * n + q];
                    const double nip = aip - s * (aiq + tau * aip);
                    const double niq = aiq + s * (aip - tau * aiq);
                    w[i * n + p] = nip;
                    w[p * n + i] = nip;
                    w[i * n + q] = niq;
                    w[q * n + i] = niq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v[i * n + p];
                    const double viq = v[i * n + q];
                    v[i * n + p] = vip - s * (viq + tau * vip);
                    v[i * n + q] = viq + s * (vip - tau * viq);
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t k) { return w[i * n + i] < w[k * n + k]; });

    EigenDecomposition d;
    d.n = n;
    d.values.resize(n);
    d.vectors.resize(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        d.values[k] = w[order[k] * n + order[k]];
        for (std::size_t i = 0; i < n; ++i) d.vectors[i * n + k] = v[i * n + order[k]];
    }
    return d;
}

TridiagFactorization tridiag_factor(const TridiagMatrix& t) {
    t.validate();
    const std::size_t n = t.size();
    TridiagFactorization f;
    f.d.resize(n);
    f.l.resize(n > 0 ? n - 1 : 0);

    f.d[0] = t.diag[0];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (f.d[i] <= 0.0)
            throw std::invalid_argument("tridiag_factor: matrix is not positive definite");
        f.l[i] = t.offdiag[i] / f.d[i];
        f.d[i + 1] = t.diag[i + 1] - t.offdiag[i] * f.l[i];
    }
    if (f.d[n - 1] <= 0.0)
        throw std::invalid_argument("tridiag_factor: matrix is not positive definite");
    return f;
}

void TridiagFactorization::solve_inplace(std::vector<double>& b) const {
    const std::size_t n = d.size();
    if (b.size() != n)
        throw std::invalid_argument("tridiag solve: right-hand side has wrong length");
    for (std::size_t i = 1; i < n; ++i) b[i] -= l[i - 1] * b[i - 1];
    for (std::size_t i = 0; i < n; ++i) b[i] /= d[i];
    for (std::size_t i = n - 1; i-- > 0;) b[i] -= l[i] * b[i + 1];
}

std::vector<double> tridiag_solve(const TridiagMatrix& t, const std::vector<double>& b) {
    TridiagFactorization f = tridiag_factor(t);
    std::vector<double> x = b;
    f.solve_inplace(x);
    return x;
}

double trace_product(const SymMatrix& a, const SymMatrix& b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw std::invalid_argument("trace_product: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* ra = a.row(i);
        const double* rb = b.row(i);
        double row = 0.0;
        for (std::size_t k = 0; k < n; ++k) row += ra[k] * rb[k];  // B_ki == B_ik
        s += row;
    }
    return s;
}

bool is_psd(const SymMatrix& a) {
    const std::size_t n = a.size();
    double max_diag = a(0, 0);
    for (std::size_t i = 1; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
    return is_psd(a, 1e-10 * max_diag);
}

bool is_psd(const SymMatrix& a, double tol) {
    const std::size_t n = a.size();

    // A has min eigenvalue >= -tol iff A + tol*I is PSD; test by Cholesky.
    // The 1e-306 term lets exactly-zero matrices factor without a 0 pivot.
    std::vector<double> m(a.data());
    const double shift = tol + 1e-306;
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] += shift;

    for (std::size_t j = 0; j < n; ++j) {
        double* rj = m.data() + j * n;
        double s = rj[j];
        for (std::size_t k = 0; k < j; ++k) s -= rj[k] * rj[k];
        if (!(s > 0.0)) return false;
        const double dj = std::sqrt(s);
        rj[j] = dj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double* ri = m.data() + i * n;
            double t = ri[j];
            for (std::size_t k = 0; k < j; ++k) t -= ri[k] * rj[k];
            ri[j] = t / dj;
        }
    }
    return true;
}

}  // namespace wscap
