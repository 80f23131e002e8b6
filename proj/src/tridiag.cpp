#include "loganharm/tridiag.hpp"
#include "loganharm/errors.hpp"
#include "loganharm/threads.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

namespace loganharm {

namespace {

// a pivot that lands exactly on zero (lambda hits an eigenvalue of a leading
// principal submatrix) is nudged negative, as if lambda were raised by an
// infinitesimal; the nudge must be counted as a sign change or
// constant-diagonal matrices miscount. pivmin is scaled so the next division
// cannot overflow.
double pivot_floor(const sym_tridiag& T) {
    double emax2 = 1.0;
    for (double v : T.e) emax2 = std::max(emax2, v * v);
    return std::numeric_limits<double>::min() * emax2;
}

int sturm_count_floored(const sym_tridiag& T, double lambda, double pivmin) {
    const std::size_t n = T.size();
    int count = 0;
    double q = T.d[0] - lambda;
    if (std::abs(q) <= pivmin) q = -pivmin;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        q = T.d[i] - lambda - T.e[i - 1] * T.e[i - 1] / q;
        if (std::abs(q) <= pivmin) q = -pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

// bisection for the idx-th (0-based, ascending) eigenvalue; every index runs
// this exact code path, so thread scheduling cannot change any bit of output
double bisect_index(const sym_tridiag& T, int idx, double lo, double hi,
                    double rel_tol, double pivmin) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;   // interval exhausted in FP
        const double tol =
            rel_tol * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
        if (hi - lo <= tol) break;
        if (sturm_count_floored(T, mid, pivmin) >= idx + 1)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

void gershgorin(const sym_tridiag& T, double& lo, double& hi) {
    const std::size_t n = T.size();
    lo = std::numeric_limits<double>::max();
    hi = std::numeric_limits<double>::lowest();
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(T.e[i - 1]);
        if (i + 1 < n) r += std::abs(T.e[i]);
        lo = std::min(lo, T.d[i] - r);
        hi = std::max(hi, T.d[i] + r);
    }
}

void check_request(const sym_tridiag& T, int k) {
    if (T.size() < 2 || T.e.size() + 1 != T.size())
        throw std::invalid_argument("malformed tridiagonal matrix");
    if (k < 1 || (std::size_t)k > T.size())
        throw std::invalid_argument("eigenvalue count out of range");
}

double matrix_scale(const sym_tridiag& T) {
    double s = 0.0;
    for (double v : T.d) s = std::max(s, std::abs(v));
    for (double v : T.e) s = std::max(s, std::abs(v));
    return s;
}

// LU factorization of (T - lambda I) with partial pivoting (three-band fill-in)
struct gt_factors {
    std::vector<double> dl, dd, du, du2;
    std::vector<int> swapped;
};

gt_factors factorize(const sym_tridiag& T, double lambda) {
    const std::size_t n = T.size();
    gt_factors f;
    f.dd.resize(n);
    f.dl.assign(T.e.begin(), T.e.end());
    f.du.assign(T.e.begin(), T.e.end());
    f.du2.assign(n >= 2 ? n - 2 : 0, 0.0);
    f.swapped.assign(n - 1, 0);
    for (std::size_t i = 0; i < n; ++i) f.dd[i] = T.d[i] - lambda;

    const double tiny = 1e-300;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(f.dd[i]) >= std::abs(f.dl[i])) {
            if (f.dd[i] == 0.0) f.dd[i] = tiny;
            const double fact = f.dl[i] / f.dd[i];
            f.dl[i] = fact;
            f.dd[i + 1] -= fact * f.du[i];
        } else {
            const double fact = f.dd[i] / f.dl[i];
            f.dd[i] = f.dl[i];
            f.dl[i] = fact;
            const double temp = f.du[i];
            f.du[i] = f.dd[i + 1];
            f.dd[i + 1] = temp - fact * f.dd[i + 1];
            if (i + 2 < n) {
                f.du2[i] = f.du[i + 1];
                f.du[i + 1] = -fact * f.du[i + 1];
            }
            f.swapped[i] = 1;
        }
    }
    if (f.dd[n - 1] == 0.0) f.dd[n - 1] = tiny;
    return f;
}

void solve_inplace(const gt_factors& f, std::vector<double>& b) {
    const std::size_t n = f.dd.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!f.swapped[i]) {
            b[i + 1] -= f.dl[i] * b[i];
        } else {
            const double temp = b[i];
            b[i] = b[i + 1];
            b[i + 1] = temp - f.dl[i] * b[i];
        }
    }
    b[n - 1] /= f.dd[n - 1];
    if (n >= 2)
        b[n - 2] = (b[n - 2] - f.du[n - 2] * b[n - 1]) / f.dd[n - 2];
    for (std::size_t ir = n; ir >= 3; --ir) {
        const std::size_t i = ir - 3;
        b[i] = (b[i] - f.du[i] * b[i + 1] - f.du2[i] * b[i + 2]) / f.dd[i];
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

int sturm_count(const sym_tridiag& T, double lambda) {
    return sturm_count_floored(T, lambda, pivot_floor(T));
}

std::vector<double> lowest_eigenvalues_serial(const sym_tridiag& T, int k,
                                              double rel_tol) {
    check_request(T, k);
    double lo, hi;
    gershgorin(T, lo, hi);
    const double pivmin = pivot_floor(T);
    std::vector<double> out(k);
    for (int i = 0; i < k; ++i)
        out[i] = bisect_index(T, i, lo, hi, rel_tol, pivmin);
    return out;
}

std::vector<double> lowest_eigenvalues(const sym_tridiag& T, int k,
                                       double rel_tol) {
#ifdef _OPENMP
    check_request(T, k);
    double lo, hi;
    gershgorin(T, lo, hi);
    const double pivmin = pivot_floor(T);
    std::vector<double> out(k);
#pragma omp parallel for schedule(dynamic) num_threads(thread_cap())
    for (int i = 0; i < k; ++i)
        out[i] = bisect_index(T, i, lo, hi, rel_tol, pivmin);
    return out;
#else
    return lowest_eigenvalues_serial(T, k, rel_tol);
#endif
}

std::vector<double> inverse_iteration(const sym_tridiag& T, double lambda,
                                      const std::vector<std::vector<double>>& against,
                                      int state_index) {
    const std::size_t n = T.size();
    const gt_factors f = factorize(T, lambda);

    // fixed-seed start vector; mt19937_64 output is standardized, and the
    // mapping to [-1,1) below avoids implementation-defined distributions
    std::mt19937_64 rng(0x6c6f67616e686172ULL + (std::uint64_t)state_index);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = 2.0 * ((double)(rng() >> 11) * 0x1.0p-53) - 1.0;
    {
        const double nv = std::sqrt(dot(v, v));
        for (auto& x : v) x /= nv;
    }

    std::vector<double> w(n);
    for (int it = 0; it < 25; ++it) {
        w = v;
        solve_inplace(f, w);
        // guard against overflow when lambda is machine-exact: scale by max first
        double mx = 0.0;
        for (double x : w) mx = std::max(mx, std::abs(x));
        if (mx == 0.0)
            throw convergence_error("inverse iteration produced a zero vector",
                                    {lambda}, 0.0, (int)n);
        for (auto& x : w) x /= mx;
        for (const auto& u : against) {
            const double proj = dot(w, u);
            for (std::size_t i = 0; i < n; ++i) w[i] -= proj * u[i];
        }
        const double nw = std::sqrt(dot(w, w));
        if (nw == 0.0)
            throw convergence_error(
                "inverse iteration collapsed onto the deflated subspace",
                {lambda}, 0.0, (int)n);
        for (auto& x : w) x /= nw;
        const double align = std::abs(dot(w, v));
        v.swap(w);
        if (align > 1.0 - 1e-12) return v;
    }
    // accept anyway if the residual is at the round-off floor for this matrix
    if (residual_norm(T, lambda, v) <=
        1e3 * std::numeric_limits<double>::epsilon() * matrix_scale(T))
        return v;
    throw convergence_error("inverse iteration did not settle in 25 sweeps",
                            {lambda}, 0.0, (int)n);
}

void apply(const sym_tridiag& T, const std::vector<double>& x, std::vector<double>& y) {
    const std::size_t n = T.size();
    y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = T.d[i] * x[i];
        if (i > 0) s += T.e[i - 1] * x[i - 1];
        if (i + 1 < n) s += T.e[i] * x[i + 1];
        y[i] = s;
    }
}

double residual_norm(const sym_tridiag& T, double lambda, const std::vector<double>& x) {
    std::vector<double> y;
    apply(T, x, y);
    double s = 0.0;
    for (std::size_t i = 0; i < T.size(); ++i) {
        const double r = y[i] - lambda * x[i];
        s += r * r;
    }
    return std::sqrt(s);
}

} // namespace loganharm
