#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracle {

std::vector<double> ql_eigenvalues(std::vector<double> d,
                                   std::vector<double> e) {
    const int n = (int)d.size();
    if (n == 0) return {};
    if (n > 1 && (int)e.size() != n - 1)
        throw std::invalid_argument("oracle: e must have n-1 entries");
    e.resize(n, 0.0);
    const double eps = std::numeric_limits<double>::epsilon();

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw std::runtime_error("oracle: QL failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {           // rotation annihilated early
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

std::vector<double> lowest_levels(const std::function<double(double)>& V,
                                  double x_lo, double x_hi, int n, int k) {
    if (!(x_hi > x_lo)) throw std::invalid_argument("oracle: x_lo < x_hi required");
    if (n < 4 || k < 1 || k > n) throw std::invalid_argument("oracle: bad n or k");
    const double h = (x_hi - x_lo) / n;
    std::vector<double> d(n), e(n - 1, -1.0 / (h * h));
    for (int j = 0; j < n; ++j)
        d[j] = 2.0 / (h * h) + V(x_lo + (j + 0.5) * h);
    std::vector<double> ev = ql_eigenvalues(std::move(d), std::move(e));
    ev.resize(k);
    return ev;
}

} // namespace oracle
