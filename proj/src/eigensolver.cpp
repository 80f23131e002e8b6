#include "loganharm/eigensolver.hpp"
#include "loganharm/errors.hpp"
#include "loganharm/threads.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace loganharm {

namespace {

double grid_step(const grid_spec& g) {
    return g.staggered ? (g.x_hi - g.x_lo) / g.n_points
                       : (g.x_hi - g.x_lo) / (g.n_points + 1);
}

bool is_symmetric_grid(const grid_spec& g) {
    return std::abs(g.x_lo + g.x_hi) <= 1e-12 * (g.x_hi - g.x_lo);
}

void check_grid(const potential_spec& spec, const grid_spec& g) {
    if (!(g.x_lo < g.x_hi))
        throw grid_error("grid requires x_lo < x_hi");
    if (g.n_points < 16)
        throw grid_error("grid requires at least 16 points");
    if (is_half_line(spec)) {
        if (g.x_lo < 0.0)
            throw grid_error(family_name(spec) + " potential needs a half-line grid (x_lo >= 0)");
        if (g.x_lo == 0.0 && !g.staggered)
            throw grid_error("half-line grids starting at 0 must be staggered");
    } else if (g.x_lo < 0.0 && g.x_hi > 0.0 && is_log_singular(spec)) {
        // no node may hit the origin, and no assembly cell may straddle it
        if (!g.staggered || g.n_points % 2 != 0)
            throw grid_error("log-singular potentials need a staggered, even-sized grid");
        if (!is_symmetric_grid(g))
            throw grid_error("log-singular potentials need a grid symmetric about 0");
    }
}

double potential_entry(const potential_spec& spec, const grid_spec& g, double x) {
    return g.staggered ? cell_average(spec, x, grid_step(g)) : evaluate(spec, x);
}

sym_tridiag assemble_impl(const potential_spec& spec, const grid_spec& grid,
                          bool parallel) {
    validate(spec);
    check_grid(spec, grid);
    const std::vector<double> x = grid_nodes(grid);
    const int n = (int)x.size();
    const double h = grid_step(grid);
    sym_tridiag T;
    T.d.resize(n);
    T.e.assign(n - 1, -1.0 / (h * h));
    const double kin = 2.0 / (h * h);
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
#endif
        for (int j = 0; j < n; ++j)
            T.d[j] = kin + potential_entry(spec, grid, x[j]);
    } else {
        for (int j = 0; j < n; ++j)
            T.d[j] = kin + potential_entry(spec, grid, x[j]);
    }
    return T;
}

// index-reversal (x -> -x) image of v on a symmetric grid
std::vector<double> reflect(const std::vector<double>& v) {
    return std::vector<double>(v.rbegin(), v.rend());
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void normalize(std::vector<double>& v) {
    const double n = std::sqrt(dot(v, v));
    for (auto& x : v) x /= n;
}

double rayleigh(const sym_tridiag& T, const std::vector<double>& v) {
    std::vector<double> y;
    apply(T, v, y);
    return dot(v, y);
}

double matrix_scale(const sym_tridiag& T) {
    double s = 0.0;
    for (double v : T.d) s = std::max(s, std::abs(v));
    for (double v : T.e) s = std::max(s, std::abs(v));
    return s;
}

// deterministic sign convention: make the largest-magnitude entry positive
void fix_sign(std::vector<double>& v) {
    double mx = 0.0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) > mx) {
            mx = std::abs(v[i]);
            at = i;
        }
    if (v[at] < 0.0)
        for (auto& x : v) x = -x;
}

eigen_result solve_impl(const potential_spec& spec, const grid_spec& grid, int k,
                        bool parallel) {
    if (k < 1)
        throw std::invalid_argument("k must be positive");
    if (k > grid.n_points / 4)
        throw grid_error("k exceeds n_points/4; refine the grid");
    const sym_tridiag T = assemble_impl(spec, grid, parallel);
    const std::vector<double> lam =
        parallel ? lowest_eigenvalues(T, k) : lowest_eigenvalues_serial(T, k);

    // group near-degenerate eigenvalues so inverse iteration can deflate inside
    // the cluster; generous threshold is harmless for well-separated states
    const double scale = matrix_scale(T);
    std::vector<std::pair<int, int>> clusters;   // [first, last]
    for (int i = 0; i < k; ++i) {
        const double gap_tol =
            std::max({1e-8 * std::max(1.0, std::abs(lam[i])),
                      1e3 * std::numeric_limits<double>::epsilon() * scale, 1e-12});
        if (i > 0 && lam[i] - lam[i - 1] <= gap_tol)
            clusters.back().second = i;
        else
            clusters.emplace_back(i, i);
    }

    const bool sym = !is_half_line(spec) && is_symmetric_grid(grid) &&
                     grid.staggered && grid.n_points % 2 == 0;
    const int n = (int)T.size();

    std::vector<std::vector<double>> vecs(k);
    std::vector<parity> pars(k, parity::none);

    for (const auto& [first, last] : clusters) {
        std::vector<std::vector<double>> in_cluster;
        for (int i = first; i <= last; ++i) {
            vecs[i] = inverse_iteration(T, lam[i], in_cluster, i);
            in_cluster.push_back(vecs[i]);
        }
        if (!sym) continue;
        std::vector<int> ambiguous;
        for (int i = first; i <= last; ++i) {
            const std::vector<double> pv = reflect(vecs[i]);
            const double s = dot(vecs[i], pv);
            if (std::abs(s) > 0.99) {
                // purify into the exact parity representative
                const double sg = s > 0.0 ? 1.0 : -1.0;
                for (int j = 0; j < n; ++j) vecs[i][j] += sg * pv[j];
                normalize(vecs[i]);
                pars[i] = s > 0.0 ? parity::even : parity::odd;
            } else {
                ambiguous.push_back(i);
            }
        }
        if (ambiguous.size() == 2 && last - first == 1) {
            // a mixed degenerate doublet: rebuild exact even/odd combinations
            const std::vector<double>& u = vecs[first];
            const std::vector<double> pu = reflect(u);
            std::vector<double> ev(n), od(n);
            for (int j = 0; j < n; ++j) {
                ev[j] = u[j] + pu[j];
                od[j] = u[j] - pu[j];
            }
            normalize(ev);
            normalize(od);
            vecs[first] = ev;
            vecs[last] = od;
            pars[first] = parity::even;
            pars[last] = parity::odd;
        } else if (!ambiguous.empty()) {
            throw std::runtime_error(
                "parity resolution failed: state is neither even nor odd "
                "(|<psi,P psi>| <= 0.99) and not part of a simple doublet");
        }
    }

    eigen_result res;
    res.grid = grid;
    res.nodes = grid_nodes(grid);
    res.energies.resize(k);
    res.residuals.resize(k);

    // Rayleigh polish, then restore ascending order (purification inside a
    // degenerate cluster may swap even/odd by a hair)
    for (int i = 0; i < k; ++i) res.energies[i] = rayleigh(T, vecs[i]);
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return res.energies[a] < res.energies[b];
    });

    const double h = grid_step(grid);
    eigen_result out;
    out.grid = res.grid;
    out.nodes = res.nodes;
    out.energies.resize(k);
    out.residuals.resize(k);
    out.parities.resize(k);
    out.wavefunctions.resize(k);
    for (int i = 0; i < k; ++i) {
        const int s = order[i];
        out.energies[i] = res.energies[s];
        out.residuals[i] = residual_norm(T, res.energies[s], vecs[s]);
        out.parities[i] = pars[s];
        fix_sign(vecs[s]);
        out.wavefunctions[i] = std::move(vecs[s]);
        const double inv = 1.0 / std::sqrt(h);
        for (auto& x : out.wavefunctions[i]) x *= inv;   // discrete L2 norm 1
    }
    return out;
}

} // namespace

grid_spec default_grid(const potential_spec& spec, int n_points) {
    validate(spec);
    double R = 0.0, curv = 0.0;
    try {
        const minimum_info info = locate_minimum(spec);
        R = info.R;
        curv = info.curvature;
    } catch (const no_minimum_error&) {
        // quadratic (or power-law without an interior minimum): expand about 0
    }
    double a;   // Gaussian width parameter of the local harmonic approximation
    if (curv > 0.0) {
        a = std::sqrt(curv / 2.0);
    } else {
        const double w = std::visit([](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, quadratic>) return s.omega;
            else if constexpr (std::is_same_v<T, power_law>) return s.omega;
            else return 1.0;
        }, spec);
        a = std::sqrt(2.0 * w * w / 2.0);   // sqrt(V''(0)/2) of the quadratic part
    }
    const double W = 12.0 / std::sqrt(a);
    if (is_half_line(spec))
        return {0.0, R + W, n_points, true};
    return {-(R + W), R + W, n_points, true};
}

std::vector<double> grid_nodes(const grid_spec& g) {
    const int n = g.n_points;
    std::vector<double> x(n);
    const double h = grid_step(g);
    if (g.staggered && is_symmetric_grid(g) && n % 2 == 0) {
        // build the positive half and mirror it so symmetry is exact in FP
        const int half = n / 2;
        for (int j = 0; j < half; ++j) {
            const double xp = (j + 0.5) * h;
            x[half + j] = xp;
            x[half - 1 - j] = -xp;
        }
    } else if (g.staggered) {
        for (int j = 0; j < n; ++j) x[j] = g.x_lo + (j + 0.5) * h;
    } else {
        for (int j = 0; j < n; ++j) x[j] = g.x_lo + (j + 1.0) * h;
    }
    return x;
}

sym_tridiag assemble(const potential_spec& spec, const grid_spec& grid) {
    return assemble_impl(spec, grid, true);
}

sym_tridiag assemble_serial(const potential_spec& spec, const grid_spec& grid) {
    return assemble_impl(spec, grid, false);
}

eigen_result solve_lowest(const potential_spec& spec, const grid_spec& grid, int k) {
    return solve_impl(spec, grid, k, true);
}

eigen_result solve_lowest_serial(const potential_spec& spec, const grid_spec& grid, int k) {
    return solve_impl(spec, grid, k, false);
}

std::vector<double> eigen_energies(const potential_spec& spec, const grid_spec& grid,
                                   int k) {
    if (k < 1)
        throw std::invalid_argument("k must be positive");
    if (k > grid.n_points / 4)
        throw grid_error("k exceeds n_points/4; refine the grid");
    const sym_tridiag T = assemble_impl(spec, grid, true);
    return lowest_eigenvalues(T, k);
}

converge_result converge(const potential_spec& spec, int k, double target_tol,
                         const converge_options& opts) {
    if (!(target_tol >= 1e-10))
        throw std::invalid_argument("target_tol must be at least 1e-10");
    if (opts.initial_n < 16 || opts.max_refinements < 2)
        throw std::invalid_argument("converge options out of range");

    grid_spec base = default_grid(spec, opts.initial_n);
    base.x_lo *= opts.domain_scale;
    base.x_hi *= opts.domain_scale;

    std::vector<double> best;
    double best_drift = std::numeric_limits<double>::infinity();
    int last_n = 0;

    for (int attempt = 0; attempt <= opts.max_domain_doublings; ++attempt) {
        grid_spec g = base;
        std::vector<double> E_prev = eigen_energies(spec, g, k);
        std::vector<double> ext_prev;
        double drift_prev = std::numeric_limits<double>::infinity();
        bool stalled = false;
        for (int r = 1; r <= opts.max_refinements; ++r) {
            g.n_points *= 2;
            const std::vector<double> E = eigen_energies(spec, g, k);
            std::vector<double> ext(k);
            for (int i = 0; i < k; ++i) ext[i] = (4.0 * E[i] - E_prev[i]) / 3.0;
            if (!ext_prev.empty()) {
                double drift = 0.0;
                for (int i = 0; i < k; ++i)
                    drift = std::max(drift, std::abs(ext[i] - ext_prev[i]));
                if (drift < target_tol)
                    return {ext, drift, g, r};
                if (drift < best_drift) {
                    best = ext;
                    best_drift = drift;
                    last_n = g.n_points;
                }
                stalled = drift > 0.5 * drift_prev;
                drift_prev = drift;
            }
            ext_prev = std::move(ext);
            E_prev = E;
        }
        if (!(stalled && attempt < opts.max_domain_doublings))
            break;
        // extrapolation stalled: suspect Dirichlet truncation, widen the box
        base.x_lo *= 2.0;
        base.x_hi *= 2.0;
        base.n_points *= 2;
    }
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "grid refinement exhausted: best extrapolant drift %.3e "
                  "above target %.3e", best_drift, target_tol);
    throw convergence_error(msg, best, best_drift, last_n);
}

std::vector<double> parity_splittings(const potential_spec& spec, int n_pairs,
                                      double tol) {
    if (!is_even_family(spec))
        throw std::invalid_argument(
            "parity splittings need an even potential on the full line");
    if (n_pairs < 1)
        throw std::invalid_argument("n_pairs must be positive");
    const int k = 2 * n_pairs;
    const converge_result conv = converge(spec, k, tol);
    const eigen_result labeled = solve_lowest(spec, conv.grid_used, k);

    std::vector<double> even_E, odd_E;
    for (int i = 0; i < k; ++i) {
        if (labeled.parities[i] == parity::even)
            even_E.push_back(conv.energies[i]);
        else if (labeled.parities[i] == parity::odd)
            odd_E.push_back(conv.energies[i]);
    }
    if ((int)even_E.size() < n_pairs || (int)odd_E.size() < n_pairs)
        throw std::runtime_error(
            "parity pairing failed: uneven parity counts among the lowest states");

    std::vector<double> delta(n_pairs);
    for (int i = 0; i < n_pairs; ++i) delta[i] = odd_E[i] - even_E[i];
    const double noise =
        std::max(1e-10, 1e-9 * std::max(1.0, std::abs(conv.energies[0])));
    if (delta[0] < -noise)
        throw std::runtime_error(
            "ground doublet splitting came out negative beyond noise; "
            "pairing is inconsistent");
    return delta;
}

double overlap(const std::vector<double>& a, const std::vector<double>& b, double h) {
    if (a.size() != b.size())
        throw std::invalid_argument("overlap requires wavefunctions on the same grid");
    if (h <= 0.0)
        throw std::invalid_argument("overlap requires a positive grid step");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * h;
}

void dump_csv(std::ostream& os, const potential_spec& spec, const eigen_result& res) {
    char buf[64];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
    };
    os << "# loganharm-lab v1\n";
    os << "# family=" << family_name(spec) << "\n";
    os << "# grid: x_lo=" << fmt(res.grid.x_lo) << " x_hi=" << fmt(res.grid.x_hi)
       << " n_points=" << res.grid.n_points
       << " staggered=" << (res.grid.staggered ? 1 : 0) << "\n";
    os << "# energies:";
    for (double e : res.energies) os << ' ' << fmt(e);
    os << "\n# residuals:";
    for (double r : res.residuals) os << ' ' << fmt(r);
    os << "\nx";
    for (std::size_t i = 0; i < res.wavefunctions.size(); ++i) os << ",psi_" << i;
    os << "\n";
    for (std::size_t j = 0; j < res.nodes.size(); ++j) {
        os << fmt(res.nodes[j]);
        for (const auto& psi : res.wavefunctions) os << ',' << fmt(psi[j]);
        os << "\n";
    }
}

} // namespace loganharm
