#ifndef LOGANHARM_EIGENSOLVER_HPP
#define LOGANHARM_EIGENSOLVER_HPP

#include "loganharm/potentials.hpp"
#include "loganharm/tridiag.hpp"

#include <iosfwd>
#include <vector>

namespace loganharm {

enum class parity { even, odd, none };

// uniform grid with Dirichlet boundaries at both ends.
// staggered=true places nodes at x_lo+(j+1/2)h (j=0..n-1, h=(x_hi-x_lo)/n) and
// assembles exact cell averages of V; staggered=false places nodes at
// x_lo+(j+1)h (h=(x_hi-x_lo)/(n+1)) and samples V at the nodes.
struct grid_spec {
    double x_lo;
    double x_hi;
    int n_points;
    bool staggered = true;
};

struct eigen_result {
    grid_spec grid;
    std::vector<double> nodes;
    std::vector<double> energies;                    // ascending, Rayleigh-polished
    std::vector<std::vector<double>> wavefunctions;  // unit discrete L2 norm (sum psi^2 h = 1)
    std::vector<parity> parities;                    // none on half-line/asymmetric grids
    std::vector<double> residuals;                   // ||T v - E v||_2 of the unit-norm vector
};

struct converge_result {
    std::vector<double> energies;   // Richardson extrapolants of the accepted pair
    double achieved_tol;            // last difference of successive extrapolants
    grid_spec grid_used;            // finest grid entering the accepted extrapolant
    int refinements;
};

struct converge_options {
    int initial_n = 2048;
    int max_refinements = 8;
    double domain_scale = 1.0;      // multiplies the default half-width
    int max_domain_doublings = 2;   // applied when extrapolation stalls
};

// family-appropriate default domain: minimum location plus a Gaussian-width
// margin 12/sqrt(a), a = sqrt(V''(R)/2) (tail mass < 1e-30)
grid_spec default_grid(const potential_spec& spec, int n_points);

// nodes and the assembled discrete Hamiltonian 2/h^2 + V on the grid
std::vector<double> grid_nodes(const grid_spec& grid);
sym_tridiag assemble(const potential_spec& spec, const grid_spec& grid);
sym_tridiag assemble_serial(const potential_spec& spec, const grid_spec& grid);

// k lowest eigenpairs; parity classified on symmetric full-line grids by the
// sign of <psi(x), psi(-x)>, with degenerate clusters purified into exact
// even/odd combinations. The _serial variant runs every kernel single-threaded
// and must agree bitwise with the parallel lane.
eigen_result solve_lowest(const potential_spec& spec, const grid_spec& grid, int k);
eigen_result solve_lowest_serial(const potential_spec& spec, const grid_spec& grid, int k);

// eigenvalues only (no vectors); the work-horse inside converge
std::vector<double> eigen_energies(const potential_spec& spec, const grid_spec& grid, int k);

// grid-halving ladder with Richardson extrapolation E ~ (4 E_{h/2} - E_h)/3,
// stopping when successive extrapolants agree to target_tol; doubles the domain
// (up to max_domain_doublings) when the extrapolation stalls; throws
// convergence_error carrying the best estimate when refinements are exhausted
converge_result converge(const potential_spec& spec, int k, double target_tol,
                         const converge_options& opts = {});

// parity doublet gaps Delta_n = E_odd,n - E_even,n for an even potential,
// pairs matched by ordering within each parity class at the converged grid
std::vector<double> parity_splittings(const potential_spec& spec, int n_pairs,
                                      double tol);

// uniform-weight discrete inner product h * sum a_j b_j (the trapezoidal rule
// on a staggered interior); sizes must match
double overlap(const std::vector<double>& a, const std::vector<double>& b, double h);

// CSV dump: `# loganharm-lab v1` header, metadata comments, then x,psi_0..psi_{k-1}
void dump_csv(std::ostream& os, const potential_spec& spec, const eigen_result& res);

} // namespace loganharm

#endif
