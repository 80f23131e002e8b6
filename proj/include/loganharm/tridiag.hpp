#ifndef LOGANHARM_TRIDIAG_HPP
#define LOGANHARM_TRIDIAG_HPP

#include <cstddef>
#include <vector>

namespace loganharm {

// symmetric tridiagonal matrix: diagonal d[0..n-1], off-diagonal e[0..n-2]
struct sym_tridiag {
    std::vector<double> d;
    std::vector<double> e;

    std::size_t size() const { return d.size(); }
};

// number of eigenvalues strictly below lambda (Sturm sequence sign count)
int sturm_count(const sym_tridiag& T, double lambda);

// k lowest eigenvalues by index-targeted bisection to rel_tol relative width.
// The parallel lane distributes whole eigenvalue indices across threads; each
// index runs the identical serial bisection path, so both lanes agree bitwise.
std::vector<double> lowest_eigenvalues(const sym_tridiag& T, int k,
                                       double rel_tol = 1e-13);
std::vector<double> lowest_eigenvalues_serial(const sym_tridiag& T, int k,
                                              double rel_tol = 1e-13);

// inverse iteration for the eigenvector at eigenvalue lambda, reorthogonalized
// against `against` each sweep (for clustered eigenvalues). The start vector is
// a fixed-seed pseudorandom vector (seed offset by state_index), so results are
// deterministic. Returns the vector normalized to unit Euclidean norm.
// Throws convergence_error if the iteration fails to settle.
std::vector<double> inverse_iteration(const sym_tridiag& T, double lambda,
                                      const std::vector<std::vector<double>>& against,
                                      int state_index);

// y = T x
void apply(const sym_tridiag& T, const std::vector<double>& x, std::vector<double>& y);

// ||T x - lambda x||_2 for a unit-norm x
double residual_norm(const sym_tridiag& T, double lambda, const std::vector<double>& x);

} // namespace loganharm

#endif
