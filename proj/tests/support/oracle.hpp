#ifndef LOGANHARM_TEST_ORACLE_HPP
#define LOGANHARM_TEST_ORACLE_HPP

#include <functional>
#include <vector>

// independent reference lane for the test suite: dense implicit-shift QL on a
// midpoint-sampled staggered grid. Deliberately shares no code or numerical
// choices with the library (which uses Sturm bisection and cell-averaged
// potential entries), so agreement between the two is meaningful.
namespace oracle {

// all eigenvalues of the symmetric tridiagonal matrix (d, e), ascending;
// d has n entries, e the n-1 sub-diagonal entries
std::vector<double> ql_eigenvalues(std::vector<double> d, std::vector<double> e);

// lowest k levels of -psi'' + V psi on (x_lo, x_hi) with Dirichlet walls,
// V sampled at staggered cell midpoints x_j = x_lo + (j+1/2) h
std::vector<double> lowest_levels(const std::function<double(double)>& V,
                                  double x_lo, double x_hi, int n, int k);

} // namespace oracle

#endif
