#ifndef LOGANHARM_ERRORS_HPP
#define LOGANHARM_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace loganharm {

// thrown when a potential family has no interior minimum at x>0, or when the
// bracketing scan finds no sign change of V' on (1, x_scan_max]
class no_minimum_error : public std::runtime_error {
public:
    explicit no_minimum_error(const std::string& msg) : std::runtime_error(msg) {}
};

// grid incompatible with the potential's domain or singularity structure,
// or an eigenpair request the grid cannot support
class grid_error : public std::invalid_argument {
public:
    explicit grid_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// grid refinement exhausted without meeting the target tolerance; carries the
// best extrapolated estimate so callers can still inspect it
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& msg, std::vector<double> best,
                      double achieved, int n_points)
        : std::runtime_error(msg), best_energies(std::move(best)),
          achieved_tol(achieved), last_n_points(n_points) {}

    std::vector<double> best_energies;
    double achieved_tol;
    int last_n_points;
};

} // namespace loganharm

#endif
