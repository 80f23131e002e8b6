#ifndef LOGANHARM_EXPERIMENTS_HPP
#define LOGANHARM_EXPERIMENTS_HPP

#include "loganharm/eigensolver.hpp"
#include "loganharm/largen.hpp"
#include "loganharm/potentials.hpp"

#include <string>
#include <utility>
#include <vector>

namespace loganharm {

// outcome of one built-in assertion of an experiment
struct assertion {
    std::string name;
    bool pass;
    std::string detail;
};

struct table1_row {
    int n;
    double largen_shift;
    double numeric_shift;
    double difference;   // largen - numeric
};

struct table1_result {
    std::vector<table1_row> rows;
    double tol;
    int grid_points;
    std::vector<assertion> checks;
    bool pass;

    std::string to_csv() const;
    std::string to_json() const;
};

// low-lying level shifts of the omega=0.001, g=1 logarithmic model: the
// analytic ladder against the grid-converged solver, n = 0..3
table1_result table1(double tol = 1e-8);

struct sweep_row {
    double omega;
    double R;
    double delta0;
    double delta1;
    double overlap;       // Gaussian mirror overlap (0 when it underflows)
    std::string regime;
    std::string note;     // non-empty when the solver failed for this point
};

struct sweep_result {
    double g;
    double tol;
    std::vector<sweep_row> rows;
    std::vector<assertion> checks;
    bool pass;

    std::string to_csv() const;
    std::string to_json() const;
};

// doublet splittings, overlaps and regimes across omega at fixed g; points run
// concurrently, output rows stay in input order, failed points are flagged
sweep_result splitting_sweep(double g, const std::vector<double>& omega_list,
                             double tol = 1e-6);

struct delta_row {
    double alpha;
    double e0_power;
    double lambda_plus_e0_log;   // lambda + E_0 of the mapped logarithmic model
    double residual;
};

struct delta_result {
    double omega;
    double lambda;
    double tol;
    std::vector<delta_row> rows;
    std::vector<assertion> checks;
    bool pass;

    std::string to_csv() const;
    std::string to_json() const;
};

// order check of the small-exponent expansion: the residual between the
// power-law ground level and its logarithmic image scales as O(alpha^2)
delta_result delta_expansion_check(double omega, double lambda,
                                   std::vector<double> alpha_list,
                                   double tol = 1e-7);

struct figure_bundle {
    std::string name;
    // (table name, CSV text) pairs; every CSV carries the versioned header
    std::vector<std::pair<std::string, std::string>> tables;
    std::vector<assertion> checks;
    std::string metadata_json;
    bool pass;

    std::string to_csv() const;   // tables concatenated with section comments
    std::string to_json() const;
};

enum class figure { fig1, fig2, fig3, fig4 };

// curve/level/wavefunction data at the four reference parameter sets:
// fig1: omega=0.001 g=1 potential vs quadratic approximant near x=R;
// fig2: omega=1 g=1 potential with both approximants and their x=0 crossing;
// fig3: omega=1 g=1 low states (n=0..3) and levels;
// fig4: omega=1 g=0.1 shallow-well limit
figure_bundle figure_data(figure which, double tol = 1e-6);

struct regime_report {
    double omega;
    double g;
    double R;
    std::vector<double> splittings;       // Delta_0, Delta_1
    std::vector<double> largen_errors;    // numeric - estimate per level, n=0..3
    std::string regime;
    std::string notes;

    std::string to_json() const;
};

regime_report make_regime_report(double omega, double g, double tol = 1e-6);

} // namespace loganharm

#endif
