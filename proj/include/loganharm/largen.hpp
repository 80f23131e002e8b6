#ifndef LOGANHARM_LARGEN_HPP
#define LOGANHARM_LARGEN_HPP

#include "loganharm/potentials.hpp"

#include <string>
#include <vector>

namespace loganharm {

// leading-order spectrum estimate built on the quadratic expansion about the
// minimum at x=R: E_n ~ V(R) + (2n+1) sqrt(V''(R)/2)
struct largen_estimate {
    double offset;               // V(R)
    double spacing;              // 2 sqrt(V''(R)/2), the equidistant gap
    std::vector<double> levels;  // eps_n = (2n+1) sqrt(V''(R)/2), n = 0..n_max
    double R;
};

enum class regime { suppressed, split, invisible };

std::string regime_name(regime r);

// diagnostics for how trustworthy the expansion is at given (omega, g)
struct validity_report {
    double R;
    double ratio_g_sqrtomega;   // g / sqrt(omega); >> 1 required for safety
    double xi_lower;            // displacement below which Gaussian tails are negligible
    double xi_upper;            // upper edge of the expansion window (= R)
    double barrier_gap;         // approximant intersection height at x=0 minus E_n estimate
    regime r;
};

// Gaussian-approximant mirror overlap exp(-sqrt(2) omega R^2); values below
// exp(-700) underflow and are reported as 0 alongside the exact log
struct overlap_result {
    double value;
    double log_value;
};

// tail-mass constant for xi_lower = c_lo / sqrt(omega): chosen so the Gaussian
// mass beyond xi is below 1e-8, i.e. sqrt(2) xi^2 / 2 = 19 at omega = 1
inline const double default_c_lo = 5.18457936297764;   // sqrt(38/sqrt(2))

largen_estimate estimate_spectrum(const potential_spec& spec, int n_max);

// exact benchmark spectrum E_n = 4n + 2N + 3 for the centrifugal family
std::vector<double> centrifugal_exact(double N, int n_max);

validity_report assess_validity(const log_anharmonic& spec, int n_of_interest,
                                double c_lo = default_c_lo);

overlap_result approximant_overlap(const log_anharmonic& spec);

} // namespace loganharm

#endif
