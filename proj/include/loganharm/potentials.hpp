#ifndef LOGANHARM_POTENTIALS_HPP
#define LOGANHARM_POTENTIALS_HPP

#include <array>
#include <string>
#include <variant>

namespace loganharm {

// the six analytic potential families
struct quadratic {            // V = w^2 x^2
    double omega;
};
struct log_anharmonic {       // V = w^2 x^2 - 2 g^2 ln|x|, even, full line
    double omega;
    double g;
};
struct power_law {            // V = w^2 x^2 + lambda |x|^alpha, even, full line
    double omega;
    double lambda;
    double alpha;
};
struct log_power {            // V = w^2 x^2 - 2 g^2 (ln x)^p, half line x>0
    double omega;
    double g;
    int p;
};
struct centrifugal {          // V = x^2 + N(N+1)/x^2, half line x>0
    double N;
};
struct quad_log_well {        // V = x^2 (ln|x| - c), even continuation to x<0
    double c;
};

using potential_spec = std::variant<quadratic, log_anharmonic, power_law,
                                    log_power, centrifugal, quad_log_well>;

struct minimum_info {
    double R;          // location of the minimum, rightmost when several exist
    double depth;      // V(R)
    double curvature;  // V''(R) > 0
    double residual;   // |V'(R)| actually achieved
};

// result of the small-exponent mapping of a power-law interaction onto the
// logarithmic model: lambda |x|^alpha ~ lambda - 2 g^2 ln|x| + O(alpha^2)
struct log_mapping {
    log_anharmonic spec;
    double offset;          // energy shift (= lambda)
    bool alpha_warning;     // |alpha| too large for the mapping to be accurate
};

// throws std::invalid_argument with a field-specific message on bad parameters
void validate(const potential_spec& spec);

bool is_half_line(const potential_spec& spec);
bool is_even_family(const potential_spec& spec);
bool is_log_singular(const potential_spec& spec);  // V(x) -> -inf or +inf as x -> 0
std::string family_name(const potential_spec& spec);

// closed-form value; domain errors at x=0 for log-singular families and at
// x<=0 for half-line families
double evaluate(const potential_spec& spec, double x);

// analytic V', V'', V''' at x (entries beyond `order` are zero);
// same domain restrictions as evaluate, plus x != 0 wherever a derivative
// of the requested order is singular there
std::array<double, 3> derivatives(const potential_spec& spec, double x, int order = 3);

// mean of V over the cell [center-h/2, center+h/2]; exact antiderivatives for
// every term except the centrifugal core (non-integrable at 0), which is
// sampled at the cell midpoint.  Cells must not straddle x=0.
double cell_average(const potential_spec& spec, double center, double h);

// root tolerance on V' for bracketing searches (criterion: |V'(R)| <= tol)
inline constexpr double root_tolerance = 1e-12;

// closed form where available, otherwise geometric-scan bracketing plus
// bisection to 1e-13 relative and a Newton polish; maximal-root rule when
// several stationary points exist; throws no_minimum_error when V has no
// interior minimum at x>0
minimum_info locate_minimum(const potential_spec& spec);

// requires lambda*alpha < 0; throws std::domain_error otherwise
log_mapping map_powerlaw_to_log(double omega, double lambda, double alpha);

} // namespace loganharm

#endif
