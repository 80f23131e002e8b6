#include "loganharm/largen.hpp"
#include "loganharm/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace loganharm {

std::string regime_name(regime r) {
    switch (r) {
        case regime::suppressed: return "suppressed";
        case regime::split: return "split";
        default: return "invisible";
    }
}

largen_estimate estimate_spectrum(const potential_spec& spec, int n_max) {
    if (n_max < 0)
        throw std::invalid_argument("n_max must be non-negative");
    const minimum_info info = locate_minimum(spec);   // propagates no_minimum_error
    const double eps0 = std::sqrt(info.curvature / 2.0);
    largen_estimate est;
    est.offset = info.depth;
    est.spacing = 2.0 * eps0;
    est.R = info.R;
    est.levels.reserve(n_max + 1);
    for (int n = 0; n <= n_max; ++n)
        est.levels.push_back((2.0 * n + 1.0) * eps0);
    return est;
}

std::vector<double> centrifugal_exact(double N, int n_max) {
    if (N <= 0.0)
        throw std::invalid_argument("N must be positive");
    if (n_max < 0)
        throw std::invalid_argument("n_max must be non-negative");
    std::vector<double> out;
    out.reserve(n_max + 1);
    for (int n = 0; n <= n_max; ++n)
        out.push_back(4.0 * n + 2.0 * N + 3.0);
    return out;
}

validity_report assess_validity(const log_anharmonic& spec, int n_of_interest,
                                double c_lo) {
    validate(potential_spec{spec});
    if (n_of_interest < 0)
        throw std::invalid_argument("n_of_interest must be non-negative");
    const double w = spec.omega;
    const double R = spec.g / w;
    const double spacing = 2.0 * std::sqrt(2.0) * w;
    validity_report rep;
    rep.R = R;
    rep.ratio_g_sqrtomega = spec.g / std::sqrt(w);
    rep.xi_lower = c_lo / std::sqrt(w);
    rep.xi_upper = R;
    // left/right quadratic approximants intersect at x=0 at height V(R)+2w^2R^2;
    // the gap to the estimated level E_n = V(R)+sqrt(2)(2n+1)w decides visibility
    rep.barrier_gap = 2.0 * w * w * R * R -
                      std::sqrt(2.0) * (2.0 * n_of_interest + 1.0) * w;
    if (rep.xi_lower < 0.2 * R && rep.barrier_gap > 10.0 * spacing)
        rep.r = regime::suppressed;
    else if (rep.barrier_gap <= 0.0)
        rep.r = regime::invisible;
    else
        rep.r = regime::split;
    return rep;
}

overlap_result approximant_overlap(const log_anharmonic& spec) {
    validate(potential_spec{spec});
    const double R = spec.g / spec.omega;
    const double s = std::sqrt(2.0) * spec.omega * R * R;
    return {s > 700.0 ? 0.0 : std::exp(-s), -s};
}

} // namespace loganharm
