#include "loganharm/potentials.hpp"
#include "loganharm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace loganharm {

namespace {

// integer power, exponent >= 0
double ipow(double base, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= base;
    return r;
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v))
        throw std::invalid_argument(std::string(name) + " must be finite");
}

void require_positive(double v, const char* name) {
    require_finite(v, name);
    if (v <= 0.0)
        throw std::invalid_argument(std::string(name) + " must be positive");
}

// antiderivative of ln(t) on t>=0, continuous limit F(0)=0
double antider_log(double t) {
    return t > 0.0 ? t * std::log(t) - t : 0.0;
}

// antiderivative of (ln t)^p on t>=0:
//   G_p(t) = t * sum_{k=0..p} (-1)^(p-k) p!/k! (ln t)^k,  G_p(0)=0
double antider_logpow(double t, int p) {
    if (t <= 0.0) return 0.0;
    const double L = std::log(t);
    double coef = 1.0;                  // p!/k! at k=p
    double sum = ipow(L, p);
    for (int k = p - 1; k >= 0; --k) {
        coef *= -(double)(k + 1);       // (-1)^(p-k) p!/k!
        sum += coef * ipow(L, k);
    }
    return t * sum;
}

// antiderivative of t^2 ln(t) on t>=0
double antider_sqlog(double t) {
    return t > 0.0 ? t * t * t * (std::log(t) / 3.0 - 1.0 / 9.0) : 0.0;
}

[[noreturn]] void origin_error(const potential_spec& spec) {
    throw std::domain_error(family_name(spec) + " potential is singular at x=0");
}

[[noreturn]] void halfline_error(const potential_spec& spec) {
    throw std::domain_error(family_name(spec) + " potential is defined on x>0 only");
}

// bisection on V' over a bracket with a sign change, to 1e-13 relative width,
// then two Newton steps to push |V'| toward machine precision
double refine_root(const potential_spec& spec, double lo, double hi) {
    double flo = derivatives(spec, lo, 1)[0];
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = derivatives(spec, mid, 1)[0];
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        const auto d = derivatives(spec, x, 2);
        if (d[1] == 0.0) break;
        const double step = d[0] / d[1];
        const double next = x - step;
        if (next <= 0.0) break;
        x = next;
    }
    return x;
}

minimum_info make_info(const potential_spec& spec, double R, double depth, double curvature) {
    return {R, depth, curvature, std::abs(derivatives(spec, R, 1)[0])};
}

} // namespace

void validate(const potential_spec& spec) {
    std::visit([](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, quadratic>) {
            require_positive(s.omega, "omega");
        } else if constexpr (std::is_same_v<T, log_anharmonic>) {
            require_positive(s.omega, "omega");
            require_positive(s.g, "g");
        } else if constexpr (std::is_same_v<T, power_law>) {
            require_positive(s.omega, "omega");
            require_finite(s.lambda, "lambda");
            require_finite(s.alpha, "alpha");
        } else if constexpr (std::is_same_v<T, log_power>) {
            require_positive(s.omega, "omega");
            require_positive(s.g, "g");
            if (s.p < 1)
                throw std::invalid_argument("p must be a positive integer");
        } else if constexpr (std::is_same_v<T, centrifugal>) {
            require_positive(s.N, "N");
        } else {
            require_finite(s.c, "c");
        }
    }, spec);
}

bool is_half_line(const potential_spec& spec) {
    return std::holds_alternative<log_power>(spec) ||
           std::holds_alternative<centrifugal>(spec);
}

bool is_even_family(const potential_spec& spec) {
    return !is_half_line(spec);
}

bool is_log_singular(const potential_spec& spec) {
    return std::holds_alternative<log_anharmonic>(spec) ||
           std::holds_alternative<log_power>(spec) ||
           std::holds_alternative<centrifugal>(spec);
}

std::string family_name(const potential_spec& spec) {
    return std::visit([](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, quadratic>) return "quadratic";
        else if constexpr (std::is_same_v<T, log_anharmonic>) return "log_anharmonic";
        else if constexpr (std::is_same_v<T, power_law>) return "power_law";
        else if constexpr (std::is_same_v<T, log_power>) return "log_power";
        else if constexpr (std::is_same_v<T, centrifugal>) return "centrifugal";
        else return "quad_log_well";
    }, spec);
}

double evaluate(const potential_spec& spec, double x) {
    return std::visit([&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, quadratic>) {
            return s.omega * s.omega * x * x;
        } else if constexpr (std::is_same_v<T, log_anharmonic>) {
            if (x == 0.0) origin_error(spec);
            return s.omega * s.omega * x * x - 2.0 * s.g * s.g * std::log(std::abs(x));
        } else if constexpr (std::is_same_v<T, power_law>) {
            if (x == 0.0) {
                if (s.alpha > 0.0) return 0.0;
                origin_error(spec);
            }
            const double ax = std::abs(x);
            return s.omega * s.omega * x * x + s.lambda * std::exp(s.alpha * std::log(ax));
        } else if constexpr (std::is_same_v<T, log_power>) {
            if (x <= 0.0) halfline_error(spec);
            return s.omega * s.omega * x * x - 2.0 * s.g * s.g * ipow(std::log(x), s.p);
        } else if constexpr (std::is_same_v<T, centrifugal>) {
            if (x <= 0.0) halfline_error(spec);
            return x * x + s.N * (s.N + 1.0) / (x * x);
        } else {
            if (x == 0.0) return 0.0;   // limit of x^2 (ln|x| - c)
            return x * x * (std::log(std::abs(x)) - s.c);
        }
    }, spec);
}

std::array<double, 3> derivatives(const potential_spec& spec, double x, int order) {
    if (order < 1 || order > 3)
        throw std::invalid_argument("derivative order must be 1, 2 or 3");
    std::array<double, 3> out{0.0, 0.0, 0.0};
    std::visit([&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, quadratic>) {
            const double w2 = s.omega * s.omega;
            out[0] = 2.0 * w2 * x;
            if (order >= 2) out[1] = 2.0 * w2;
        } else if constexpr (std::is_same_v<T, log_anharmonic>) {
            if (x == 0.0) origin_error(spec);
            const double w2 = s.omega * s.omega, g2 = s.g * s.g;
            out[0] = 2.0 * w2 * x - 2.0 * g2 / x;
            if (order >= 2) out[1] = 2.0 * w2 + 2.0 * g2 / (x * x);
            if (order >= 3) out[2] = -4.0 * g2 / (x * x * x);
        } else if constexpr (std::is_same_v<T, power_law>) {
            if (x == 0.0) origin_error(spec);
            const double w2 = s.omega * s.omega;
            const double ax = std::abs(x), sg = x > 0.0 ? 1.0 : -1.0;
            const double a = s.alpha;
            const double pa = s.lambda * a * std::exp((a - 1.0) * std::log(ax));
            out[0] = 2.0 * w2 * x + pa * sg;
            if (order >= 2) out[1] = 2.0 * w2 + pa * (a - 1.0) / ax;
            if (order >= 3) out[2] = pa * (a - 1.0) * (a - 2.0) / (ax * ax) * sg;
        } else if constexpr (std::is_same_v<T, log_power>) {
            if (x <= 0.0) halfline_error(spec);
            const double w2 = s.omega * s.omega, g2 = s.g * s.g;
            const double L = std::log(x);
            const int p = s.p;
            out[0] = 2.0 * w2 * x - 2.0 * p * g2 * ipow(L, p - 1) / x;
            if (order >= 2) {
                // terms with zero coefficient are skipped so L^(negative) never arises
                double t = ipow(L, p - 1);
                if (p >= 2) t -= (p - 1) * ipow(L, p - 2);
                out[1] = 2.0 * w2 + 2.0 * p * g2 * t / (x * x);
            }
            if (order >= 3) {
                double t = 2.0 * ipow(L, p - 1);
                if (p >= 2) t -= 3.0 * (p - 1) * ipow(L, p - 2);
                if (p >= 3) t += (p - 1) * (p - 2) * ipow(L, p - 3);
                out[2] = -2.0 * p * g2 * t / (x * x * x);
            }
        } else if constexpr (std::is_same_v<T, centrifugal>) {
            if (x <= 0.0) halfline_error(spec);
            const double q = s.N * (s.N + 1.0);
            out[0] = 2.0 * x - 2.0 * q / (x * x * x);
            if (order >= 2) out[1] = 2.0 + 6.0 * q / (x * x * x * x);
            if (order >= 3) out[2] = -24.0 * q / (x * x * x * x * x);
        } else {
            // V' = 2x ln|x| + (1-2c) x has limit 0 at x=0; higher orders diverge
            if (x == 0.0) {
                if (order >= 2)
                    throw std::domain_error(
                        "quad_log_well second derivative is singular at x=0");
                return;
            }
            const double L = std::log(std::abs(x));
            out[0] = 2.0 * x * L + (1.0 - 2.0 * s.c) * x;
            if (order >= 2) out[1] = 2.0 * L + 3.0 - 2.0 * s.c;
            if (order >= 3) out[2] = 2.0 / x;
        }
    }, spec);
    return out;
}

double cell_average(const potential_spec& spec, double center, double h) {
    if (h <= 0.0)
        throw std::invalid_argument("cell width must be positive");
    double a = center - 0.5 * h;
    double b = center + 0.5 * h;
    // map negative-side cells of even families onto x>0; cells never straddle 0
    if (b <= 0.0) {
        std::swap(a, b);
        a = -a;
        b = -b;
    }
    if (a < -1e-12 * h)
        throw std::invalid_argument("grid cell straddles the origin");
    a = std::max(a, 0.0);

    return std::visit([&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        const double quad_part = (b * b * b - a * a * a) / (3.0 * h);
        if constexpr (std::is_same_v<T, quadratic>) {
            return s.omega * s.omega * quad_part;
        } else if constexpr (std::is_same_v<T, log_anharmonic>) {
            return s.omega * s.omega * quad_part -
                   2.0 * s.g * s.g * (antider_log(b) - antider_log(a)) / h;
        } else if constexpr (std::is_same_v<T, power_law>) {
            const double ap1 = s.alpha + 1.0;
            if (a == 0.0 && s.alpha <= 0.0) origin_error(spec);
            double pow_part;
            if (std::abs(ap1) < 1e-14)
                pow_part = std::log(b / a) / h;        // alpha == -1
            else
                pow_part = (std::pow(b, ap1) - std::pow(a, ap1)) / (ap1 * h);
            return s.omega * s.omega * quad_part + s.lambda * pow_part;
        } else if constexpr (std::is_same_v<T, log_power>) {
            return s.omega * s.omega * quad_part -
                   2.0 * s.g * s.g *
                       (antider_logpow(b, s.p) - antider_logpow(a, s.p)) / h;
        } else if constexpr (std::is_same_v<T, centrifugal>) {
            // 1/x^2 core is not integrable through 0: sample at the midpoint
            // (states vanish like x^(N+1) there, so the sample is benign)
            const double mid = 0.5 * (a + b);
            return quad_part + s.N * (s.N + 1.0) / (mid * mid);
        } else {
            return (antider_sqlog(b) - antider_sqlog(a)) / h - s.c * quad_part;
        }
    }, spec);
}

minimum_info locate_minimum(const potential_spec& spec) {
    validate(spec);
    return std::visit([&](const auto& s) -> minimum_info {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, quadratic>) {
            throw no_minimum_error("quadratic potential has no interior minimum (R=0)");
        } else if constexpr (std::is_same_v<T, log_anharmonic>) {
            const double R = s.g / s.omega;
            const double depth = (-2.0 * std::log(s.g) + 1.0 + 2.0 * std::log(s.omega)) * s.g * s.g;
            return make_info(spec, R, depth, 4.0 * s.omega * s.omega);
        } else if constexpr (std::is_same_v<T, centrifugal>) {
            const double q = s.N * (s.N + 1.0);
            const double R = std::pow(q, 0.25);
            return make_info(spec, R, 2.0 * std::sqrt(q), 8.0);
        } else if constexpr (std::is_same_v<T, quad_log_well>) {
            const double R = std::exp(s.c - 0.5);
            return make_info(spec, R, -0.5 * R * R, 2.0);
        } else if constexpr (std::is_same_v<T, log_power>) {
            if (s.p == 1) {   // reduces to the plain logarithmic model
                const double R = s.g / s.omega;
                const double depth =
                    (-2.0 * std::log(s.g) + 1.0 + 2.0 * std::log(s.omega)) * s.g * s.g;
                return make_info(spec, R, depth, 4.0 * s.omega * s.omega);
            }
            // stationary points solve R^2 = (p g^2/w^2)(ln R)^(p-1), all with R>1;
            // geometric scan for sign changes of V', then bisection, keeping the
            // maximal root whose curvature is positive
            const double ratio = s.g / s.omega;
            const double x_scan_max = 10.0 * std::sqrt((double)s.p) * ratio *
                std::pow(std::max(1.0, std::log(ratio)), 0.5 * (s.p - 1));
            const double x0 = 1.0 + 1e-9;
            if (x_scan_max <= x0)
                throw no_minimum_error(
                    "log_power scan window (1, x_scan_max] is empty; no minimum");
            const int steps = 4000;
            const double f = std::pow(x_scan_max / x0, 1.0 / steps);
            double best = -1.0, best_curv = 0.0;
            double xa = x0, fa = derivatives(spec, xa, 1)[0];
            for (int i = 1; i <= steps; ++i) {
                const double xb = (i == steps) ? x_scan_max : xa * f;
                const double fb = derivatives(spec, xb, 1)[0];
                if ((fa < 0.0) != (fb < 0.0)) {
                    const double root = refine_root(spec, xa, xb);
                    const double curv = derivatives(spec, root, 2)[1];
                    if (curv > 0.0 && root > best) {
                        best = root;
                        best_curv = curv;
                    }
                }
                xa = xb;
                fa = fb;
            }
            if (best < 0.0)
                throw no_minimum_error(
                    "no sign change of V' on (1, x_scan_max]: log_power potential "
                    "has no interior minimum at these parameters");
            return make_info(spec, best, evaluate(spec, best), best_curv);
        } else {   // power_law
            if (s.lambda * s.alpha >= 0.0 || s.alpha == 2.0)
                throw no_minimum_error(
                    "power_law potential has no interior minimum unless lambda*alpha<0");
            // closed-form stationary point x^(2-alpha) = -lambda alpha/(2 w^2),
            // bracketed and bisected for a residual-certified result
            const double w2 = s.omega * s.omega;
            const double est =
                std::pow(-s.lambda * s.alpha / (2.0 * w2), 1.0 / (2.0 - s.alpha));
            double lo = est * 0.5, hi = est * 2.0;
            for (int widen = 0; widen < 60; ++widen) {
                const double flo = derivatives(spec, lo, 1)[0];
                const double fhi = derivatives(spec, hi, 1)[0];
                if ((flo < 0.0) != (fhi < 0.0)) break;
                lo *= 0.5;
                hi *= 2.0;
            }
            const double root = refine_root(spec, lo, hi);
            const double curv = derivatives(spec, root, 2)[1];
            if (curv <= 0.0)
                throw no_minimum_error(
                    "power_law stationary point is a maximum, not a minimum");
            return make_info(spec, root, evaluate(spec, root), curv);
        }
    }, spec);
}

log_mapping map_powerlaw_to_log(double omega, double lambda, double alpha) {
    require_positive(omega, "omega");
    if (lambda * alpha >= 0.0)
        throw std::domain_error(
            "lambda*alpha must be negative so that g^2 = -lambda*alpha/2 > 0");
    const double g = std::sqrt(-lambda * alpha / 2.0);
    return {log_anharmonic{omega, g}, lambda, std::abs(alpha) > 0.1};
}

} // namespace loganharm
