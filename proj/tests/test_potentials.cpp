#include <doctest.h>

#include "loganharm/errors.hpp"
#include "loganharm/potentials.hpp"

#include "frozen.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

using namespace loganharm;

namespace {

// composite Simpson on [a, b]
double simpson(const std::function<double(double)>& f, double a, double b,
               int intervals) {
    const double h = (b - a) / intervals;
    double acc = f(a) + f(b);
    for (int i = 1; i < intervals; ++i)
        acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// integral over (0, b] of an integrand with an integrable singularity at 0:
// geometric subdivision toward the origin, Simpson on each piece
double singular_integral(const std::function<double(double)>& f, double b) {
    double total = 0.0, hi = b;
    for (int j = 0; j < 60; ++j) {
        const double lo = hi / 2.0;
        total += simpson(f, lo, hi, 64);
        hi = lo;
    }
    return total;
}

double fd1(const potential_spec& s, double x) {
    const double h = 1e-5 * std::max(1.0, std::abs(x));
    auto f = [&](double t) { return evaluate(s, t); };
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) /
           (12 * h);
}

double fd2(const potential_spec& s, double x) {
    const double h = 1e-4 * std::max(1.0, std::abs(x));
    auto f = [&](double t) { return evaluate(s, t); };
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) -
            f(x - 2 * h)) /
           (12 * h * h);
}

double fd3(const potential_spec& s, double x) {
    const double h = 5e-3 * std::max(1.0, std::abs(x));
    auto f = [&](double t) { return evaluate(s, t); };
    return (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) /
           (2 * h * h * h);
}

void check_derivatives(const potential_spec& s, double x, double rel) {
    const auto d = derivatives(s, x);
    CHECK(d[0] == doctest::Approx(fd1(s, x)).epsilon(rel));
    CHECK(d[1] == doctest::Approx(fd2(s, x)).epsilon(rel));
    CHECK(d[2] == doctest::Approx(fd3(s, x)).epsilon(std::max(rel, 5e-3)));
}

} // namespace

TEST_CASE("evaluate: closed forms and symmetry") {
    CHECK(evaluate(quadratic{1.5}, 2.0) == doctest::Approx(9.0).epsilon(1e-15));
    const double e = std::exp(1.0);
    CHECK(evaluate(log_anharmonic{1.0, 2.0}, e) ==
          doctest::Approx(e * e - 8.0).epsilon(1e-14));
    CHECK(evaluate(power_law{1.0, -2.0, 0.5}, 4.0) ==
          doctest::Approx(16.0 - 4.0).epsilon(1e-14));
    CHECK(evaluate(power_law{1.0, -2.0, 0.5}, 0.0) == 0.0);
    CHECK(evaluate(log_power{1.0, 1.0, 2}, e) ==
          doctest::Approx(e * e - 2.0).epsilon(1e-14));
    CHECK(evaluate(centrifugal{10.0}, 2.0) ==
          doctest::Approx(4.0 + 110.0 / 4.0).epsilon(1e-14));
    CHECK(evaluate(quad_log_well{0.5}, e) ==
          doctest::Approx(e * e * 0.5).epsilon(1e-14));
    CHECK(evaluate(quad_log_well{0.5}, 0.0) == 0.0);

    for (double x : {0.37, 1.9, 2.6}) {
        CHECK(evaluate(log_anharmonic{1.3, 0.7}, -x) ==
              evaluate(log_anharmonic{1.3, 0.7}, x));
        CHECK(evaluate(power_law{1.0, -2.0, 0.01}, -x) ==
              evaluate(power_law{1.0, -2.0, 0.01}, x));
        CHECK(evaluate(quad_log_well{0.5}, -x) ==
              evaluate(quad_log_well{0.5}, x));
    }
}

TEST_CASE("evaluate: domain errors") {
    CHECK_THROWS_AS(evaluate(log_anharmonic{1.0, 1.0}, 0.0), std::domain_error);
    CHECK_THROWS_AS(evaluate(power_law{1.0, -2.0, -1.0}, 0.0),
                    std::domain_error);
    CHECK_THROWS_AS(evaluate(log_power{1.0, 1.0, 2}, 0.0), std::domain_error);
    CHECK_THROWS_AS(evaluate(log_power{1.0, 1.0, 2}, -1.0), std::domain_error);
    CHECK_THROWS_AS(evaluate(centrifugal{1.0}, 0.0), std::domain_error);
    CHECK_THROWS_AS(evaluate(centrifugal{1.0}, -0.5), std::domain_error);
}

TEST_CASE("validate: parameter screening") {
    CHECK_NOTHROW(validate(log_anharmonic{1.0, 1.0}));
    CHECK_THROWS_WITH_AS(validate(log_anharmonic{0.0, 1.0}),
                         "omega must be positive", std::invalid_argument);
    CHECK_THROWS_WITH_AS(validate(log_anharmonic{-1.0, 1.0}),
                         "omega must be positive", std::invalid_argument);
    CHECK_THROWS_WITH_AS(validate(log_anharmonic{1.0, 0.0}),
                         "g must be positive", std::invalid_argument);
    CHECK_THROWS_AS(validate(quadratic{std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(validate(log_power{1.0, 1.0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(log_power{1.0, 1.0, -2}), std::invalid_argument);
    CHECK_THROWS_AS(validate(centrifugal{0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(quad_log_well{std::numeric_limits<double>::infinity()}),
                    std::invalid_argument);
}

TEST_CASE("derivatives: finite-difference cross-check") {
    check_derivatives(quadratic{1.5}, 0.8, 1e-6);
    for (double x : {0.37, 1.9, -2.6})
        check_derivatives(log_anharmonic{1.3, 0.7}, x, 1e-6);
    for (double x : {0.5, 2.0}) check_derivatives(power_law{1.0, -2.0, 0.01}, x, 1e-6);
    for (double x : {0.8, 5.0, 9.0}) check_derivatives(log_power{0.5, 2.0, 2}, x, 1e-6);
    for (double x : {3.0, 30.0}) check_derivatives(log_power{0.2, 1.5, 3}, x, 1e-6);
    for (double x : {0.7, 2.2}) check_derivatives(centrifugal{3.5}, x, 1e-6);
    for (double x : {0.3, 1.7, -1.1}) check_derivatives(quad_log_well{0.5}, x, 1e-6);

    // exact values where trivial
    const auto dq = derivatives(quadratic{2.0}, 1.5);
    CHECK(dq[0] == doctest::Approx(12.0).epsilon(1e-15));
    CHECK(dq[1] == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(dq[2] == 0.0);

    CHECK_THROWS_AS(derivatives(quad_log_well{0.5}, 0.0, 2), std::domain_error);
    CHECK(derivatives(quad_log_well{0.5}, 0.0, 1)[0] == 0.0);
    CHECK_THROWS_AS(derivatives(quadratic{1.0}, 0.0, 4), std::invalid_argument);
}

TEST_CASE("cell_average: agrees with direct quadrature") {
    auto check_cell = [](const potential_spec& s, double center, double h) {
        auto f = [&](double x) { return evaluate(s, x); };
        const double got = cell_average(s, center, h);
        const double want =
            simpson(f, center - h / 2, center + h / 2, 4096) / h;
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
    };
    check_cell(quadratic{1.5}, 0.8, 0.05);
    check_cell(log_anharmonic{1.0, 1.0}, 1.3, 0.05);
    check_cell(power_law{1.0, -2.0, 0.5}, 0.9, 0.05);
    check_cell(power_law{1.0, -2.0, -1.0}, 0.9, 0.05); // alpha = -1 log branch
    check_cell(log_power{0.5, 2.0, 3}, 4.0, 0.05);
    check_cell(quad_log_well{0.5}, 1.1, 0.05);

    // origin-adjacent cell of the log family: integrable ln singularity
    const potential_spec logs = log_anharmonic{1.0, 1.0};
    const double h = 0.01;
    const double got = cell_average(logs, h / 2, h);
    const double want =
        singular_integral([&](double x) { return evaluate(logs, x); }, h) / h;
    CHECK(got == doctest::Approx(want).epsilon(1e-9));

    // mirrored cells agree exactly for even families
    CHECK(cell_average(logs, -1.3, 0.05) == cell_average(logs, 1.3, 0.05));

    // the centrifugal core is not integrable through cells at the wall, so it
    // stays midpoint-sampled by design while the x^2 part is still averaged
    {
        const double mid = 0.7, hc = 0.01;
        const double want = mid * mid + hc * hc / 12.0 + 30.0 / (mid * mid);
        CHECK(cell_average(centrifugal{5.0}, mid, hc) ==
              doctest::Approx(want).epsilon(1e-14));
    }

    CHECK_THROWS_AS(cell_average(logs, 0.0, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(cell_average(logs, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("locate_minimum: closed-form families") {
    for (auto [w, g] : {std::pair{1.0, 1.0}, {0.001, 1.0}, {2.5, 0.3}}) {
        const auto mi = locate_minimum(log_anharmonic{w, g});
        CHECK(mi.R == doctest::Approx(g / w).epsilon(1e-12));
        const double depth = g * g - 2.0 * g * g * std::log(g / w);
        CHECK(mi.depth == doctest::Approx(depth).epsilon(1e-12));
        CHECK(mi.curvature == doctest::Approx(4.0 * w * w).epsilon(1e-12));
        CHECK(mi.residual <= root_tolerance);
    }
    const auto mi = locate_minimum(log_anharmonic{0.001, 1.0});
    CHECK(mi.depth == doctest::Approx(frozen::depth_w1em3).epsilon(1e-13));

    for (double N : {1.0, 5.0, 10.0}) {
        const auto mc = locate_minimum(centrifugal{N});
        CHECK(mc.R == doctest::Approx(std::pow(N * (N + 1), 0.25)).epsilon(1e-12));
        CHECK(mc.depth ==
              doctest::Approx(2.0 * std::sqrt(N * (N + 1))).epsilon(1e-12));
        CHECK(mc.curvature == doctest::Approx(8.0).epsilon(1e-12));
        CHECK(mc.residual <= root_tolerance);
    }

    for (double c : {-1.0, 0.0, 0.5, 2.0}) {
        const auto mq = locate_minimum(quad_log_well{c});
        const double R = std::exp(c - 0.5);
        CHECK(mq.R == doctest::Approx(R).epsilon(1e-12));
        CHECK(mq.depth == doctest::Approx(-R * R / 2.0).epsilon(1e-12));
        CHECK(mq.curvature == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(mq.residual <= root_tolerance);
        CHECK(std::abs(derivatives(quad_log_well{c}, mq.R, 1)[0]) < 1e-12);
    }

    // p = 1 log-power reduces to the logarithmic family on the half line
    const auto mp1 = locate_minimum(log_power{0.7, 1.3, 1});
    CHECK(mp1.R == doctest::Approx(1.3 / 0.7).epsilon(1e-12));
    CHECK(mp1.curvature == doctest::Approx(4.0 * 0.49).epsilon(1e-12));
}

TEST_CASE("locate_minimum: log-power maximal roots and failures") {
    const auto p2 = locate_minimum(log_power{0.001, 1.0, 2});
    CHECK(p2.R == doctest::Approx(frozen::logpower_R_w1em3_p2).epsilon(1e-9));
    CHECK(p2.residual < 1e-12);
    CHECK(p2.curvature > 0.0);

    const auto p3 = locate_minimum(log_power{0.001, 1.0, 3});
    CHECK(p3.R == doctest::Approx(frozen::logpower_R_w1em3_p3).epsilon(1e-9));
    CHECK(p3.residual < 1e-12);

    const auto q2 = locate_minimum(log_power{0.5, 2.0, 2});
    CHECK(q2.R == doctest::Approx(frozen::logpower_R_w05_g2_p2).epsilon(1e-9));
    const auto q3 = locate_minimum(log_power{0.2, 1.5, 3});
    CHECK(q3.R == doctest::Approx(frozen::logpower_R_w02_g15_p3).epsilon(1e-9));

    // at omega = g the derivative never changes sign right of x = 1
    CHECK_THROWS_AS(locate_minimum(log_power{1.0, 1.0, 2}), no_minimum_error);
    CHECK_THROWS_AS(locate_minimum(quadratic{1.0}), no_minimum_error);
    CHECK_THROWS_AS(locate_minimum(power_law{1.0, 2.0, 1.0}), no_minimum_error);
}

TEST_CASE("locate_minimum: power-law family") {
    const auto mi = locate_minimum(power_law{1.0, -2.0, 0.01});
    CHECK(mi.residual <= root_tolerance);
    CHECK(mi.curvature > 0.0);
    CHECK(std::abs(derivatives(power_law{1.0, -2.0, 0.01}, mi.R, 1)[0]) < 1e-12);
    // stationarity equation 2 omega^2 R = -lambda alpha R^(alpha-1)
    const double lhs = 2.0 * mi.R;
    const double rhs = 0.02 * std::pow(mi.R, -0.99);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("map_powerlaw_to_log") {
    const auto m = map_powerlaw_to_log(1.0, -2.0, 0.01);
    CHECK(m.spec.omega == 1.0);
    CHECK(m.spec.g == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(m.offset == -2.0);
    CHECK_FALSE(m.alpha_warning);
    CHECK(map_powerlaw_to_log(1.0, -2.0, 0.3).alpha_warning);
    CHECK_THROWS_AS(map_powerlaw_to_log(1.0, 2.0, 0.01), std::domain_error);
    CHECK_THROWS_AS(map_powerlaw_to_log(1.0, -2.0, -0.01), std::domain_error);
}

TEST_CASE("family metadata") {
    CHECK(is_half_line(potential_spec{centrifugal{1.0}}));
    CHECK(is_half_line(potential_spec{log_power{1.0, 1.0, 2}}));
    CHECK_FALSE(is_half_line(potential_spec{log_anharmonic{1.0, 1.0}}));
    CHECK(is_even_family(potential_spec{log_anharmonic{1.0, 1.0}}));
    CHECK(is_even_family(potential_spec{quad_log_well{0.5}}));
    CHECK_FALSE(is_even_family(potential_spec{centrifugal{1.0}}));
    CHECK(is_log_singular(potential_spec{log_anharmonic{1.0, 1.0}}));
    CHECK_FALSE(is_log_singular(potential_spec{quadratic{1.0}}));
    CHECK(family_name(potential_spec{log_anharmonic{1.0, 1.0}}) ==
          "log_anharmonic");
}
