#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle_helpers.hpp"
#include "uavls/mcsim.hpp"
#include "uavls/specfun.hpp"

using namespace uavls;
using specfun::QuadratureSpec;

TEST_CASE("gaussian_q basic values") {
    CHECK(specfun::gaussian_q(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(specfun::gaussian_q(40.0) < 1e-300);
    CHECK(specfun::gaussian_q(40.0) >= 0.0);
    CHECK_THROWS_AS(specfun::gaussian_q(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(specfun::gaussian_q(INFINITY), std::domain_error);
}

TEST_CASE("gaussian_q matches the trapezoid oracle at x = 1") {
    const double expected = oracle::gaussian_q_trapezoid(1.0);
    CHECK(std::abs(specfun::gaussian_q(1.0) - expected) < 1e-12);
}

TEST_CASE("gaussian_q symmetry Q(x) + Q(-x) = 1") {
    for (double x : {0.0, 0.3, 1.0, 2.5, 5.0, 8.0}) {
        CHECK(std::abs(specfun::gaussian_q(x) + specfun::gaussian_q(-x) - 1.0) <= 1e-14);
    }
}

TEST_CASE("bessel i0/i1 against series oracles") {
    CHECK(specfun::bessel_i0(0.0) == 1.0);
    CHECK(specfun::bessel_i1(0.0) == 0.0);
    CHECK(specfun::bessel_i0(1.0) ==
          doctest::Approx(oracle::i0_series(1.0)).epsilon(1e-13));
    CHECK(specfun::bessel_i1(1.0) ==
          doctest::Approx(oracle::i1_series(1.0)).epsilon(1e-13));
    // leading-order behavior near zero
    CHECK(std::abs(specfun::bessel_i1(1e-8) - 0.5e-8) < 1e-20);
    CHECK_THROWS_AS(specfun::bessel_i0(-1.0), std::domain_error);
    CHECK_THROWS_AS(specfun::bessel_i1(-1.0), std::domain_error);
}

TEST_CASE("scaled bessel stays finite for large arguments") {
    const double v700 = specfun::bessel_i0_scaled(700.0);
    CHECK(v700 > 0.0);
    CHECK(v700 < 1.0);
    const double v1e4 = specfun::bessel_i0_scaled(1e4);
    CHECK(v1e4 > 0.0);
    CHECK(std::isfinite(v1e4));
    // consistency between the scaled and plain forms where both exist
    for (double x : {0.5, 5.0, 19.0, 21.0, 50.0, 300.0}) {
        CHECK(specfun::bessel_i0_scaled(x) ==
              doctest::Approx(specfun::bessel_i0(x) * std::exp(-x)).epsilon(1e-12));
        CHECK(specfun::bessel_i1_scaled(x) ==
              doctest::Approx(specfun::bessel_i1(x) * std::exp(-x)).epsilon(1e-12));
    }
    // series/asymptotic seam: only the function's own slope over the gap
    CHECK(specfun::bessel_i0_scaled(19.999999) ==
          doctest::Approx(specfun::bessel_i0_scaled(20.000001)).epsilon(1e-7));
}

TEST_CASE("marcum_q1 special values and the series oracle") {
    for (double a : {0.0, 0.5, 2.0, 7.0}) CHECK(specfun::marcum_q1(a, 0.0) == 1.0);
    for (double b : {0.1, 1.0, 3.0}) {
        CHECK(specfun::marcum_q1(0.0, b) ==
              doctest::Approx(std::exp(-0.5 * b * b)).epsilon(1e-14));
    }
    CHECK(std::abs(specfun::marcum_q1(1.0, 1.0) - oracle::marcum_q1_series(1.0, 1.0)) <
          1e-12);
    // a handful of spread-out arguments against the same oracle
    for (auto [a, b] : {std::pair{0.3, 2.5}, {2.0, 1.0}, {5.0, 5.5}, {5.477, 10.0},
                        {8.0, 3.0}}) {
        CHECK(std::abs(specfun::marcum_q1(a, b) - oracle::marcum_q1_series(a, b)) < 1e-12);
    }
    CHECK_THROWS_AS(specfun::marcum_q1(-0.1, 1.0), std::domain_error);
    CHECK_THROWS_AS(specfun::marcum_q1(1.0, -0.1), std::domain_error);
}

TEST_CASE("marcum_q1 bounds and monotonicity") {
    std::mt19937 gen(42);
    std::uniform_real_distribution<double> u(0.0, 12.0);
    for (int i = 0; i < 200; ++i) {
        const double a = u(gen), b = u(gen);
        const double q = specfun::marcum_q1(a, b);
        CHECK(q >= 0.0);
        CHECK(q <= 1.0);
        CHECK(specfun::marcum_q1(a + 0.25, b) >= q - 1e-13);
        CHECK(specfun::marcum_q1(a, b + 0.25) <= q + 1e-13);
    }
}

TEST_CASE("marcum_q1 far tails") {
    CHECK(specfun::marcum_q1(1.0, 60.0) < 1e-300);
    CHECK(specfun::marcum_q1(60.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    // large balanced arguments keep a finite answer in (0, 1)
    const double q = specfun::marcum_q1(80.0, 80.0);
    CHECK(q > 0.4);
    CHECK(q < 0.7);
}

TEST_CASE("marcum_p1 complements marcum_q1 and resolves tiny tails") {
    for (auto [a, b] : {std::pair{0.5, 1.0}, {2.0, 2.0}, {4.0, 1.0}, {1.0, 4.0}}) {
        CHECK(specfun::marcum_p1(a, b) + specfun::marcum_q1(a, b) ==
              doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(specfun::marcum_p1(1.0, 0.0) == 0.0);
    CHECK(specfun::marcum_p1(0.0, 1.0) == doctest::Approx(-std::expm1(-0.5)));
    // leading-order lower tail: P1 ~ e^{-a^2/2} b^2/2 for vanishing b
    const double a = 2.234, b = 1e-10;
    const double expected = std::exp(-0.5 * a * a) * 0.5 * b * b;
    CHECK(specfun::marcum_p1(a, b) == doctest::Approx(expected).epsilon(1e-6));
    CHECK_THROWS_AS(specfun::marcum_p1(-1.0, 1.0), std::domain_error);
}

TEST_CASE("exp_marcum_q1 agrees with the plain product and survives overflow") {
    for (auto [w, a, b] : {std::tuple{0.0, 1.0, 2.0}, {30.0, 0.5, 9.0}, {600.0, 0.2, 35.0}}) {
        const double direct = std::exp(w) * specfun::marcum_q1(a, b);
        CHECK(specfun::exp_marcum_q1(w, a, b) == doctest::Approx(direct).epsilon(1e-10));
    }
    // w beyond exp() range: b^2/2 >= w keeps the product bounded
    const double v = specfun::exp_marcum_q1(800.0, 0.05, 40.1);
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
    CHECK(v < 1.0);
}

TEST_CASE("regularized_upper_gamma closed-form cases") {
    for (double x : {0.0, 0.4, 2.0, 9.0}) {
        CHECK(specfun::regularized_upper_gamma(1, x) ==
              doctest::Approx(std::exp(-x)).epsilon(1e-14));
    }
    for (int m : {1, 2, 5, 40}) CHECK(specfun::regularized_upper_gamma(m, 0.0) == 1.0);
    CHECK(specfun::regularized_upper_gamma(3, 2.5) ==
          doctest::Approx(oracle::upper_gamma_direct(3, 2.5)).epsilon(1e-14));
    CHECK_THROWS_AS(specfun::regularized_upper_gamma(0, 1.0), std::domain_error);
    CHECK_THROWS_AS(specfun::regularized_upper_gamma(-3, 1.0), std::domain_error);
}

TEST_CASE("regularized_upper_gamma is the Gamma(m,1) survival function") {
    // empirical survival from 1e6 Erlang draws, checked at a few thresholds
    const int m = 4;
    const double x = 3.7;
    mcsim::TrialRng rng(7, 0);
    const std::uint64_t n = 1'000'000;
    std::uint64_t above = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < m; ++j) acc += rng.exponential();
        if (acc > x) ++above;
    }
    const double emp = static_cast<double>(above) / n;
    const double se = std::sqrt(emp * (1.0 - emp) / n);
    CHECK(std::abs(specfun::regularized_upper_gamma(m, x) - emp) <= 4.0 * se);
}

TEST_CASE("integrate_semi_infinite on textbook integrands") {
    const double e1 = specfun::integrate_semi_infinite(
        [](double x) { return std::exp(-x); }, 0.0);
    CHECK(std::abs(e1 - 1.0) < 1e-10);
    const double e2 = specfun::integrate_semi_infinite(
        [](double x) { return x * std::exp(-0.5 * x * x); }, 0.0);
    CHECK(std::abs(e2 - 1.0) < 1e-10);
}

TEST_CASE("integrate_semi_infinite matches a fixed-grid Simpson oracle on a fading mix") {
    // the L,L outage integrand at a representative parameter set
    const double k_m = 2.5, k_i = 3.0, ratio = 1.7, gamma_t = 2.0, n0_term = 0.05;
    const auto integrand = [&](double g) {
        const double b = std::sqrt(gamma_t * (g / ratio + n0_term));
        return specfun::marcum_q1(std::sqrt(2.0 * k_m), b) * oracle::density_los(k_i, g);
    };
    const double expected = oracle::simpson(integrand, 0.0, 200.0, 2000000);
    const double got = specfun::integrate_semi_infinite(integrand, 0.0);
    CHECK(std::abs(got - expected) < 1e-6);
}

TEST_CASE("integrate_semi_infinite rejects non-decaying tails") {
    CHECK_THROWS_AS(specfun::integrate_semi_infinite(
                        [](double x) { return 1.0 / (1.0 + x); }, 0.0),
                    quadrature_error);
    try {
        specfun::integrate_semi_infinite([](double x) { return 1.0 / (1.0 + x); }, 0.0);
    } catch (const quadrature_error& e) {
        CHECK(e.partial_estimate() > 1.0);  // partial progress is reported
    }
}

TEST_CASE("quadrature budget exhaustion carries a partial estimate") {
    QuadratureSpec tight;
    tight.max_subdivisions = 3;
    tight.relative_tolerance = 1e-14;
    tight.absolute_tolerance = 1e-300;
    CHECK_THROWS_AS(specfun::integrate_finite(
                        [](double x) { return std::sin(50.0 * x) * std::sin(51.0 * x); },
                        0.0, 20.0, tight),
                    quadrature_error);
}

TEST_CASE("QuadratureSpec validation") {
    QuadratureSpec bad;
    bad.relative_tolerance = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.max_subdivisions = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.tail_truncation_mass = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

// The three integral identities behind the closed forms, spot-checked on
// random parameter tuples at quadrature tolerance.
TEST_CASE("nuttall identity: exponential times Marcum tail") {
    // Second-term weight is f^2/(c^2+f^2); the d = 0 reduction pins it:
    // int_0^inf e^{-c^2 x} Q1(e, f sqrt(2x)) dx
    //   = (1 - f^2/(c^2+f^2) exp(-c^2 e^2 / (2(c^2+f^2)))) / c^2.
    std::mt19937 gen(2024);
    std::uniform_real_distribution<double> uc(0.4, 1.6), ud(0.0, 2.5), ue(0.0, 3.0),
        uf(0.3, 1.5);
    for (int i = 0; i < 20; ++i) {
        const double c = uc(gen), d = ud(gen), e = ue(gen), f = uf(gen);
        const double c2 = c * c, f2 = f * f;
        const auto integrand = [&](double x) {
            return std::exp(-c2 * x) * specfun::marcum_q1(e, f * std::sqrt(2.0 * x));
        };
        const double lhs = specfun::integrate_semi_infinite(integrand, 0.5 * d * d);
        const double rhs =
            (std::exp(-0.5 * c2 * d * d) * specfun::marcum_q1(e, d * f) -
             f2 / (c2 + f2) * std::exp(-0.5 * c2 * e * e / (c2 + f2)) *
                 specfun::marcum_q1(e * f / std::sqrt(c2 + f2),
                                    d * std::sqrt(c2 + f2))) /
            c2;
        CHECK(std::abs(lhs - rhs) <= std::max(1e-10, 1e-7 * std::abs(rhs)));
    }
}

TEST_CASE("nuttall identity: exponential times Bessel") {
    std::mt19937 gen(99);
    std::uniform_real_distribution<double> uc(0.4, 1.8), ud(0.0, 2.0);
    for (int i = 0; i < 20; ++i) {
        const double c = uc(gen), d = ud(gen);
        const double c2 = c * c;
        const auto integrand = [&](double x) {
            return std::exp(-c2 * x) * specfun::bessel_i0(d * std::sqrt(2.0 * x));
        };
        const double lhs = specfun::integrate_semi_infinite(integrand, 0.0);
        const double rhs = std::exp(0.5 * d * d / c2) / c2;
        CHECK(std::abs(lhs - rhs) <= std::max(1e-10, 1e-7 * rhs));
    }
}

TEST_CASE("nuttall identity: exponential times Bessel times Marcum tail") {
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> uc(0.6, 1.4), ud(0.0, 1.5), ue(0.0, 2.5),
        uf(0.3, 1.2);
    for (int i = 0; i < 20; ++i) {
        const double c = uc(gen), d = ud(gen), e = ue(gen), f = uf(gen);
        const double c2 = c * c, f2 = f * f, s = c2 + f2;
        const auto integrand = [&](double x) {
            const double r = std::sqrt(2.0 * x);
            return std::exp(-c2 * x) * specfun::bessel_i0(d * r) *
                   specfun::marcum_q1(e, f * r);
        };
        const double lhs = specfun::integrate_semi_infinite(integrand, 0.0);
        const double rhs =
            (std::exp(0.5 * d * d / c2) *
                 specfun::marcum_q1(c * e / std::sqrt(s), d * f / (c * std::sqrt(s))) -
             f2 / s * std::exp(0.5 * (d * d - c2 * e * e) / s) *
                 specfun::bessel_i0(d * e * f / s)) /
            c2;
        CHECK(std::abs(lhs - rhs) <= std::max(1e-10, 1e-7 * std::abs(rhs)));
    }
}
