#pragma once

#include <functional>

#include "uavls/errors.hpp"

namespace uavls::specfun {

/// Tolerances and budgets for the adaptive semi-infinite quadrature.
struct QuadratureSpec {
    double relative_tolerance = 1e-9;
    double absolute_tolerance = 1e-12;
    int max_subdivisions = 4000;       // Gauss-Kronrod panel budget per call
    double tail_truncation_mass = 1e-12;

    void validate() const;
};

/// Gaussian tail probability Q(x) = P[N(0,1) > x].
double gaussian_q(double x);

/// Modified Bessel functions of the first kind, order 0 and 1.
/// The *_scaled variants return e^{-x} I_n(x) and stay finite for large x.
double bessel_i0(double x);
double bessel_i1(double x);
double bessel_i0_scaled(double x);
double bessel_i1_scaled(double x);

/// First-order Marcum Q-function Q_1(a, b): survival function of the
/// noncentral chi-squared distribution with 2 degrees of freedom and
/// noncentrality a^2, evaluated at b^2.
double marcum_q1(double a, double b);

/// Lower tail 1 - Q_1(a, b), summed directly so that values far below the
/// 1e-16 cancellation floor of the complement stay accurate.
double marcum_p1(double a, double b);

/// exp(log_prefactor) * Q_1(a, b) without overflowing when log_prefactor
/// is large and the Marcum tail is correspondingly small.
double exp_marcum_q1(double log_prefactor, double a, double b);

/// Regularized upper incomplete gamma for integer shape:
/// Gamma(m, x) / Gamma(m) = sum_{k=0}^{m-1} x^k e^{-x} / k!.
double regularized_upper_gamma(int m, double x);

/// Integrates f over [a, b] with adaptive Gauss-Kronrod 15(7).
double integrate_finite(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& spec = {});

/// Integrates f over [lower, inf) by geometric segment doubling with a
/// tail-mass stopping rule. Intended for integrands with exponential or
/// power-law (faster than 1/t) decay.
double integrate_semi_infinite(const std::function<double(double)>& f, double lower,
                               const QuadratureSpec& spec = {});

}  // namespace uavls::specfun
