#include "uavls/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace uavls::specfun {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Ascending power series, all terms positive. Converges quickly for x < 20.
double i0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

double i1_series(double x) {
    const double q = 0.25 * x * x;
    double term = 0.5 * x, sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * (k + 1));
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

// Asymptotic expansion of e^{-x} I_nu(x), summed to the smallest term.
// Accurate to full double precision for x >= 20.
double i_asymptotic_scaled(double x, double four_nu_sq) {
    double term = 1.0, sum = 1.0, prev = std::numeric_limits<double>::max();
    for (int k = 1; k < 64; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(four_nu_sq - odd * odd) / (8.0 * k * x);
        if (std::abs(term) >= prev) break;  // divergent tail reached
        sum += term;
        prev = std::abs(term);
        if (prev < 1e-17 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * M_PI * x);
}

// sum_{j=0}^{n-1} y^j e^{-y} / j!  (Erlang/Poisson-CDF survival of Gamma(n,1)).
// Log-seeded at the largest term so it stays stable for y beyond exp underflow.
double erlang_survival(int n, double y) {
    if (n <= 0) return 0.0;
    if (y == 0.0) return 1.0;
    const int jstar = std::min<int>(n - 1, static_cast<int>(y));
    const double log_t = -y + jstar * std::log(y) - std::lgamma(jstar + 1.0);
    const double tstar = std::exp(log_t);
    if (tstar == 0.0) {
        // All mass is unreachable in double precision; decide by tail side.
        return (y > n - 1) ? 0.0 : 1.0;
    }
    double sum = tstar;
    double term = tstar;
    for (int j = jstar - 1; j >= 0; --j) {
        term *= (j + 1) / y;
        sum += term;
        if (term < sum * 1e-17) break;
    }
    term = tstar;
    for (int j = jstar + 1; j < n; ++j) {
        term *= y / j;
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return std::min(sum, 1.0);
}

// P[Pois(y) >= n]. Ascending tail sum when that tail is the small side,
// complement of the Erlang survival otherwise.
double poisson_tail_geq(int n, double y) {
    if (n <= 0) return 1.0;
    if (y >= n) return 1.0 - erlang_survival(n, y);
    const double log_t = -y + n * std::log(y) - std::lgamma(n + 1.0);
    double t = std::exp(log_t), sum = t;
    for (int j = n; j < n + 1000000; ++j) {
        t *= y / (j + 1);
        sum += t;
        if (t < sum * 1e-17) break;
    }
    return std::min(sum, 1.0);
}

void require_finite_nonneg(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::domain_error(std::string(name) + " must be finite and >= 0");
    }
}

// ---------------------------------------------------------------------------
// Gauss-Kronrod 15(7) panel (QUADPACK abscissae/weights).

constexpr double kGkNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kGkWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double integral;
    double error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kGkNodes[i]);
        fv[14 - i] = f(c + h * kGkNodes[i]);
    }
    fv[7] = f(c);
    double kronrod = kGkWeights[7] * fv[7];
    double gauss = kGaussWeights[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kronrod += kGkWeights[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (fv[i] + fv[14 - i]);
    }
    kronrod *= h;
    gauss *= h;

    // QUADPACK error sharpening against the mean-deviation norm.
    const double mean = kronrod / (b - a);
    double resasc = kGkWeights[7] * std::abs(fv[7] - mean);
    for (int i = 0; i < 7; ++i) {
        resasc += kGkWeights[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));
    }
    resasc *= std::abs(h);
    double err = std::abs(kronrod - gauss);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    return {kronrod, err};
}

struct AdaptiveState {
    int panels_used = 0;
    int budget = 0;
};

double adapt(const std::function<double(double)>& f, double a, double b, double tol,
             AdaptiveState& st, int depth) {
    Panel p = gk15(f, a, b);
    ++st.panels_used;
    if (p.error <= tol || depth >= 52) return p.integral;
    if (st.panels_used >= st.budget) {
        throw quadrature_error("quadrature did not converge within max_subdivisions",
                               p.integral);
    }
    const double c = 0.5 * (a + b);
    return adapt(f, a, c, 0.5 * tol, st, depth + 1) +
           adapt(f, c, b, 0.5 * tol, st, depth + 1);
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(relative_tolerance > 0.0) || !(absolute_tolerance > 0.0)) {
        throw std::invalid_argument("quadrature tolerances must be strictly positive");
    }
    if (max_subdivisions < 1) {
        throw std::invalid_argument("max_subdivisions must be >= 1");
    }
    if (!(tail_truncation_mass > 0.0)) {
        throw std::invalid_argument("tail_truncation_mass must be strictly positive");
    }
}

double gaussian_q(double x) {
    if (!std::isfinite(x)) throw std::domain_error("gaussian_q: x must be finite");
    return 0.5 * std::erfc(x * kInvSqrt2);
}

double bessel_i0_scaled(double x) {
    require_finite_nonneg(x, "bessel_i0: x");
    if (x < 20.0) return std::exp(-x) * i0_series(x);
    return i_asymptotic_scaled(x, 0.0);
}

double bessel_i1_scaled(double x) {
    require_finite_nonneg(x, "bessel_i1: x");
    if (x < 20.0) return std::exp(-x) * i1_series(x);
    return i_asymptotic_scaled(x, 4.0);
}

double bessel_i0(double x) {
    require_finite_nonneg(x, "bessel_i0: x");
    if (x < 20.0) return i0_series(x);
    return std::exp(x) * i_asymptotic_scaled(x, 0.0);
}

double bessel_i1(double x) {
    require_finite_nonneg(x, "bessel_i1: x");
    if (x < 20.0) return i1_series(x);
    return std::exp(x) * i_asymptotic_scaled(x, 4.0);
}

double marcum_q1(double a, double b) {
    require_finite_nonneg(a, "marcum_q1: a");
    require_finite_nonneg(b, "marcum_q1: b");
    if (b == 0.0) return 1.0;
    const double x = 0.5 * a * a;  // Poisson mixing rate
    const double y = 0.5 * b * b;
    if (x == 0.0) return std::exp(-y);

    // Q1(a,b) = sum_k Pois(k; x) * P[Gamma(k+1,1) > y], summed outward from
    // the Poisson mode with log-seeded weights so neither factor overflows.
    const int k0 = static_cast<int>(x);
    const double log_p0 = -x + k0 * std::log(x) - std::lgamma(k0 + 1.0);
    const double p0 = std::exp(log_p0);
    const double r0 = erlang_survival(k0 + 1, y);

    // Increment d_k = e^{-y} y^k / k! used to step the Erlang survival.
    auto log_d = [y](int k) { return -y + k * std::log(y) - std::lgamma(k + 1.0); };

    double sum = p0 * r0;
    double mass = p0;

    double p = p0, r = r0, d = std::exp(log_d(k0 + 1));
    for (int k = k0 + 1; k < k0 + 4000000; ++k) {
        p *= x / k;
        r = std::min(r + d, 1.0);
        d *= y / (k + 1);
        sum += p * r;
        mass += p;
        if (1.0 - mass < 1e-17 || (p < 1e-18 && k > x)) break;
    }
    p = p0;
    r = r0;
    d = std::exp(log_d(k0));
    for (int k = k0 - 1; k >= 0; --k) {
        p *= (k + 1) / x;
        r = std::max(r - d, 0.0);
        d *= (k + 1) / y;
        sum += p * r;
        mass += p;
        if (1.0 - mass < 1e-17 || p < 1e-18) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

double marcum_p1(double a, double b) {
    require_finite_nonneg(a, "marcum_p1: a");
    require_finite_nonneg(b, "marcum_p1: b");
    if (b == 0.0) return 0.0;
    const double x = 0.5 * a * a;
    const double y = 0.5 * b * b;
    if (x == 0.0) return -std::expm1(-y);

    // Mirror of marcum_q1 with the lower Erlang tail per Poisson term.
    const int k0 = static_cast<int>(x);
    const double p0 = std::exp(-x + k0 * std::log(x) - std::lgamma(k0 + 1.0));
    const double t0 = poisson_tail_geq(k0 + 1, y);
    auto log_d = [y](int k) { return -y + k * std::log(y) - std::lgamma(k + 1.0); };

    double sum = p0 * t0;
    double mass = p0;

    double p = p0, t = t0, d = std::exp(log_d(k0 + 1));
    for (int k = k0 + 1; k < k0 + 4000000; ++k) {
        p *= x / k;
        t = std::max(t - d, 0.0);
        d *= y / (k + 1);
        sum += p * t;
        mass += p;
        if (t == 0.0 || 1.0 - mass < 1e-17 || (p < 1e-18 && k > x)) break;
    }
    p = p0;
    t = t0;
    d = std::exp(log_d(k0));
    for (int k = k0 - 1; k >= 0; --k) {
        p *= (k + 1) / x;
        t = std::min(t + d, 1.0);
        d *= (k + 1) / y;
        sum += p * t;
        mass += p;
        if (1.0 - mass < 1e-17 || p < 1e-18) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

double exp_marcum_q1(double log_prefactor, double a, double b) {
    if (log_prefactor < 650.0 || b == 0.0) {
        return std::exp(log_prefactor) * marcum_q1(a, b);
    }
    // Huge prefactor only arises together with a large Marcum second argument
    // (the product is bounded). Two-term Neumann tail in log space:
    // Q1(a,b) ~ e^{-(a^2+b^2)/2} [I0(ab) + (a/b) I1(ab)],  b >> a.
    const double ab = a * b;
    const double body = bessel_i0_scaled(ab) + (b > 0.0 ? (a / b) * bessel_i1_scaled(ab) : 0.0);
    const double log_q = -0.5 * (a - b) * (a - b) + std::log(body);
    return std::exp(log_prefactor + log_q);
}

double regularized_upper_gamma(int m, double x) {
    if (m < 1) throw std::domain_error("regularized_upper_gamma: m must be a positive integer");
    require_finite_nonneg(x, "regularized_upper_gamma: x");
    return erlang_survival(m, x);
}

double integrate_finite(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& spec) {
    spec.validate();
    if (a == b) return 0.0;
    AdaptiveState st;
    st.budget = spec.max_subdivisions;
    Panel first = gk15(f, a, b);
    const double tol = std::max(spec.absolute_tolerance,
                                spec.relative_tolerance * std::abs(first.integral));
    return adapt(f, a, b, tol, st, 0);
}

double integrate_semi_infinite(const std::function<double(double)>& f, double lower,
                               const QuadratureSpec& spec) {
    spec.validate();
    if (!std::isfinite(lower)) throw std::domain_error("integrate_semi_infinite: bad lower limit");

    AdaptiveState st;
    st.budget = spec.max_subdivisions;

    double total = 0.0;
    double a = lower;
    double width = std::max(1.0, std::abs(lower));
    double prev_seg = 0.0;
    int zero_run = 0;

    for (int seg = 0; seg < 220; ++seg) {
        const double b = a + width;
        // Tolerance scales with both the running total and the segment's own
        // magnitude; a fixed absolute floor would demand sub-roundoff
        // accuracy on large-valued segments.
        Panel probe = gk15(f, a, b);
        ++st.panels_used;
        const double scale = std::abs(total) + std::abs(probe.integral);
        const double tol =
            0.25 * std::max(spec.absolute_tolerance, spec.relative_tolerance * scale);
        double piece;
        if (probe.error <= tol) {
            piece = probe.integral;
        } else {
            try {
                piece = adapt(f, a, b, tol, st, 0);
            } catch (const quadrature_error& e) {
                throw quadrature_error(e.what(), total + e.partial_estimate());
            }
        }
        total += piece;

        const double mag = std::abs(piece);
        if (mag == 0.0) {
            if (++zero_run >= 2 && seg >= 8) return total;
        } else {
            zero_run = 0;
        }
        if (seg > 0 && mag > 0.0) {
            double ratio = prev_seg > 0.0 ? std::min(mag / prev_seg, 0.95) : 0.5;
            const double remaining = mag * ratio / (1.0 - ratio);
            if (remaining <= std::max(spec.absolute_tolerance,
                                      spec.tail_truncation_mass * std::abs(total)) &&
                seg >= 3) {
                return total;
            }
        }
        prev_seg = mag;
        a = b;
        width *= 2.0;
    }
    throw quadrature_error("semi-infinite integral tail did not decay", total);
}

}  // namespace uavls::specfun
