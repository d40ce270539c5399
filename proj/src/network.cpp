#include "uavls/network.hpp"

#include <algorithm>
#include <cmath>

#include "uavls/errors.hpp"
#include "uavls/outage.hpp"

namespace uavls::network {

namespace {

using channel::EnvironmentParams;
using channel::LinkState;
using channel::RadioParams;

// 1 - E[e^{-x h}] per link environment, without the cancellation that
// otherwise floors the far radial tail at t * eps and stalls the
// quadrature there. The plain transforms are the j = 0 derivative forms.
double one_minus_laplace_nlos(double x) { return x / (1.0 + x); }

double one_minus_laplace_los(double x, double k) {
    const double u = 1.0 + 2.0 * x;
    return (2.0 * x - std::expm1(-2.0 * k * x / u)) / u;
}

// j-th derivative of the NLoS transform: (-1)^j j! / (1+x)^{j+1}.
double fading_laplace_nlos_deriv(double x, int j) {
    double v = 1.0 / (1.0 + x);
    double out = v;
    for (int i = 1; i <= j; ++i) out *= -i * v;
    return out;
}

// The LoS transform is e^{-k} e^{k w} w with w = 1/(1+2x). Its derivatives
// keep that shape with a polynomial P_j(w):
//   P_0 = w,  P_{j+1}(w) = -2 w^2 (k P_j(w) + P_j'(w)).
double fading_laplace_los_deriv(double x, double k, int j) {
    std::vector<double> poly{0.0, 1.0};  // P_0(w) = w
    for (int step = 0; step < j; ++step) {
        std::vector<double> next(poly.size() + 2, 0.0);
        for (std::size_t p = 0; p < poly.size(); ++p) {
            if (poly[p] == 0.0) continue;
            next[p + 2] += -2.0 * k * poly[p];
            if (p >= 1) next[p + 1] += -2.0 * static_cast<double>(p) * poly[p];
        }
        poly = std::move(next);
    }
    const double w = 1.0 / (1.0 + 2.0 * x);
    double val = 0.0;
    for (std::size_t p = poly.size(); p-- > 0;) val = val * w + poly[p];
    return std::exp(k * (w - 1.0)) * val;
}

struct RadialField {
    const NetworkParams* net;
    const EnvironmentParams* env;
    double p_i;

    LinkState state_at(double t) const {
        return channel::evaluate_link(
            LinkGeometry::from_distances(t, net->interferer_height, net->rx_height), *env,
            p_i);
    }
};

// eta(s) exponent of the Laplace transform.
double eta(double s, const RadialField& f, double guard,
           const specfun::QuadratureSpec& quad) {
    auto integrand = [&](double t) {
        const LinkState st = f.state_at(t);
        const double x = s * st.beta;
        const double mix = st.p_los * one_minus_laplace_los(x, st.k) +
                           (1.0 - st.p_los) * one_minus_laplace_nlos(x);
        return mix * t;
    };
    const double radial = specfun::integrate_semi_infinite(integrand, guard, quad);
    return -2.0 * M_PI * f.net->lambda_i * radial;
}

// eta^{(j)}(s) for j >= 1: differentiation under the integral sign. The
// integrand is kept in the dimensionless form x^j L^{(j)}(x), x = s beta,
// so the quadrature's absolute floor does not bind on the tiny beta^j scale.
double eta_derivative(double s, int j, const RadialField& f, double guard,
                      const specfun::QuadratureSpec& quad) {
    auto integrand = [&](double t) {
        const LinkState st = f.state_at(t);
        const double x = s * st.beta;
        double x_pow = 1.0;
        for (int i = 0; i < j; ++i) x_pow *= x;
        const double mix = st.p_los * fading_laplace_los_deriv(x, st.k, j) +
                           (1.0 - st.p_los) * fading_laplace_nlos_deriv(x, j);
        return mix * x_pow * t;
    };
    const double radial = specfun::integrate_semi_infinite(integrand, guard, quad);
    double s_pow = 1.0;
    for (int i = 0; i < j; ++i) s_pow *= s;
    return 2.0 * M_PI * f.net->lambda_i * radial / s_pow;
}

std::vector<double> laplace_derivs_impl(double s, int k_max, const RadialField& f,
                                        double guard, const specfun::QuadratureSpec& quad) {
    std::vector<double> eta_d(k_max + 1);
    eta_d[0] = eta(s, f, guard, quad);
    for (int j = 1; j <= k_max; ++j) eta_d[j] = eta_derivative(s, j, f, guard, quad);

    // L = exp(eta):  L^{(n)} = sum_j C(n-1, j) eta^{(j+1)} L^{(n-1-j)}.
    std::vector<double> L(k_max + 1);
    L[0] = std::exp(eta_d[0]);
    for (int n = 1; n <= k_max; ++n) {
        double acc = 0.0;
        double binom = 1.0;
        for (int j = 0; j <= n - 1; ++j) {
            acc += binom * eta_d[j + 1] * L[n - 1 - j];
            binom = binom * (n - 1 - j) / (j + 1);
        }
        L[n] = acc;
    }
    return L;
}

}  // namespace

void NetworkParams::validate() const {
    if (!(lambda_i > 0.0)) throw std::invalid_argument("network: lambda_i must be > 0");
    if (!(deployment_radius > 0.0)) {
        throw std::invalid_argument("network: deployment_radius must be > 0");
    }
    if (nakagami_m < 1) throw std::invalid_argument("network: nakagami_m must be >= 1");
    if (rx_height < 0.0 || interferer_height < 0.0) {
        throw std::invalid_argument("network: heights must be >= 0");
    }
}

double nakagami_m_from_k(double k) {
    if (!(k >= 0.0)) throw std::domain_error("nakagami_m_from_k: k must be >= 0");
    return (k * k + 2.0 * k + 1.0) / (2.0 * k + 1.0);
}

int validated_integer_m(double k) {
    const double m = nakagami_m_from_k(k);
    const double rounded = std::round(m);
    if (std::abs(m - rounded) > 1e-6) {
        throw config_error("Rician factor " + std::to_string(k) +
                           " maps to non-integer Nakagami m = " + std::to_string(m) +
                           "; the LoS branch needs integer m");
    }
    return static_cast<int>(rounded);
}

double interference_laplace(double s, const NetworkParams& net,
                            const EnvironmentParams& env, const RadioParams& radio,
                            double guard_radius, const specfun::QuadratureSpec& quad) {
    if (!(s >= 0.0)) throw std::domain_error("interference_laplace: s must be >= 0");
    if (guard_radius < 0.0) {
        throw std::domain_error("interference_laplace: guard_radius must be >= 0");
    }
    net.validate();
    env.validate();
    if (s == 0.0) return 1.0;
    RadialField f{&net, &env, radio.p_i};
    return std::exp(eta(s, f, guard_radius, quad));
}

std::vector<double> laplace_derivatives(double s, int k_max, const NetworkParams& net,
                                        const EnvironmentParams& env,
                                        const RadioParams& radio, double guard_radius,
                                        const specfun::QuadratureSpec& quad) {
    if (!(s > 0.0)) throw std::domain_error("laplace_derivatives: s must be > 0");
    if (k_max < 0) throw std::domain_error("laplace_derivatives: k_max must be >= 0");
    net.validate();
    env.validate();
    RadialField f{&net, &env, radio.p_i};
    return laplace_derivs_impl(s, k_max, f, guard_radius, quad);
}

MultiOutage outage_multi_breakdown(const LinkGeometry& main_link, double guard_radius,
                                   const NetworkParams& net, const EnvironmentParams& env,
                                   const RadioParams& radio,
                                   const specfun::QuadratureSpec& quad) {
    net.validate();
    env.validate();
    radio.validate();
    const LinkState main = channel::evaluate_link(main_link, env, radio.p_m);
    const RadialField f{&net, &env, radio.p_i};
    const int m = net.nakagami_m;

    MultiOutage out;
    out.p_los_main = main.p_los;

    // NLoS branch: Rayleigh main link through the PGFL.
    out.nlos_branch = 1.0 - std::exp(eta(radio.gamma_t / main.beta, f, guard_radius, quad));

    // LoS branch: Gamma(m, 1/m) main link over the Laplace derivatives.
    const double s = m * radio.gamma_t / main.beta;
    if (m == 1) {
        out.los_branch = 1.0 - std::exp(eta(s, f, guard_radius, quad));
    } else {
        const std::vector<double> L = laplace_derivs_impl(s, m - 1, f, guard_radius, quad);
        double sum = 0.0;
        double factor = 1.0;  // (-s)^k / k!
        for (int k = 0; k <= m - 1; ++k) {
            sum += factor * L[k];
            factor *= -s / (k + 1);
        }
        out.los_branch = std::clamp(1.0 - sum, 0.0, 1.0);
    }
    out.total = out.los_branch * main.p_los + out.nlos_branch * (1.0 - main.p_los);
    return out;
}

double outage_multi(double ell_m, double horizontal_r, const NetworkParams& net,
                    const EnvironmentParams& env, const RadioParams& radio,
                    const specfun::QuadratureSpec& quad) {
    const LinkGeometry main =
        LinkGeometry::from_distances(horizontal_r, net.interferer_height, net.rx_height);
    if (std::abs(main.length() - ell_m) > 1e-6 * std::max(1.0, ell_m)) {
        throw std::domain_error(
            "outage_multi: ell_m inconsistent with sqrt(r^2 + (z_i - z_o)^2)");
    }
    return outage_multi_breakdown(main, horizontal_r, net, env, radio, quad).total;
}

double network_outage(const NetworkParams& net, const EnvironmentParams& env,
                      const RadioParams& radio, const specfun::QuadratureSpec& quad) {
    net.validate();
    const double lp = net.lambda_i * M_PI;
    // Inner integrals run at a looser tolerance than the outer average.
    specfun::QuadratureSpec inner = quad;
    inner.relative_tolerance = std::max(quad.relative_tolerance, 1e-7);
    inner.absolute_tolerance = std::max(quad.absolute_tolerance, 1e-10);

    auto integrand = [&](double r) {
        if (r <= 0.0) return 0.0;
        const LinkGeometry main =
            LinkGeometry::from_distances(r, net.interferer_height, net.rx_height);
        const double po = outage_multi_breakdown(main, r, net, env, radio, inner).total;
        return po * 2.0 * lp * r * std::exp(-lp * r * r);
    };
    specfun::QuadratureSpec outer = quad;
    outer.relative_tolerance = std::max(quad.relative_tolerance, 1e-6);
    outer.absolute_tolerance = std::max(quad.absolute_tolerance, 1e-9);
    return std::clamp(specfun::integrate_semi_infinite(integrand, 0.0, outer), 0.0, 1.0);
}

double outage_nearest_geometry(const LinkGeometry& main_link, const NetworkParams& net,
                               const EnvironmentParams& env, const RadioParams& radio,
                               const specfun::QuadratureSpec& quad) {
    net.validate();
    env.validate();
    radio.validate();
    const LinkState main = channel::evaluate_link(main_link, env, radio.p_m);
    const RadialField f{&net, &env, radio.p_i};
    const double lp = net.lambda_i * M_PI;
    const double gamma_t = radio.gamma_t;

    auto integrand = [&](double r) {
        if (r <= 0.0) return 0.0;
        const LinkState in = f.state_at(r);
        const double mix =
            main.p_los * (in.p_los * outage::sir_outage_ll(main.k, in.k, main.beta,
                                                           in.beta, gamma_t) +
                          (1.0 - in.p_los) *
                              outage::sir_outage_ln(main.k, main.beta, in.beta, gamma_t)) +
            (1.0 - main.p_los) *
                (in.p_los * outage::sir_outage_nl(in.k, main.beta, in.beta, gamma_t) +
                 (1.0 - in.p_los) * outage::sir_outage_nn(main.beta, in.beta, gamma_t));
        return mix * 2.0 * lp * r * std::exp(-lp * r * r);
    };
    specfun::QuadratureSpec outer = quad;
    outer.relative_tolerance = std::max(quad.relative_tolerance, 1e-8);
    return std::clamp(specfun::integrate_semi_infinite(integrand, 0.0, outer), 0.0, 1.0);
}

double outage_nearest(double ell_m, const NetworkParams& net, const EnvironmentParams& env,
                      const RadioParams& radio, const specfun::QuadratureSpec& quad) {
    const double dv = std::abs(net.interferer_height - net.rx_height);
    if (ell_m < dv) {
        throw std::domain_error("outage_nearest: ell_m shorter than the vertical separation");
    }
    const double dh = std::sqrt(std::max(0.0, ell_m * ell_m - dv * dv));
    return outage_nearest_geometry(LinkGeometry::from_distances(dh, net.interferer_height,
                                                                net.rx_height),
                                   net, env, radio, quad);
}

}  // namespace uavls::network
