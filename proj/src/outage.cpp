#include "uavls/outage.hpp"

#include <algorithm>
#include <cmath>

namespace uavls::outage {

namespace {

using channel::LinkState;

struct PairState {
    LinkState m;
    LinkState i;
    double gamma_t;
    double n_o;
};

PairState derive(const LinkPairConfig& cfg) {
    cfg.validate();
    return {channel::evaluate_link(cfg.main, cfg.env, cfg.radio.p_m),
            channel::evaluate_link(cfg.interferer, cfg.env, cfg.radio.p_i),
            cfg.radio.gamma_t, cfg.radio.n_o};
}

// exp(-K - g/2) I0(sqrt(2 K g)) evaluated as exp(-(sqrt(g/2) - sqrt(K))^2)
// times the scaled Bessel so nothing overflows for large K or g.
double rician_density_half(double k, double g) {
    const double arg = std::sqrt(2.0 * k * g);
    const double d = std::sqrt(0.5 * g) - std::sqrt(k);
    return 0.5 * std::exp(-d * d) * specfun::bessel_i0_scaled(arg);
}

}  // namespace

void LinkPairConfig::validate() const {
    env.validate();
    radio.validate();
    const auto& a = main.rx();
    const auto& b = interferer.rx();
    if (std::abs(a.x - b.x) > 1e-9 || std::abs(a.y - b.y) > 1e-9 ||
        std::abs(a.z - b.z) > 1e-9) {
        throw std::invalid_argument("LinkPairConfig: links must share the receiver position");
    }
    if (!(main.length() > 0.0) || !(interferer.length() > 0.0)) {
        throw std::invalid_argument("LinkPairConfig: link distances must be > 0");
    }
}

// ---------------------------------------------------------------------------
// SINR outage: the four conditional link-environment cases.

double sinr_outage_ll(double k_m, double k_i, double beta_m, double beta_i,
                      double gamma_t, double n_o, const specfun::QuadratureSpec& quad) {
    if (k_m <= kDegenerateK) return sinr_outage_nl(k_i, beta_m, beta_i, gamma_t, n_o);
    if (k_i <= kDegenerateK) return sinr_outage_ln(k_m, beta_m, beta_i, gamma_t, n_o);
    const double a = std::sqrt(2.0 * k_m);
    // Lower-tail form keeps the integrand positive; no 1 - (...) cancellation.
    auto integrand = [&](double g) {
        const double b = std::sqrt(gamma_t * (beta_i * g + n_o) / beta_m);
        return specfun::marcum_p1(a, b) * rician_density_half(k_i, g);
    };
    const double val = specfun::integrate_semi_infinite(integrand, 0.0, quad);
    return std::clamp(val, 0.0, 1.0);
}

double sinr_outage_ln(double k_m, double beta_m, double beta_i, double gamma_t,
                      double n_o) {
    if (k_m <= kDegenerateK) return sinr_outage_nn(beta_m, beta_i, gamma_t, n_o);
    const double denom = 2.0 * beta_m + gamma_t * beta_i;
    const double head = specfun::marcum_q1(std::sqrt(2.0 * k_m),
                                           std::sqrt(gamma_t * n_o / beta_m));
    const double pref = gamma_t * beta_i / denom;
    const double w = n_o / beta_i - 2.0 * k_m * beta_m / denom;
    const double a = std::sqrt(2.0 * gamma_t * k_m * beta_i / denom);
    const double b = std::sqrt(n_o * denom / (beta_m * beta_i));
    const double tail = pref * specfun::exp_marcum_q1(w, a, b);
    return std::clamp(1.0 - head + tail, 0.0, 1.0);
}

double sinr_outage_nl(double k_i, double beta_m, double beta_i, double gamma_t,
                      double n_o) {
    if (k_i <= kDegenerateK) return sinr_outage_nn(beta_m, beta_i, gamma_t, n_o);
    const double denom = 2.0 * gamma_t * beta_i + beta_m;
    const double e = -gamma_t * n_o / beta_m - 2.0 * gamma_t * k_i * beta_i / denom;
    return 1.0 - beta_m / denom * std::exp(e);
}

double sinr_outage_nn(double beta_m, double beta_i, double gamma_t, double n_o) {
    return 1.0 - beta_m / (beta_m + gamma_t * beta_i) * std::exp(-gamma_t * n_o / beta_m);
}

// ---------------------------------------------------------------------------
// Interference-limited (SIR) conditional cases.

double sir_outage_ll(double k_m, double k_i, double beta_m, double beta_i,
                     double gamma_t) {
    if (k_m <= kDegenerateK) return sir_outage_nl(k_i, beta_m, beta_i, gamma_t);
    if (k_i <= kDegenerateK) return sir_outage_ln(k_m, beta_m, beta_i, gamma_t);
    const double denom = beta_m + gamma_t * beta_i;
    const double a = std::sqrt(2.0 * k_m * beta_m / denom);
    const double b = std::sqrt(2.0 * gamma_t * k_i * beta_i / denom);
    const double d = a - b;
    const double tail = gamma_t * beta_i / denom * std::exp(-0.5 * d * d) *
                        specfun::bessel_i0_scaled(a * b);
    // Lower-tail Marcum keeps the value meaningful far below 1e-16, where
    // the power ratio pushes the outage toward zero.
    return std::clamp(specfun::marcum_p1(a, b) + tail, 0.0, 1.0);
}

double sir_outage_ln(double k_m, double beta_m, double beta_i, double gamma_t) {
    if (k_m <= kDegenerateK) return sir_outage_nn(beta_m, beta_i, gamma_t);
    const double denom = 2.0 * beta_m + gamma_t * beta_i;
    return gamma_t * beta_i / denom * std::exp(-2.0 * k_m * beta_m / denom);
}

double sir_outage_nl(double k_i, double beta_m, double beta_i, double gamma_t) {
    if (k_i <= kDegenerateK) return sir_outage_nn(beta_m, beta_i, gamma_t);
    const double denom = 2.0 * gamma_t * beta_i + beta_m;
    return 1.0 - beta_m / denom * std::exp(-2.0 * gamma_t * k_i * beta_i / denom);
}

double sir_outage_nn(double beta_m, double beta_i, double gamma_t) {
    return gamma_t * beta_i / (beta_m + gamma_t * beta_i);
}

// ---------------------------------------------------------------------------
// Geometry-level wrappers.

double outage_ll_general(const LinkPairConfig& cfg, const specfun::QuadratureSpec& quad) {
    const PairState s = derive(cfg);
    return sinr_outage_ll(s.m.k, s.i.k, s.m.beta, s.i.beta, s.gamma_t, s.n_o, quad);
}

double outage_ln_general(const LinkPairConfig& cfg) {
    const PairState s = derive(cfg);
    return sinr_outage_ln(s.m.k, s.m.beta, s.i.beta, s.gamma_t, s.n_o);
}

double outage_nl_general(const LinkPairConfig& cfg) {
    const PairState s = derive(cfg);
    return sinr_outage_nl(s.i.k, s.m.beta, s.i.beta, s.gamma_t, s.n_o);
}

double outage_nn_general(const LinkPairConfig& cfg) {
    const PairState s = derive(cfg);
    return sinr_outage_nn(s.m.beta, s.i.beta, s.gamma_t, s.n_o);
}

namespace {

OutageBreakdown assemble(const PairState& s, double p_ll, double p_ln, double p_nl,
                         double p_nn) {
    OutageBreakdown b;
    b.p_ll = p_ll;
    b.p_ln = p_ln;
    b.p_nl = p_nl;
    b.p_nn = p_nn;
    b.w_ll = s.m.p_los * s.i.p_los;
    b.w_ln = s.m.p_los * (1.0 - s.i.p_los);
    b.w_nl = (1.0 - s.m.p_los) * s.i.p_los;
    b.w_nn = (1.0 - s.m.p_los) * (1.0 - s.i.p_los);
    b.total = b.w_ll * p_ll + b.w_ln * p_ln + b.w_nl * p_nl + b.w_nn * p_nn;
    return b;
}

}  // namespace

OutageBreakdown outage_total_general(const LinkPairConfig& cfg,
                                     const specfun::QuadratureSpec& quad) {
    const PairState s = derive(cfg);
    return assemble(s,
                    sinr_outage_ll(s.m.k, s.i.k, s.m.beta, s.i.beta, s.gamma_t, s.n_o, quad),
                    sinr_outage_ln(s.m.k, s.m.beta, s.i.beta, s.gamma_t, s.n_o),
                    sinr_outage_nl(s.i.k, s.m.beta, s.i.beta, s.gamma_t, s.n_o),
                    sinr_outage_nn(s.m.beta, s.i.beta, s.gamma_t, s.n_o));
}

double outage_ll_sir(const LinkPairConfig& cfg) {
    const PairState s = derive(cfg);
    return sir_outage_ll(s.m.k, s.i.k, s.m.beta, s.i.beta, s.gamma_t);
}

double outage_ln_sir(const LinkPairConfig& cfg) {
    const PairState s = derive(cfg);
    return sir_outage_ln(s.m.k, s.m.beta, s.i.beta, s.gamma_t);
}

double outage_nl_sir(const LinkPairConfig& cfg) {
    const PairState s = derive(cfg);
    return sir_outage_nl(s.i.k, s.m.beta, s.i.beta, s.gamma_t);
}

double outage_nn_sir(const LinkPairConfig& cfg) {
    const PairState s = derive(cfg);
    return sir_outage_nn(s.m.beta, s.i.beta, s.gamma_t);
}

OutageBreakdown outage_total_sir(const LinkPairConfig& cfg) {
    const PairState s = derive(cfg);
    return assemble(s, sir_outage_ll(s.m.k, s.i.k, s.m.beta, s.i.beta, s.gamma_t),
                    sir_outage_ln(s.m.k, s.m.beta, s.i.beta, s.gamma_t),
                    sir_outage_nl(s.i.k, s.m.beta, s.i.beta, s.gamma_t),
                    sir_outage_nn(s.m.beta, s.i.beta, s.gamma_t));
}

// ---------------------------------------------------------------------------
// All-LoS vs all-NLoS crossover.

double crossover_ratio(double k_m, double k_i, double gamma_t) {
    if (!(k_m > 0.0) || !(k_i > 0.0) || !(gamma_t > 0.0)) {
        throw std::domain_error("crossover_ratio: k_m, k_i, gamma_t must be > 0");
    }
    auto diff = [&](double v) {
        return sir_outage_ll(k_m, k_i, v, 1.0, gamma_t) - sir_outage_nn(v, 1.0, gamma_t);
    };

    double lo = 1e-6, hi = 1e6;
    double flo = diff(lo), fhi = diff(hi);
    for (int i = 0; i < 12 && flo * fhi > 0.0; ++i) {
        lo *= 0.1;
        hi *= 10.0;
        flo = diff(lo);
        fhi = diff(hi);
    }
    if (flo * fhi > 0.0) {
        throw solver_error("crossover_ratio: no sign change on the scanned bracket", lo, hi);
    }
    for (int i = 0; i < 500 && hi / lo - 1.0 > 1e-13; ++i) {
        const double mid = std::sqrt(lo * hi);
        const double fm = diff(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return std::sqrt(lo * hi);
}

CrossoverSweepResult crossover_ratio_swept(const LinkPairConfig& cfg, double dh_lo,
                                           double dh_hi) {
    cfg.validate();
    const LinkState main = channel::evaluate_link(cfg.main, cfg.env, cfg.radio.p_m);
    const double z_i = cfg.interferer.tx().z;
    const double z_rx = cfg.interferer.rx().z;
    const double gamma_t = cfg.radio.gamma_t;

    auto state_at = [&](double dh) {
        return channel::evaluate_link(LinkGeometry::from_distances(dh, z_i, z_rx),
                                      cfg.env, cfg.radio.p_i);
    };
    auto diff = [&](double dh) {
        const LinkState i = state_at(dh);
        return sir_outage_ll(main.k, i.k, main.beta, i.beta, gamma_t) -
               sir_outage_nn(main.beta, i.beta, gamma_t);
    };

    double lo = dh_lo, hi = dh_hi;
    double flo = diff(lo), fhi = diff(hi);
    for (int i = 0; i < 8 && flo * fhi > 0.0; ++i) {
        lo = std::max(lo * 0.5, 1e-3);
        hi *= 2.0;
        flo = diff(lo);
        fhi = diff(hi);
    }
    if (flo * fhi > 0.0) {
        throw solver_error("crossover_ratio_swept: no crossing on the scanned distances",
                           lo, hi);
    }
    for (int i = 0; i < 300 && hi - lo > 1e-9 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = diff(mid);
        if (flo * fm <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    const double dh = 0.5 * (lo + hi);
    const LinkState i = state_at(dh);
    return {main.beta / i.beta, dh, i.k};
}

}  // namespace uavls::outage
