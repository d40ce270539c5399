#include "uavls/channel.hpp"

#include <algorithm>
#include <cmath>

#include "uavls/specfun.hpp"

namespace uavls::channel {

namespace {
// Below this vertical separation the Q-function branch divides 0/0; the
// equal-height branch is used instead.
constexpr double kEqualHeightEps = 1e-9;
}  // namespace

void EnvironmentParams::validate() const {
    if (!(zeta > 0.0)) throw std::invalid_argument("environment: zeta must be > 0");
    if (!(nu > 0.0)) throw std::invalid_argument("environment: nu must be > 0");
    if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("environment: mu must be in (0, 1]");
    if (!(alpha_los >= 2.0)) throw std::invalid_argument("environment: alpha_los must be >= 2");
    if (!(alpha_nlos >= alpha_los)) {
        throw std::invalid_argument("environment: alpha_nlos must be >= alpha_los");
    }
    if (!(k_nlos > 0.0)) throw std::invalid_argument("environment: k_nlos must be > 0");
    if (!(k_los >= k_nlos)) throw std::invalid_argument("environment: k_los must be >= k_nlos");
}

void RadioParams::validate() const {
    if (!(p_m > 0.0)) throw std::invalid_argument("radio: p_m must be > 0");
    if (!(p_i > 0.0)) throw std::invalid_argument("radio: p_i must be > 0");
    if (!(n_o >= 0.0)) throw std::invalid_argument("radio: n_o must be >= 0");
    if (!(gamma_t > 0.0)) throw std::invalid_argument("radio: gamma_t must be > 0");
}

double RadioParams::threshold_from_rate(double rt_bps, double bandwidth_hz) {
    if (!(rt_bps > 0.0) || !(bandwidth_hz > 0.0)) {
        throw std::invalid_argument("radio: rate and bandwidth must be > 0");
    }
    return std::exp2(rt_bps / bandwidth_hz) - 1.0;
}

double los_probability(const LinkGeometry& link, const EnvironmentParams& env) {
    const double scale = std::sqrt(env.nu * env.mu);
    double base, exponent;
    if (link.vertical_distance() < kEqualHeightEps) {
        const double z = link.tx().z;
        base = -std::expm1(-z * z / (2.0 * env.zeta * env.zeta));
        exponent = link.length() * scale;
    } else {
        const double qdiff = std::abs(specfun::gaussian_q(link.tx().z / env.zeta) -
                                      specfun::gaussian_q(link.rx().z / env.zeta));
        base = 1.0 - std::sqrt(2.0 * M_PI) * env.zeta / link.vertical_distance() * qdiff;
        base = std::clamp(base, 0.0, 1.0);
        exponent = link.horizontal_distance() * scale;
    }
    return std::pow(base, exponent);  // 0^0 == 1 covers coincident endpoints
}

double path_loss_exponent(double p_los, const EnvironmentParams& env) {
    if (!(p_los >= 0.0 && p_los <= 1.0)) {
        throw std::domain_error("path_loss_exponent: p_los must be in [0, 1]");
    }
    return (env.alpha_los - env.alpha_nlos) * p_los + env.alpha_nlos;
}

double rician_factor(double p_los, const EnvironmentParams& env) {
    if (!(p_los >= 0.0 && p_los <= 1.0)) {
        throw std::domain_error("rician_factor: p_los must be in [0, 1]");
    }
    return env.k_nlos * std::exp(std::log(env.k_los / env.k_nlos) * p_los * p_los);
}

double mean_received_power(const LinkGeometry& link, const EnvironmentParams& env,
                           double tx_power) {
    if (!(link.length() > 0.0)) {
        throw std::domain_error("mean_received_power: zero-length link has singular path loss");
    }
    const double alpha = path_loss_exponent(los_probability(link, env), env);
    return std::pow(link.length(), -alpha) * tx_power;
}

LinkState evaluate_link(const LinkGeometry& link, const EnvironmentParams& env,
                        double tx_power) {
    if (!(link.length() > 0.0)) {
        throw std::domain_error("evaluate_link: zero-length link has singular path loss");
    }
    LinkState s;
    s.p_los = los_probability(link, env);
    s.alpha = path_loss_exponent(s.p_los, env);
    s.k = rician_factor(s.p_los, env);
    s.beta = std::pow(link.length(), -s.alpha) * tx_power;
    return s;
}

}  // namespace uavls::channel
