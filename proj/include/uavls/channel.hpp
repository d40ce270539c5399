#pragma once

#include "uavls/geometry.hpp"

namespace uavls::channel {

/// Propagation environment: building statistics (zeta, nu, mu) plus the
/// path-loss exponents and Rician factors at the all-LoS / all-NLoS extremes.
struct EnvironmentParams {
    double zeta = 20.0;       // m, building height scale
    double nu = 3e-4;         // m^-2, building density
    double mu = 0.5;          // builtup-area ratio
    double alpha_los = 2.0;
    double alpha_nlos = 3.5;
    double k_los = 15.0;
    double k_nlos = 1.0;

    void validate() const;

    /// Dense-urban parameter set used throughout the numerical studies.
    static EnvironmentParams dense_urban() { return {}; }
};

struct RadioParams {
    double p_m = 1e-8;    // W, main transmitter
    double p_i = 1e-8;    // W, interferer
    double n_o = 5e-17;   // W, noise
    double gamma_t = 2.0; // SINR/SIR threshold

    void validate() const;

    /// gamma_t implied by a target rate over a bandwidth: 2^(R/W) - 1.
    static double threshold_from_rate(double rt_bps, double bandwidth_hz);
};

/// LoS probability of a link. Uses the equal-height form when the vertical
/// distance is below 1e-9 m, otherwise the Q-function difference form.
double los_probability(const LinkGeometry& link, const EnvironmentParams& env);

/// alpha(p) = (alpha_los - alpha_nlos) * p + alpha_nlos.
double path_loss_exponent(double p_los, const EnvironmentParams& env);

/// K(p) = k_nlos * exp(ln(k_los / k_nlos) * p^2).
double rician_factor(double p_los, const EnvironmentParams& env);

/// Mean received power: ell^{-alpha(ell)} * tx_power. Rejects zero-length links.
double mean_received_power(const LinkGeometry& link, const EnvironmentParams& env,
                           double tx_power);

/// The per-link quantities every outage formula consumes.
struct LinkState {
    double p_los;
    double alpha;
    double k;     // Rician factor at this link's LoS probability
    double beta;  // mean received power
};

LinkState evaluate_link(const LinkGeometry& link, const EnvironmentParams& env,
                        double tx_power);

}  // namespace uavls::channel
