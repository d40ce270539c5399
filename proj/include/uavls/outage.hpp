#pragma once

#include "uavls/channel.hpp"
#include "uavls/geometry.hpp"
#include "uavls/specfun.hpp"

namespace uavls::outage {

/// Main and interference links sharing one receiver, plus the environment
/// and radio parameters that turn geometry into outage probabilities.
struct LinkPairConfig {
    LinkGeometry main;
    LinkGeometry interferer;
    channel::EnvironmentParams env;
    channel::RadioParams radio;

    void validate() const;
};

/// The four conditional outage probabilities, their LoS/NLoS mixture
/// weights, and the weighted total.
struct OutageBreakdown {
    double p_ll, p_ln, p_nl, p_nn;
    double w_ll, w_ln, w_nl, w_nn;
    double total;
};

// ---------------------------------------------------------------------------
// Conditional kernels on explicit parameters. K values at or below
// kDegenerateK route to the Rayleigh forms.

inline constexpr double kDegenerateK = 1e-12;

double sinr_outage_ll(double k_m, double k_i, double beta_m, double beta_i,
                      double gamma_t, double n_o,
                      const specfun::QuadratureSpec& quad = {});
double sinr_outage_ln(double k_m, double beta_m, double beta_i, double gamma_t,
                      double n_o);
double sinr_outage_nl(double k_i, double beta_m, double beta_i, double gamma_t,
                      double n_o);
double sinr_outage_nn(double beta_m, double beta_i, double gamma_t, double n_o);

double sir_outage_ll(double k_m, double k_i, double beta_m, double beta_i,
                     double gamma_t);
double sir_outage_ln(double k_m, double beta_m, double beta_i, double gamma_t);
double sir_outage_nl(double k_i, double beta_m, double beta_i, double gamma_t);
double sir_outage_nn(double beta_m, double beta_i, double gamma_t);

// ---------------------------------------------------------------------------
// Geometry-level operations. K and beta for each link come from that link's
// own LoS probability; the same values feed the mixture weights.

double outage_ll_general(const LinkPairConfig& cfg, const specfun::QuadratureSpec& quad = {});
double outage_ln_general(const LinkPairConfig& cfg);
double outage_nl_general(const LinkPairConfig& cfg);
double outage_nn_general(const LinkPairConfig& cfg);
OutageBreakdown outage_total_general(const LinkPairConfig& cfg,
                                     const specfun::QuadratureSpec& quad = {});

double outage_ll_sir(const LinkPairConfig& cfg);
double outage_ln_sir(const LinkPairConfig& cfg);
double outage_nl_sir(const LinkPairConfig& cfg);
double outage_nn_sir(const LinkPairConfig& cfg);
OutageBreakdown outage_total_sir(const LinkPairConfig& cfg);

// ---------------------------------------------------------------------------
// All-LoS vs all-NLoS comparison.

/// Root of p_LL(v) = p_NN(v) over the power ratio v = beta_m / beta_i with
/// the Rician factors held fixed. Bisection on an expanding bracket.
double crossover_ratio(double k_m, double k_i, double gamma_t);

/// Crossover found the way the power-ratio curves are generated: the
/// interferer slides along its horizontal axis, so its K and beta move
/// together. Returns the ratio at the crossing plus the matching geometry.
struct CrossoverSweepResult {
    double ratio;          // beta_m / beta_i at the crossing
    double interferer_dh;  // interferer horizontal distance at the crossing
    double k_i;            // interferer Rician factor there
};
CrossoverSweepResult crossover_ratio_swept(const LinkPairConfig& cfg,
                                           double dh_lo = 10.0, double dh_hi = 5000.0);

}  // namespace uavls::outage
