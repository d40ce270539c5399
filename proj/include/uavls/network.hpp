#pragma once

#include <vector>

#include "uavls/channel.hpp"
#include "uavls/geometry.hpp"
#include "uavls/specfun.hpp"

namespace uavls::network {

/// PPP interferer field around an airborne receiver.
struct NetworkParams {
    double lambda_i = 1e-5;          // nodes per m^2
    double deployment_radius = 5000; // m, Monte-Carlo truncation only
    double rx_height = 70.0;         // m, z_o
    int nakagami_m = 1;              // LoS main-link fading shape
    double interferer_height = 0.0;  // m, z of the transmitting nodes

    void validate() const;
};

/// Nakagami shape equivalent to Rician factor k: (k+1)^2 / (2k+1).
double nakagami_m_from_k(double k);

/// nakagami_m_from_k rounded when within 1e-6 of an integer; otherwise
/// throws config_error (the analysis needs integer m).
int validated_integer_m(double k);

/// Laplace transform of the aggregate PPP interference seen past
/// guard_radius: exp(-2 pi lambda int_r^inf sum_e (1 - L_{h,e}(s beta(t)))
/// p_e(t) t dt) with per-environment fading transforms.
double interference_laplace(double s, const NetworkParams& net,
                            const channel::EnvironmentParams& env,
                            const channel::RadioParams& radio, double guard_radius,
                            const specfun::QuadratureSpec& quad = {});

/// Derivatives L_I^{(0..k_max)}(s), from analytic integrand derivatives
/// combined through the exp-of-eta recursion.
std::vector<double> laplace_derivatives(double s, int k_max, const NetworkParams& net,
                                        const channel::EnvironmentParams& env,
                                        const channel::RadioParams& radio,
                                        double guard_radius,
                                        const specfun::QuadratureSpec& quad = {});

struct MultiOutage {
    double total;
    double los_branch;   // Nakagami main link over the Laplace derivatives
    double nlos_branch;  // Rayleigh main link via the PGFL
    double p_los_main;
};

/// Multi-interferer outage for an explicit main-link geometry.
MultiOutage outage_multi_breakdown(const LinkGeometry& main_link, double guard_radius,
                                   const NetworkParams& net,
                                   const channel::EnvironmentParams& env,
                                   const channel::RadioParams& radio,
                                   const specfun::QuadratureSpec& quad = {});

/// Convenience form: the serving node sits at horizontal distance r and the
/// interferer height, so ell_m must equal sqrt(r^2 + (z_i - z_o)^2).
double outage_multi(double ell_m, double horizontal_r, const NetworkParams& net,
                    const channel::EnvironmentParams& env,
                    const channel::RadioParams& radio,
                    const specfun::QuadratureSpec& quad = {});

/// Network outage: outage_multi averaged over the nearest-node distance.
double network_outage(const NetworkParams& net, const channel::EnvironmentParams& env,
                      const channel::RadioParams& radio,
                      const specfun::QuadratureSpec& quad = {});

/// Nearest-interferer-only outage built from the single-interferer SIR
/// forms, averaged over the nearest-point distance.
double outage_nearest_geometry(const LinkGeometry& main_link, const NetworkParams& net,
                               const channel::EnvironmentParams& env,
                               const channel::RadioParams& radio,
                               const specfun::QuadratureSpec& quad = {});
double outage_nearest(double ell_m, const NetworkParams& net,
                      const channel::EnvironmentParams& env,
                      const channel::RadioParams& radio,
                      const specfun::QuadratureSpec& quad = {});

}  // namespace uavls::network
