#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "uavls/channel.hpp"
#include "uavls/geometry.hpp"
#include "uavls/network.hpp"
#include "uavls/outage.hpp"

namespace uavls::mcsim {

enum class SinrMode { sinr, sir };
enum class Env { los, nlos };

struct SimSpec {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 0;
    SinrMode mode = SinrMode::sinr;
    std::optional<std::pair<Env, Env>> forced_env;  // (main, interferer)
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;
};

struct SimResult {
    double estimate;
    double std_error;
    std::uint64_t trials_used;
};

/// Deterministic per-trial random stream. Two trials with the same (seed,
/// stream) produce identical draws regardless of execution order, so
/// parallel and serial runs agree bit for bit.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    double uniform();      // (0, 1)
    double normal();
    double exponential();  // unit mean
    std::uint64_t poisson(double mean);

private:
    std::uint64_t s0_;
    std::uint64_t s1_;
    bool has_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

/// Rician fading power per the noncentral chi-squared model:
/// h = (X1 + sqrt(2k))^2 + X2^2, mean 2 + 2k.
double sample_fading_los(double k, TrialRng& rng);

/// Rayleigh fading power: unit-mean exponential.
double sample_fading_nlos(TrialRng& rng);

/// Homogeneous PPP on a disk of the given radius centered at the origin.
std::vector<std::array<double, 2>> sample_ppp_disk(double lambda, double radius,
                                                   TrialRng& rng);

/// Single-interferer outage estimate for validating the conditional forms.
SimResult simulate_pair_outage(const outage::LinkPairConfig& cfg, const SimSpec& spec);

/// Main-link LoS fading model used by the network simulators.
enum class MainFading {
    nakagami,  // Gamma(m, 1/m), the multi-interferer analysis model
    rician     // noncentral chi-squared, the nearest-interferer analysis model
};

struct NetworkSimOptions {
    bool nearest_interferer_only = false;
    std::optional<Env> forced_main_env;
    MainFading main_fading = MainFading::nakagami;
};

/// Fixed main link against a PPP interferer field (interference-limited).
/// Interferers closer than guard_radius (horizontally) are excluded.
SimResult simulate_multi_outage(const LinkGeometry& main_link, double guard_radius,
                                const network::NetworkParams& net,
                                const channel::EnvironmentParams& env,
                                const channel::RadioParams& radio, const SimSpec& spec,
                                const NetworkSimOptions& opts = {});

/// Nearest PPP node serves; the rest interfere. Empty realizations are
/// resampled (and counted in SimResult::trials_used as redraws).
SimResult simulate_network_outage(const network::NetworkParams& net,
                                  const channel::EnvironmentParams& env,
                                  const channel::RadioParams& radio, const SimSpec& spec,
                                  const NetworkSimOptions& opts = {});

}  // namespace uavls::mcsim
