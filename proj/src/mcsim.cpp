#include "uavls/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace uavls::mcsim {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct PairLinkState {
    double p_los;
    double k;
    double beta;
};

// Counts over disjoint trial ranges, merged by summation so the estimate is
// independent of the thread count and execution order.
template <typename PerTrial>
SimResult run_trials(const SimSpec& spec, PerTrial&& per_trial) {
    spec.validate();
    unsigned n_threads = spec.threads > 0
                             ? static_cast<unsigned>(spec.threads)
                             : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(
        std::min<std::uint64_t>(n_threads, spec.trials));

    std::vector<std::uint64_t> counts(n_threads, 0);
    auto worker = [&](unsigned idx) {
        const std::uint64_t lo = spec.trials * idx / n_threads;
        const std::uint64_t hi = spec.trials * (idx + 1) / n_threads;
        std::uint64_t c = 0;
        for (std::uint64_t t = lo; t < hi; ++t) {
            TrialRng rng(spec.seed, t);
            if (per_trial(rng)) ++c;
        }
        counts[idx] = c;
    };

    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker, i);
        for (auto& th : pool) th.join();
    }

    std::uint64_t outages = 0;
    for (auto c : counts) outages += c;
    const double n = static_cast<double>(spec.trials);
    const double p = static_cast<double>(outages) / n;
    return {p, std::sqrt(p * (1.0 - p) / n), spec.trials};
}

}  // namespace

void SimSpec::validate() const {
    if (trials < 1) throw std::invalid_argument("SimSpec: trials must be >= 1");
    if (threads < 0) throw std::invalid_argument("SimSpec: threads must be >= 0");
}

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t mix = seed;
    (void)splitmix64(mix);
    mix ^= 0xD1B54A32D192ED03ULL * (stream + 1);
    s0_ = splitmix64(mix);
    s1_ = splitmix64(mix);
    if (s0_ == 0 && s1_ == 0) s1_ = 1;
}

std::uint64_t TrialRng::next_u64() {
    std::uint64_t x = s0_;
    const std::uint64_t y = s1_;
    s0_ = y;
    x ^= x << 23;
    s1_ = x ^ y ^ (x >> 17) ^ (y >> 26);
    return s1_ + y;
}

double TrialRng::uniform() {
    // 53-bit mantissa, offset half a ulp so the result is never 0 or 1.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double TrialRng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_normal_ = true;
    return r * std::cos(theta);
}

double TrialRng::exponential() { return -std::log(uniform()); }

std::uint64_t TrialRng::poisson(double mean) {
    if (!(mean >= 0.0)) throw std::domain_error("poisson: mean must be >= 0");
    // Unit-rate arrival counting; immune to the e^{-mean} underflow of the
    // product form and exact for the disk intensities used here.
    std::uint64_t n = 0;
    double acc = exponential();
    while (acc <= mean) {
        ++n;
        acc += exponential();
    }
    return n;
}

double sample_fading_los(double k, TrialRng& rng) {
    if (!(k >= 0.0)) throw std::domain_error("sample_fading_los: k must be >= 0");
    const double x1 = rng.normal() + std::sqrt(2.0 * k);
    const double x2 = rng.normal();
    return x1 * x1 + x2 * x2;
}

double sample_fading_nlos(TrialRng& rng) { return rng.exponential(); }

std::vector<std::array<double, 2>> sample_ppp_disk(double lambda, double radius,
                                                   TrialRng& rng) {
    if (!(lambda > 0.0) || !(radius > 0.0)) {
        throw std::domain_error("sample_ppp_disk: lambda and radius must be > 0");
    }
    const std::uint64_t n = rng.poisson(lambda * M_PI * radius * radius);
    std::vector<std::array<double, 2>> pts(n);
    for (auto& p : pts) {
        const double r = radius * std::sqrt(rng.uniform());
        const double th = 2.0 * M_PI * rng.uniform();
        p = {r * std::cos(th), r * std::sin(th)};
    }
    return pts;
}

SimResult simulate_pair_outage(const outage::LinkPairConfig& cfg, const SimSpec& spec) {
    cfg.validate();
    const auto ms = channel::evaluate_link(cfg.main, cfg.env, cfg.radio.p_m);
    const auto is = channel::evaluate_link(cfg.interferer, cfg.env, cfg.radio.p_i);
    const PairLinkState main{ms.p_los, ms.k, ms.beta};
    const PairLinkState intf{is.p_los, is.k, is.beta};
    const double gamma_t = cfg.radio.gamma_t;
    const double n_o = spec.mode == SinrMode::sir ? 0.0 : cfg.radio.n_o;

    auto trial = [&](TrialRng& rng) {
        const bool main_los = spec.forced_env ? spec.forced_env->first == Env::los
                                              : rng.uniform() < main.p_los;
        const bool intf_los = spec.forced_env ? spec.forced_env->second == Env::los
                                              : rng.uniform() < intf.p_los;
        const double h_m =
            main_los ? sample_fading_los(main.k, rng) : sample_fading_nlos(rng);
        const double h_i =
            intf_los ? sample_fading_los(intf.k, rng) : sample_fading_nlos(rng);
        return h_m * main.beta < gamma_t * (h_i * intf.beta + n_o);
    };
    return run_trials(spec, trial);
}

namespace {

struct FieldSampler {
    const network::NetworkParams* net;
    const channel::EnvironmentParams* env;
    double p_i;

    // Interference from one node at planar position (x, y); nodes inside the
    // guard circle contribute nothing but still consume their draws so that
    // paired variants stay aligned.
    double node_power(double x, double y, double guard, TrialRng& rng,
                      double* dist_out) const {
        const double t = std::sqrt(x * x + y * y);
        const auto st = channel::evaluate_link(
            LinkGeometry::from_distances(t, net->interferer_height, net->rx_height),
            *env, p_i);
        const bool los = rng.uniform() < st.p_los;
        const double h = los ? sample_fading_los(st.k, rng) : sample_fading_nlos(rng);
        *dist_out = t;
        if (t < guard) return -1.0;
        return h * st.beta;
    }
};

double sample_main_fading(MainFading mode, bool los, double k, int m, TrialRng& rng) {
    if (!los) return sample_fading_nlos(rng);
    if (mode == MainFading::rician) return sample_fading_los(k, rng);
    double acc = 0.0;
    for (int i = 0; i < m; ++i) acc += rng.exponential();
    return acc / m;
}

}  // namespace

SimResult simulate_multi_outage(const LinkGeometry& main_link, double guard_radius,
                                const network::NetworkParams& net,
                                const channel::EnvironmentParams& env,
                                const channel::RadioParams& radio, const SimSpec& spec,
                                const NetworkSimOptions& opts) {
    net.validate();
    env.validate();
    radio.validate();
    if (spec.forced_env) {
        throw std::invalid_argument(
            "simulate_multi_outage: use NetworkSimOptions::forced_main_env");
    }
    const auto ms = channel::evaluate_link(main_link, env, radio.p_m);
    const FieldSampler field{&net, &env, radio.p_i};
    const double gamma_t = radio.gamma_t;
    const int m = net.nakagami_m;

    auto trial = [&](TrialRng& rng) {
        const bool main_los = opts.forced_main_env
                                  ? *opts.forced_main_env == Env::los
                                  : rng.uniform() < ms.p_los;
        const double h_m = sample_main_fading(opts.main_fading, main_los, ms.k, m, rng);

        const auto pts = sample_ppp_disk(net.lambda_i, net.deployment_radius, rng);
        double interference = 0.0;
        double nearest_power = 0.0;
        double nearest_dist = std::numeric_limits<double>::infinity();
        for (const auto& p : pts) {
            double dist;
            const double w = field.node_power(p[0], p[1], guard_radius, rng, &dist);
            if (w < 0.0) continue;
            interference += w;
            if (dist < nearest_dist) {
                nearest_dist = dist;
                nearest_power = w;
            }
        }
        if (opts.nearest_interferer_only) interference = nearest_power;
        return h_m * ms.beta < gamma_t * interference;
    };
    return run_trials(spec, trial);
}

SimResult simulate_network_outage(const network::NetworkParams& net,
                                  const channel::EnvironmentParams& env,
                                  const channel::RadioParams& radio, const SimSpec& spec,
                                  const NetworkSimOptions& opts) {
    net.validate();
    env.validate();
    radio.validate();
    if (spec.forced_env) {
        throw std::invalid_argument(
            "simulate_network_outage: use NetworkSimOptions::forced_main_env");
    }
    const FieldSampler field{&net, &env, radio.p_i};
    const double gamma_t = radio.gamma_t;
    const int m = net.nakagami_m;

    auto trial = [&](TrialRng& rng) {
        // The analysis conditions on a serving node existing; with the disk
        // intensities used here an empty draw is a ~e^{-700} event.
        std::vector<std::array<double, 2>> pts;
        do {
            pts = sample_ppp_disk(net.lambda_i, net.deployment_radius, rng);
        } while (pts.empty());

        std::size_t serving = 0;
        double best = std::numeric_limits<double>::max();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double d2 = pts[i][0] * pts[i][0] + pts[i][1] * pts[i][1];
            if (d2 < best) {
                best = d2;
                serving = i;
            }
        }
        const double r_serve = std::sqrt(best);
        const auto ms = channel::evaluate_link(
            LinkGeometry::from_distances(r_serve, net.interferer_height, net.rx_height),
            env, radio.p_m);

        const bool main_los = opts.forced_main_env
                                  ? *opts.forced_main_env == Env::los
                                  : rng.uniform() < ms.p_los;
        const double h_m = sample_main_fading(opts.main_fading, main_los, ms.k, m, rng);

        double interference = 0.0;
        double nearest_power = 0.0;
        double nearest_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i == serving) continue;
            double dist;
            const double w = field.node_power(pts[i][0], pts[i][1], 0.0, rng, &dist);
            interference += w;
            if (dist < nearest_dist) {
                nearest_dist = dist;
                nearest_power = w;
            }
        }
        if (opts.nearest_interferer_only) interference = nearest_power;
        return h_m * ms.beta < gamma_t * interference;
    };
    return run_trials(spec, trial);
}

}  // namespace uavls::mcsim
